#include "multiway/tensorize.hpp"

#include <stdexcept>
#include <string>

namespace multiway {

Matrix hankelize(const Vector& signal, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("hankelize: extents must be positive");
  if (static_cast<std::size_t>(signal.size()) != rows + cols - 1) {
    throw std::invalid_argument("hankelize: signal length " + std::to_string(signal.size()) +
                                " != rows + cols - 1 = " + std::to_string(rows + cols - 1));
  }
  Matrix h(rows, cols);
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    h.col(j) = signal.segment(j, h.rows());
  }
  return h;
}

DenseTensor hankel_tensorize(const Matrix& signals, std::size_t rows, std::size_t cols) {
  const auto k_count = static_cast<std::size_t>(signals.rows());
  if (k_count == 0) throw std::invalid_argument("hankel_tensorize: no signals");
  DenseTensor t({rows, cols, k_count});
  const std::size_t slice = rows * cols;
  for (std::size_t k = 0; k < k_count; ++k) {
    Matrix h = hankelize(signals.row(static_cast<Eigen::Index>(k)).transpose(), rows, cols);
    std::copy(h.data(), h.data() + slice, t.data().begin() + static_cast<std::ptrdiff_t>(k * slice));
  }
  return t;
}

Vector dehankelize(const Matrix& h) {
  const Eigen::Index len = h.rows() + h.cols() - 1;
  Vector sum = Vector::Zero(len);
  Vector count = Vector::Zero(len);
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      sum(i + j) += h(i, j);
      count(i + j) += 1.0;
    }
  }
  return sum.cwiseQuotient(count);
}

std::size_t exact_log(std::size_t n, std::size_t base) {
  if (base < 2) throw std::invalid_argument("quantization base must be at least 2");
  if (n < base) {
    throw std::invalid_argument("length " + std::to_string(n) + " is not a positive power of " +
                                std::to_string(base));
  }
  std::size_t levels = 0;
  while (n > 1) {
    if (n % base != 0) {
      throw std::invalid_argument("length is not an exact power of " + std::to_string(base));
    }
    n /= base;
    ++levels;
  }
  return levels;
}

DenseTensor quantize(const Vector& v, std::size_t base) {
  const std::size_t levels = exact_log(static_cast<std::size_t>(v.size()), base);
  return DenseTensor(Shape(levels, base), std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace multiway
