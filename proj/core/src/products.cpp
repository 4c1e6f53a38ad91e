#include "multiway/products.hpp"

#include <stdexcept>
#include <string>

namespace multiway {

namespace {

struct ModeSplit {
  std::size_t left = 1;   // product of extents below the mode
  std::size_t extent = 1;
  std::size_t right = 1;  // product of extents above the mode
};

ModeSplit split_at(const Shape& shape, std::size_t mode) {
  if (mode >= shape.size()) {
    throw std::out_of_range("mode " + std::to_string(mode) + " out of range for order " +
                            std::to_string(shape.size()));
  }
  ModeSplit s;
  for (std::size_t k = 0; k < mode; ++k) s.left *= shape[k];
  s.extent = shape[mode];
  for (std::size_t k = mode + 1; k < shape.size(); ++k) s.right *= shape[k];
  return s;
}

using ConstBlock = Eigen::Map<const Matrix>;
using Block = Eigen::Map<Matrix>;

template <typename Apply>
DenseTensor apply_along_mode(const DenseTensor& t, std::size_t mode, std::size_t new_extent,
                             Apply&& apply) {
  const ModeSplit s = split_at(t.shape(), mode);
  Shape out_shape = t.shape();
  out_shape[mode] = new_extent;
  DenseTensor out(out_shape);
  const auto left = static_cast<Eigen::Index>(s.left);
  const auto in_ext = static_cast<Eigen::Index>(s.extent);
  const auto out_ext = static_cast<Eigen::Index>(new_extent);
  const double* src = t.data().data();
  double* dst = out.data().data();
  for (std::size_t r = 0; r < s.right; ++r) {
    ConstBlock in(src + r * s.left * s.extent, left, in_ext);
    Block res(dst + r * s.left * new_extent, left, out_ext);
    apply(in, res);
  }
  return out;
}

}  // namespace

Matrix unfold(const DenseTensor& t, std::size_t mode) {
  const ModeSplit s = split_at(t.shape(), mode);
  Matrix m(static_cast<Eigen::Index>(s.extent), static_cast<Eigen::Index>(s.left * s.right));
  const double* src = t.data().data();
  for (std::size_t r = 0; r < s.right; ++r) {
    ConstBlock block(src + r * s.left * s.extent, static_cast<Eigen::Index>(s.left),
                     static_cast<Eigen::Index>(s.extent));
    m.middleCols(static_cast<Eigen::Index>(r * s.left), static_cast<Eigen::Index>(s.left)) =
        block.transpose();
  }
  return m;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
  const ModeSplit s = split_at(shape, mode);
  if (static_cast<std::size_t>(m.rows()) != s.extent ||
      static_cast<std::size_t>(m.cols()) != s.left * s.right) {
    throw std::invalid_argument("fold: matrix extents incompatible with shape and mode");
  }
  DenseTensor t(shape);
  double* dst = t.data().data();
  for (std::size_t r = 0; r < s.right; ++r) {
    Block block(dst + r * s.left * s.extent, static_cast<Eigen::Index>(s.left),
                static_cast<Eigen::Index>(s.extent));
    block = m.middleCols(static_cast<Eigen::Index>(r * s.left),
                         static_cast<Eigen::Index>(s.left))
                .transpose();
  }
  return t;
}

DenseTensor mode_n_product(const DenseTensor& t, const Matrix& m, std::size_t mode) {
  if (mode >= t.order()) throw std::out_of_range("mode out of range");
  if (static_cast<std::size_t>(m.cols()) != t.shape()[mode]) {
    throw std::invalid_argument("mode_n_product: matrix has " + std::to_string(m.cols()) +
                                " columns, mode extent is " + std::to_string(t.shape()[mode]));
  }
  return apply_along_mode(t, mode, static_cast<std::size_t>(m.rows()),
                          [&](const ConstBlock& in, Block& out) { out.noalias() = in * m.transpose(); });
}

DenseTensor mode_n_product_transposed(const DenseTensor& t, const Matrix& m, std::size_t mode) {
  if (mode >= t.order()) throw std::out_of_range("mode out of range");
  if (static_cast<std::size_t>(m.rows()) != t.shape()[mode]) {
    throw std::invalid_argument("mode_n_product_transposed: matrix has " +
                                std::to_string(m.rows()) + " rows, mode extent is " +
                                std::to_string(t.shape()[mode]));
  }
  return apply_along_mode(t, mode, static_cast<std::size_t>(m.cols()),
                          [&](const ConstBlock& in, Block& out) { out.noalias() = in * m; });
}

DenseTensor multilinear_product(const DenseTensor& t, const std::vector<Matrix>& factors) {
  if (factors.size() != t.order()) {
    throw std::invalid_argument("multilinear_product: need one factor per mode");
  }
  DenseTensor out = t;
  for (std::size_t n = 0; n < factors.size(); ++n) out = mode_n_product(out, factors[n], n);
  return out;
}

DenseTensor multilinear_product_transposed(const DenseTensor& t,
                                           const std::vector<Matrix>& factors,
                                           std::optional<std::size_t> skip_mode) {
  if (factors.size() != t.order()) {
    throw std::invalid_argument("multilinear_product_transposed: need one factor per mode");
  }
  DenseTensor out = t;
  for (std::size_t n = 0; n < factors.size(); ++n) {
    if (skip_mode && *skip_mode == n) continue;
    out = mode_n_product_transposed(out, factors[n], n);
  }
  return out;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return c;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("khatri_rao: column counts differ (" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.cols()) + ")");
  }
  Matrix c(a.rows() * b.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.cols(); ++r) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      c.col(r).segment(i * b.rows(), b.rows()) = a(i, r) * b.col(r);
    }
  }
  return c;
}

Matrix khatri_rao_except(const std::vector<Matrix>& factors, std::optional<std::size_t> skip_mode) {
  if (factors.empty()) throw std::invalid_argument("khatri_rao_except: no factors");
  const auto cols = factors.front().cols();
  Matrix acc = Matrix::Ones(1, cols);
  for (std::size_t n = 0; n < factors.size(); ++n) {
    if (skip_mode && *skip_mode == n) continue;
    acc = khatri_rao(factors[n], acc);
  }
  return acc;
}

Matrix kronecker_except(const std::vector<Matrix>& factors, std::optional<std::size_t> skip_mode) {
  Matrix acc = Matrix::Ones(1, 1);
  for (std::size_t n = 0; n < factors.size(); ++n) {
    if (skip_mode && *skip_mode == n) continue;
    acc = kronecker(factors[n], acc);
  }
  return acc;
}

DenseTensor outer(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("outer: need at least one vector");
  Shape shape;
  Vector acc = Vector::Ones(1);
  for (const auto& v : vectors) {
    if (v.size() == 0) throw std::invalid_argument("outer: empty vector");
    shape.push_back(static_cast<std::size_t>(v.size()));
    acc = kronecker(v, acc);
  }
  return DenseTensor(std::move(shape), std::vector<double>(acc.data(), acc.data() + acc.size()));
}

DenseTensor diagonal_tensor(const Vector& diag, std::size_t order) {
  const auto r = static_cast<std::size_t>(diag.size());
  if (r == 0 || order == 0) throw std::invalid_argument("diagonal_tensor: empty");
  DenseTensor t(Shape(order, r));
  std::size_t step = 0;
  std::size_t stride = 1;
  for (std::size_t n = 0; n < order; ++n) {
    step += stride;
    stride *= r;
  }
  for (std::size_t i = 0; i < r; ++i) t[i * step] = diag(static_cast<Eigen::Index>(i));
  return t;
}

}  // namespace multiway
