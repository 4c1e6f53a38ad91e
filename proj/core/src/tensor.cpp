#include "multiway/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace multiway {

namespace index_map {

std::size_t element_count(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides(std::span<const std::size_t> shape) {
  std::vector<std::size_t> s(shape.size());
  std::size_t acc = 1;
  for (std::size_t n = 0; n < shape.size(); ++n) {
    s[n] = acc;
    acc *= shape[n];
  }
  return s;
}

std::size_t linear(std::span<const std::size_t> shape, std::span<const std::size_t> idx) {
  if (idx.size() != shape.size()) {
    throw std::invalid_argument("index arity does not match tensor order");
  }
  std::size_t pos = 0;
  std::size_t stride = 1;
  for (std::size_t n = 0; n < shape.size(); ++n) {
    if (idx[n] >= shape[n]) {
      throw std::out_of_range("index " + std::to_string(idx[n]) + " out of range in mode " +
                              std::to_string(n));
    }
    pos += idx[n] * stride;
    stride *= shape[n];
  }
  return pos;
}

Index multi(std::span<const std::size_t> shape, std::size_t linear_index) {
  Index idx(shape.size());
  for (std::size_t n = 0; n < shape.size(); ++n) {
    idx[n] = linear_index % shape[n];
    linear_index /= shape[n];
  }
  return idx;
}

std::size_t unfolding_column(std::span<const std::size_t> shape, std::size_t mode,
                             std::span<const std::size_t> idx) {
  std::size_t col = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (k == mode) continue;
    col += idx[k] * stride;
    stride *= shape[k];
  }
  return col;
}

}  // namespace index_map

namespace {

void validate_shape(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor order must be at least 1");
  for (auto e : shape) {
    if (e == 0) throw std::invalid_argument("tensor extents must be positive");
  }
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("tensor shapes differ");
}

}  // namespace

DenseTensor::DenseTensor() : shape_{1}, data_(1, 0.0) {}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(index_map::element_count(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != index_map::element_count(shape_)) {
    throw std::invalid_argument("data length " + std::to_string(data_.size()) +
                                " does not match product of extents");
  }
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                     std::move(data));
}

DenseTensor DenseTensor::from_vector(const Vector& v) {
  std::vector<double> data(v.data(), v.data() + v.size());
  return DenseTensor({static_cast<std::size_t>(v.size())}, std::move(data));
}

std::size_t DenseTensor::extent(std::size_t mode) const {
  if (mode >= shape_.size()) throw std::out_of_range("mode out of range");
  return shape_[mode];
}

double DenseTensor::at(std::span<const std::size_t> idx) const {
  return data_[index_map::linear(shape_, idx)];
}

double& DenseTensor::at(std::span<const std::size_t> idx) {
  return data_[index_map::linear(shape_, idx)];
}

Eigen::Map<const Matrix> DenseTensor::as_matrix() const {
  if (order() != 2) throw std::invalid_argument("as_matrix requires an order-2 tensor");
  return {data_.data(), static_cast<Eigen::Index>(shape_[0]),
          static_cast<Eigen::Index>(shape_[1])};
}

DenseTensor DenseTensor::reshaped(Shape shape) const {
  return DenseTensor(std::move(shape), data_);
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  DenseTensor out = a;
  out.vectorize() += b.vectorize();
  return out;
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  DenseTensor out = a;
  out.vectorize() -= b.vectorize();
  return out;
}

DenseTensor operator*(double s, const DenseTensor& a) {
  DenseTensor out = a;
  out.vectorize() *= s;
  return out;
}

double frobenius_norm(const DenseTensor& t) { return t.vectorize().norm(); }

double inner(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  return a.vectorize().dot(b.vectorize());
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b);
  return (a.vectorize() - b.vectorize()).cwiseAbs().maxCoeff();
}

}  // namespace multiway
