#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace multiway {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Shape = std::vector<std::size_t>;
using Index = std::vector<std::size_t>;

/// Index arithmetic for the canonical linearization.
///
/// All public indices are 0-based. The element at multi-index (i_0, ..., i_{N-1})
/// lives at linear position i_0 + i_1*I_0 + i_2*I_0*I_1 + ..., i.e. the first
/// mode varies fastest. Every other layout in the library (unfoldings,
/// vectorization, Kronecker/Khatri-Rao ordering) is derived from this map, so
/// it is the only place where the convention is spelled out.
namespace index_map {

std::size_t element_count(std::span<const std::size_t> shape);

/// Stride of each mode in the canonical layout.
std::vector<std::size_t> strides(std::span<const std::size_t> shape);

std::size_t linear(std::span<const std::size_t> shape, std::span<const std::size_t> idx);

Index multi(std::span<const std::size_t> shape, std::size_t linear_index);

/// Column of entry `idx` in the mode-`mode` unfolding (lower modes fastest).
std::size_t unfolding_column(std::span<const std::size_t> shape, std::size_t mode,
                             std::span<const std::size_t> idx);

}  // namespace index_map

/// Order-N real array stored in the canonical (first-mode-fastest) layout.
///
/// An order-2 tensor has exactly the memory layout of a column-major Eigen
/// matrix, and the flat data is the vectorization of the tensor.
class DenseTensor {
 public:
  /// An order-1 tensor holding a single zero.
  DenseTensor();
  /// Zero-filled tensor.
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  static DenseTensor from_matrix(const Matrix& m);
  static DenseTensor from_vector(const Vector& v);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t extent(std::size_t mode) const;
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double operator[](std::size_t linear_index) const { return data_[linear_index]; }
  double& operator[](std::size_t linear_index) { return data_[linear_index]; }

  double at(std::span<const std::size_t> idx) const;
  double& at(std::span<const std::size_t> idx);
  double at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Zero-copy vec() view.
  Eigen::Map<const Vector> vectorize() const noexcept {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }
  Eigen::Map<Vector> vectorize() noexcept {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  /// Zero-copy matrix view of an order-2 tensor; throws otherwise.
  Eigen::Map<const Matrix> as_matrix() const;

  /// Same data, new shape with the same element count.
  DenseTensor reshaped(Shape shape) const;

  bool operator==(const DenseTensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(double s, const DenseTensor& a);

double frobenius_norm(const DenseTensor& t);
double inner(const DenseTensor& a, const DenseTensor& b);
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

}  // namespace multiway
