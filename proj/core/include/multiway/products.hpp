#pragma once

// Multilinear products and (un)foldings. Mode indices are 0-based.

#include "multiway/tensor.hpp"

#include <optional>
#include <vector>

namespace multiway {

/// Mode-n matricization: I_n rows, columns ordered with lower modes fastest so
/// that X_(n) = B_n D (B_N (.) ... (.) B_{n+1} (.) B_{n-1} (.) ... (.) B_1)^T
/// holds exactly for CP models.
Matrix unfold(const DenseTensor& t, std::size_t mode);

/// Inverse of unfold for a tensor of the given shape.
DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);

/// t x_n m : replaces extent I_n by rows(m). Requires cols(m) == I_n.
DenseTensor mode_n_product(const DenseTensor& t, const Matrix& m, std::size_t mode);

/// Same as mode_n_product(t, m.transpose(), mode) without forming the transpose.
DenseTensor mode_n_product_transposed(const DenseTensor& t, const Matrix& m, std::size_t mode);

/// Full multilinear product t x_1 B_1 x_2 B_2 ... x_N B_N.
DenseTensor multilinear_product(const DenseTensor& t, const std::vector<Matrix>& factors);

/// t x_1 B_1^T ... x_N B_N^T, optionally skipping one mode.
DenseTensor multilinear_product_transposed(const DenseTensor& t,
                                           const std::vector<Matrix>& factors,
                                           std::optional<std::size_t> skip_mode = std::nullopt);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Column-wise Kronecker product; column r is a_r (x) b_r.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// B_{N-1} (.) ... (.) B_0 over all factors except `skip_mode` (highest mode
/// leftmost), i.e. the matrix whose rows are indexed like unfolding columns.
Matrix khatri_rao_except(const std::vector<Matrix>& factors,
                         std::optional<std::size_t> skip_mode = std::nullopt);

/// B_{N-1} (x) ... (x) B_0 over all factors except `skip_mode`.
Matrix kronecker_except(const std::vector<Matrix>& factors,
                        std::optional<std::size_t> skip_mode = std::nullopt);

/// Rank-1 tensor a_1 o a_2 o ... o a_N.
DenseTensor outer(const std::vector<Vector>& vectors);

/// Order-N cubical tensor with `diag` on its superdiagonal.
DenseTensor diagonal_tensor(const Vector& diag, std::size_t order);

}  // namespace multiway
