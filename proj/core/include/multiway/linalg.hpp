#pragma once

// Dense factorization kernels. Everything that needs an SVD, QR or
// pseudo-inverse goes through these functions; they are thin wrappers over
// Eigen's BDCSVD (divide and conquer, Jacobi below 16 columns) and
// column-pivoted Householder QR, both backward stable.

#include "multiway/tensor.hpp"

#include <cstdint>
#include <random>

namespace multiway {

using Rng = std::mt19937_64;

struct Svd {
  Matrix u;
  Vector s;  // descending
  Matrix v;
};

/// Thin SVD: u is m x k, v is n x k, k = min(m, n).
Svd thin_svd(const Matrix& a);

/// All m left singular vectors (m x m) with the spectrum zero-padded to m.
Svd full_left_svd(const Matrix& a);

/// Leading r left singular vectors, sign-canonicalized.
Matrix leading_left_singular_vectors(const Matrix& a, std::size_t r);

/// Moore-Penrose inverse; singular values below rcond * sigma_max are dropped.
Matrix pinv(const Matrix& a, double rcond = 1e-12);

/// argmin_X ||a X - b||_F via column-pivoted QR.
Matrix solve_least_squares(const Matrix& a, const Matrix& b);

/// Number of singular values above rel_tol * sigma_max (0 for a zero matrix).
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-10);

/// 2-norm condition number (infinity when rank deficient).
double condition_number(const Matrix& a);

/// Flip column signs so the largest-magnitude entry of each column of `u` is
/// positive. When `partner` is given its matching columns are flipped too.
void canonicalize_signs(Matrix& u, Matrix* partner = nullptr);

/// Principal angles (radians, ascending) between the column spaces of a and b.
Vector principal_angles(const Matrix& a, const Matrix& b);

/// Orthonormal basis of range(a) (thin Q from column-pivoted QR, rank-revealing).
Matrix orthonormal_basis(const Matrix& a, double rel_tol = 1e-12);

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);
Vector random_gaussian_vector(std::size_t n, Rng& rng);

/// Haar-distributed matrix with orthonormal columns (rows >= cols).
Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace multiway
