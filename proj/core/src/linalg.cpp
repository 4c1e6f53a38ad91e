#include "multiway/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace multiway {

Svd thin_svd(const Matrix& a) {
  if (a.size() == 0) return {Matrix(a.rows(), 0), Vector(0), Matrix(a.cols(), 0)};
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Svd full_left_svd(const Matrix& a) {
  const auto m = a.rows();
  if (a.cols() == 0) return {Matrix::Identity(m, m), Vector::Zero(m), Matrix(0, 0)};
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeThinV);
  Vector s = Vector::Zero(m);
  s.head(svd.singularValues().size()) = svd.singularValues();
  return {svd.matrixU(), s, svd.matrixV()};
}

Matrix leading_left_singular_vectors(const Matrix& a, std::size_t r) {
  if (r > static_cast<std::size_t>(a.rows())) {
    throw std::invalid_argument("requested more singular vectors than rows");
  }
  Svd svd = full_left_svd(a);
  Matrix u = svd.u.leftCols(static_cast<Eigen::Index>(r));
  canonicalize_signs(u);
  return u;
}

Matrix pinv(const Matrix& a, double rcond) {
  Svd svd = thin_svd(a);
  if (svd.s.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  const double cutoff = rcond * svd.s(0);
  Vector inv = Vector::Zero(svd.s.size());
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
    if (svd.s(i) > cutoff && svd.s(i) > 0.0) inv(i) = 1.0 / svd.s(i);
  }
  return svd.v * inv.asDiagonal() * svd.u.transpose();
}

Matrix solve_least_squares(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("least squares: row mismatch");
  return a.colPivHouseholderQr().solve(b);
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

double condition_number(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

void canonicalize_signs(Matrix& u, Matrix* partner) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      if (std::abs(u(i, j)) > best) {
        best = std::abs(u(i, j));
        arg = i;
      }
    }
    if (u.rows() > 0 && u(arg, j) < 0.0) {
      u.col(j) *= -1.0;
      if (partner != nullptr && j < partner->cols()) partner->col(j) *= -1.0;
    }
  }
}

Matrix orthonormal_basis(const Matrix& a, double rel_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(rel_tol);
  const auto r = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), r);
  return q;
}

Vector principal_angles(const Matrix& a, const Matrix& b) {
  Matrix qa = orthonormal_basis(a);
  Matrix qb = orthonormal_basis(b);
  if (qb.cols() > qa.cols()) std::swap(qa, qb);
  if (qb.cols() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(qa.transpose() * qb);
  Vector cosines = svd.singularValues();
  Vector angles(cosines.size());
  // sin-based formula keeps small angles accurate
  Matrix residual = qb - qa * (qa.transpose() * qb);
  Eigen::BDCSVD<Matrix> sres(residual);
  Vector sines = sres.singularValues();
  const auto k = cosines.size();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    // both spectra are descending, so the i-th cosine pairs with the i-th smallest sine
    const double s = std::clamp(sines(k - 1 - i), 0.0, 1.0);
    angles(i) = std::atan2(s, c);
  }
  return angles;
}

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
  }
  return m;
}

Vector random_gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
  return v;
}

Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw std::invalid_argument("random_orthonormal needs rows >= cols");
  Matrix g = random_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  // fix the sign ambiguity so the distribution is Haar
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace multiway
