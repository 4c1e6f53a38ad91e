#include "multiway/ica.hpp"

#include "multiway/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace multiway {

namespace {

Matrix centered(const Matrix& x) {
  return x.colwise() - x.rowwise().mean();
}

void check(const Matrix& x, std::size_t sources, const char* who) {
  if (sources == 0 || sources > static_cast<std::size_t>(x.rows()) || x.cols() < 2) {
    throw std::invalid_argument(std::string(who) + ": need 0 < sources <= channels and at least two samples");
  }
}

// Cumulant slices Q_kl(i, j) = Cum(z_i, z_j, z_k, z_l) for whitened z.
std::vector<Matrix> cumulant_slices(const Matrix& z) {
  const auto n = z.rows();
  const double samples = static_cast<double>(z.cols());
  const Matrix cov = z * z.transpose() / samples;
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k; l < n; ++l) {
      const Eigen::RowVectorXd w = z.row(k).cwiseProduct(z.row(l));
      Matrix q = z * w.asDiagonal() * z.transpose() / samples;
      q -= cov(k, l) * cov;
      q -= cov.col(k) * cov.col(l).transpose();
      q -= cov.col(l) * cov.col(k).transpose();
      out.push_back(std::move(q));
    }
  }
  return out;
}

// Orthogonal V approximately diagonalizing every V^T Q V.
Matrix joint_diagonalize(std::vector<Matrix> qs, const IcaOptions& opts) {
  const auto n = qs.front().rows();
  Matrix v = Matrix::Identity(n, n);
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        double ton = 0.0, toff = 0.0, g00 = 0.0, g11 = 0.0, g01 = 0.0;
        for (const auto& m : qs) {
          const double a = m(p, p) - m(q, q);
          const double b = m(p, q) + m(q, p);
          g00 += a * a;
          g11 += b * b;
          g01 += a * b;
        }
        ton = g00 - g11;
        toff = 2.0 * g01;
        const double theta = 0.5 * std::atan2(toff, ton + std::sqrt(ton * ton + toff * toff));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        if (std::abs(s) <= opts.rotation_tol) continue;
        rotated = true;
        for (auto& m : qs) {
          const Eigen::RowVectorXd rp = m.row(p), rq = m.row(q);
          m.row(p) = c * rp + s * rq;
          m.row(q) = -s * rp + c * rq;
          const Vector cp = m.col(p), cq = m.col(q);
          m.col(p) = c * cp + s * cq;
          m.col(q) = -s * cp + c * cq;
        }
        const Vector vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp + s * vq;
        v.col(q) = -s * vp + c * vq;
      }
    }
    if (!rotated) break;
  }
  return v;
}

}  // namespace

SeparationResult pca_separation(const Matrix& x, std::size_t sources) {
  check(x, sources, "pca_separation");
  const Matrix xc = centered(x);
  SeparationResult out;
  out.mixing = leading_left_singular_vectors(xc, sources);
  out.sources = out.mixing.transpose() * xc;
  return out;
}

SeparationResult ica_cumulant(const Matrix& x, std::size_t sources, const IcaOptions& opts) {
  check(x, sources, "ica_cumulant");
  const Matrix xc = centered(x);
  const double samples = static_cast<double>(x.cols());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(xc * xc.transpose() / samples);
  const auto r = static_cast<Eigen::Index>(sources);
  const Matrix e = eig.eigenvectors().rightCols(r);
  const Vector d = eig.eigenvalues().tail(r);
  if (d.minCoeff() <= 0.0) throw std::invalid_argument("ica_cumulant: data covariance is rank deficient");
  const Matrix whitener = d.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  const Matrix z = whitener * xc;
  const Matrix v = joint_diagonalize(cumulant_slices(z), opts);
  const Matrix separating = v.transpose() * whitener;
  SeparationResult out;
  out.mixing = pinv(separating);
  out.sources = separating * xc;
  return out;
}

}  // namespace multiway
