#include "multiway/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace multiway {

namespace {

// Exhaustive search is fine for the handful of components we compare.
constexpr std::size_t kMaxExhaustive = 8;

std::vector<std::size_t> min_cost_assignment(const Matrix& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (n <= kMaxExhaustive) {
    std::vector<std::size_t> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        c += cost(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(perm[j]));
      }
      if (c < best_cost) {
        best_cost = c;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // greedy fallback for large counts
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = cost(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (!used[k] && c < best) {
        best = c;
        arg = k;
      }
    }
    used[arg] = true;
    perm[j] = arg;
  }
  return perm;
}

void check_columns(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("vector sets must have matching counts and lengths");
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (a.col(j).norm() == 0.0 || b.col(j).norm() == 0.0) {
      throw std::invalid_argument("zero-norm vector");
    }
  }
}

double squared_sine(const Vector& a, const Vector& b) {
  const Vector ua = a.normalized();
  const Vector ub = b.normalized();
  return (ua - ub * ub.dot(ua)).squaredNorm();
}

}  // namespace

double relative_fit(const DenseTensor& reference, const DenseTensor& estimate) {
  const double ref = frobenius_norm(reference);
  const double res = frobenius_norm(reference - estimate);
  if (ref == 0.0) return res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - res / ref;
}

MetricsReport compare(const DenseTensor& reference, const DenseTensor& estimate) {
  MetricsReport r;
  r.residual_norm = frobenius_norm(reference - estimate);
  r.relative_fit = relative_fit(reference, estimate);
  r.psnr_db = compute_psnr(reference, estimate);
  return r;
}

std::vector<std::size_t> best_column_matching(const Matrix& a, const Matrix& b) {
  check_columns(a, b);
  Matrix cost(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      cost(i, j) = squared_sine(a.col(i), b.col(j));
    }
  }
  return min_cost_assignment(cost);
}

double compute_sae(const Matrix& true_vectors, const Matrix& estimated_vectors) {
  const auto perm = best_column_matching(true_vectors, estimated_vectors);
  double total = 0.0;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    total += squared_sine(true_vectors.col(static_cast<Eigen::Index>(j)),
                          estimated_vectors.col(static_cast<Eigen::Index>(perm[j])));
  }
  const double mean = total / static_cast<double>(perm.size());
  if (!(mean > 0.0)) return kSaeFloorDb;
  return std::max(kSaeFloorDb, 10.0 * std::log10(mean));
}

Vector matched_abs_correlations(const Matrix& a, const Matrix& b) {
  const auto perm = best_column_matching(a, b);
  Vector out(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const auto k = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]);
    out(j) = std::abs(a.col(j).normalized().dot(b.col(k).normalized()));
  }
  return out;
}

double compute_psnr(const DenseTensor& reference, const DenseTensor& estimate) {
  const double rss = (reference.vectorize() - estimate.vectorize()).squaredNorm();
  const double peak = reference.vectorize().cwiseAbs().maxCoeff();
  if (rss == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak * static_cast<double>(reference.size()) / rss);
}

}  // namespace multiway
