#include "multiway/cpd.hpp"

#include "multiway/metrics.hpp"
#include "multiway/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace multiway {

namespace {

constexpr double kGramianConditionLimit = 1e8;
constexpr double kDivergenceRatio = 1e6;
constexpr double kCancellingCongruence = -0.8;

bool all_finite(const DenseTensor& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); });
}

// Returns column norms and scales columns to unit length. Columns already
// within a few ulps of unit length are left untouched so that canonicalization
// is idempotent bit for bit.
Vector normalize_columns(Matrix& m) {
  Vector norms(m.cols());
  for (Eigen::Index r = 0; r < m.cols(); ++r) {
    const double nrm = m.col(r).norm();
    if (nrm == 0.0) {
      norms(r) = 0.0;
      m.col(r).setZero();
      m(0, r) = 1.0;
    } else if (std::abs(nrm - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
      norms(r) = nrm;
      m.col(r) /= nrm;
    } else {
      norms(r) = 1.0;
    }
  }
  return norms;
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

double median(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  const auto n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

std::vector<Matrix> initial_factors(const DenseTensor& t, std::size_t rank,
                                    const CpAlsOptions& opts) {
  Rng rng(opts.seed);
  std::vector<Matrix> factors;
  for (std::size_t n = 0; n < t.order(); ++n) {
    const std::size_t extent = t.shape()[n];
    if (opts.init == CpInit::Random) {
      factors.push_back(random_gaussian(extent, rank, rng));
      continue;
    }
    const std::size_t lead = std::min(rank, extent);
    Matrix b(extent, rank);
    b.leftCols(static_cast<Eigen::Index>(lead)) = leading_left_singular_vectors(unfold(t, n), lead);
    if (rank > lead) {
      b.rightCols(static_cast<Eigen::Index>(rank - lead)) = random_gaussian(extent, rank - lead, rng);
    }
    factors.push_back(std::move(b));
  }
  return factors;
}

bool has_cancelling_pair(const CPModel& m, double data_norm) {
  for (Eigen::Index r = 0; r < m.weights.size(); ++r) {
    for (Eigen::Index s = r + 1; s < m.weights.size(); ++s) {
      if (m.weights(r) <= data_norm || m.weights(s) <= data_norm) continue;
      double congruence = 1.0;
      for (const auto& b : m.factors) congruence *= b.col(r).dot(b.col(s));
      if (congruence < kCancellingCongruence) return true;
    }
  }
  return false;
}

}  // namespace

Shape CPModel::shape() const {
  Shape s;
  for (const auto& b : factors) s.push_back(static_cast<std::size_t>(b.rows()));
  return s;
}

void validate(const CPModel& model) {
  if (model.factors.empty()) throw std::invalid_argument("CP model has no factors");
  for (const auto& b : model.factors) {
    if (b.cols() != model.weights.size()) {
      throw std::invalid_argument("CP factor column count differs from number of weights");
    }
    if (b.rows() == 0) throw std::invalid_argument("CP factor with zero rows");
  }
}

CPModel canonicalize(CPModel model) {
  validate(model);
  const auto rank = model.weights.size();
  for (auto& b : model.factors) {
    const Vector norms = normalize_columns(b);
    model.weights = model.weights.cwiseProduct(norms);
  }
  auto& first = model.factors.front();
  for (Eigen::Index r = 0; r < rank; ++r) {
    if (model.weights(r) < 0.0) {
      model.weights(r) = -model.weights(r);
      model.factors.back().col(r) *= -1.0;
    }
    // order-1 models keep the sign in the factor since weights stay non-negative
    if (model.factors.size() < 2) continue;
    Eigen::Index arg = 0;
    first.col(r).cwiseAbs().maxCoeff(&arg);
    if (first(arg, r) < 0.0) {
      first.col(r) *= -1.0;
      model.factors[1].col(r) *= -1.0;
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rank));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (model.weights(a) != model.weights(b)) return model.weights(a) > model.weights(b);
    return lexicographically_less(first.col(a), first.col(b));
  });
  CPModel out;
  out.weights.resize(rank);
  for (const auto& b : model.factors) out.factors.emplace_back(b.rows(), rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const auto src = order[static_cast<std::size_t>(r)];
    out.weights(r) = model.weights(src);
    for (std::size_t n = 0; n < model.factors.size(); ++n) {
      out.factors[n].col(r) = model.factors[n].col(src);
    }
  }
  return out;
}

DenseTensor cpd_reconstruct(const CPModel& model) {
  validate(model);
  const Matrix kr = khatri_rao_except(model.factors);
  const Vector vec = kr * model.weights;
  return DenseTensor(model.shape(), std::vector<double>(vec.data(), vec.data() + vec.size()));
}

CpAlsResult cpd_als(const DenseTensor& t, std::size_t rank, const CpAlsOptions& opts) {
  if (rank == 0) throw std::invalid_argument("cpd_als: rank must be positive");
  if (!all_finite(t)) throw std::invalid_argument("cpd_als: tensor has non-finite values");
  CPModel init;
  init.factors = initial_factors(t, rank, opts);
  init.weights = Vector::Ones(static_cast<Eigen::Index>(rank));
  return cpd_als(t, init, opts);
}

CpAlsResult cpd_als(const DenseTensor& t, const CPModel& init, const CpAlsOptions& opts) {
  validate(init);
  if (init.rank() == 0) throw std::invalid_argument("cpd_als: rank must be positive");
  if (init.shape() != t.shape()) throw std::invalid_argument("cpd_als: initial model shape mismatch");
  if (!all_finite(t)) throw std::invalid_argument("cpd_als: tensor has non-finite values");

  const std::size_t order = t.order();
  const double data_norm = frobenius_norm(t);
  std::vector<Matrix> unfoldings;
  for (std::size_t n = 0; n < order; ++n) unfoldings.push_back(unfold(t, n));

  CPModel model = init;
  for (std::size_t n = 1; n < order; ++n) {
    model.weights = model.weights.cwiseProduct(normalize_columns(model.factors[n]));
  }

  FitTrace trace;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    for (std::size_t n = 0; n < order; ++n) {
      const auto r = static_cast<Eigen::Index>(model.rank());
      Matrix gram = Matrix::Ones(r, r);
      for (std::size_t k = 0; k < order; ++k) {
        if (k == n) continue;
        gram = gram.cwiseProduct(model.factors[k].transpose() * model.factors[k]);
      }
      const Matrix kr = khatri_rao_except(model.factors, n);
      Matrix updated;
      if (condition_number(gram) <= kGramianConditionLimit) {
        const Matrix mttkrp = unfoldings[n] * kr;
        updated = gram.llt().solve(mttkrp.transpose()).transpose();
      } else {
        updated = solve_least_squares(kr, unfoldings[n].transpose()).transpose();
      }
      model.weights = normalize_columns(updated);
      model.factors[n] = std::move(updated);
    }
    const double fit = relative_fit(t, cpd_reconstruct(model));
    trace.fits.push_back(fit);
    trace.iterations = it + 1;
    if (std::abs(fit - previous) < opts.tol) {
      trace.converged = true;
      break;
    }
    previous = fit;
  }

  const std::size_t sweeps = trace.fits.size();
  const bool improving = sweeps >= 2 && trace.fits[sweeps - 1] > trace.fits[sweeps - 2];
  const double med = median(model.weights.cwiseAbs());
  const bool runaway = med > 0.0 && model.weights.cwiseAbs().maxCoeff() > kDivergenceRatio * med;
  trace.degenerate = improving && (runaway || has_cancelling_pair(model, data_norm));

  return {canonicalize(std::move(model)), std::move(trace)};
}

std::size_t k_rank(const Matrix& m, double tol) {
  const auto cols = static_cast<std::size_t>(m.cols());
  if (cols == 0) return 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).norm() == 0.0) return 0;
  }
  const auto independent = [&](const std::vector<std::size_t>& subset) {
    Matrix sub(m.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t i = 0; i < subset.size(); ++i) {
      sub.col(static_cast<Eigen::Index>(i)) = m.col(static_cast<Eigen::Index>(subset[i]));
    }
    return numerical_rank(sub, tol) == subset.size();
  };
  // k-rank <= rank; a full-column-rank matrix has k-rank equal to its width.
  const std::size_t rank = numerical_rank(m, tol);
  if (rank == cols) return cols;
  // check subset sizes 2..rank, each exhaustively
  for (std::size_t k = 2; k <= rank; ++k) {
    std::vector<bool> mask(cols, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> subset;
      for (std::size_t j = 0; j < cols; ++j) {
        if (mask[j]) subset.push_back(j);
      }
      if (!independent(subset)) return k - 1;
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return rank;
}

UniquenessVerdict kruskal_uniqueness(const CPModel& model) {
  validate(model);
  UniquenessVerdict v;
  for (const auto& b : model.factors) {
    v.per_factor_kranks.push_back(k_rank(b));
    v.krank_sum += v.per_factor_kranks.back();
  }
  v.threshold = 2 * model.rank() + model.order() - 1;
  v.satisfied = v.krank_sum >= v.threshold;
  return v;
}

CoreConsistency corcondia(const DenseTensor& t, const CPModel& model) {
  validate(model);
  if (model.shape() != t.shape()) throw std::invalid_argument("corcondia: shape mismatch");
  CoreConsistency out;
  std::vector<Matrix> inverses;
  for (const auto& b : model.factors) {
    if (numerical_rank(b) < static_cast<std::size_t>(b.cols())) out.rank_deficient = true;
    inverses.push_back(pinv(b));
  }
  const DenseTensor core = multilinear_product(t, inverses);
  const DenseTensor ideal = diagonal_tensor(model.weights, model.order());
  const double denom = frobenius_norm(ideal);
  if (denom == 0.0) throw std::invalid_argument("corcondia: all weights are zero");
  const double num = frobenius_norm(core - ideal);
  out.percent = 100.0 * (1.0 - (num * num) / (denom * denom));
  return out;
}

}  // namespace multiway
