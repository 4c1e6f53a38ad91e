#include "multiway/btd.hpp"

#include "multiway/linalg.hpp"
#include "multiway/metrics.hpp"
#include "multiway/products.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <type_traits>

namespace multiway {

namespace {

struct Ll1Factors {
  Matrix a;  // I x RL, term r in columns [rL, (r+1)L)
  Matrix b;  // J x RL
  Matrix c;  // K x R
};

Shape term_shape(const Ll1Term& term) {
  return {static_cast<std::size_t>(term.a.rows()), static_cast<std::size_t>(term.b.rows()),
          static_cast<std::size_t>(term.c.size())};
}

// Columns vec(A_r B_r^T) = sum_l b_rl (x) a_rl, matching unfold(t, 2) columns.
Matrix slice_patterns(const Ll1Factors& f, std::size_t terms, std::size_t block) {
  const auto l = static_cast<Eigen::Index>(block);
  Matrix z(f.a.rows() * f.b.rows(), static_cast<Eigen::Index>(terms));
  for (Eigen::Index r = 0; r < z.cols(); ++r) {
    const Matrix ab = f.a.middleCols(r * l, l) * f.b.middleCols(r * l, l).transpose();
    z.col(r) = Eigen::Map<const Vector>(ab.data(), ab.size());
  }
  return z;
}

// Columns c_r (x) m_rl for each term r and block column l.
Matrix expand_with_c(const Matrix& c, const Matrix& m, std::size_t block) {
  const auto l = static_cast<Eigen::Index>(block);
  Matrix out(c.rows() * m.rows(), m.cols());
  for (Eigen::Index r = 0; r < c.cols(); ++r) {
    out.middleCols(r * l, l) = kronecker(c.col(r), m.middleCols(r * l, l));
  }
  return out;
}

std::vector<Ll1Term> to_terms(const Ll1Factors& f, std::size_t terms, std::size_t block) {
  const auto l = static_cast<Eigen::Index>(block);
  std::vector<Ll1Term> out;
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(terms); ++r) {
    out.push_back({f.a.middleCols(r * l, l), f.b.middleCols(r * l, l), f.c.col(r)});
  }
  return out;
}

void absorb_c_scale(Ll1Factors& f, std::size_t block) {
  const auto l = static_cast<Eigen::Index>(block);
  for (Eigen::Index r = 0; r < f.c.cols(); ++r) {
    const double nrm = f.c.col(r).norm();
    if (nrm == 0.0) continue;
    f.c.col(r) /= nrm;
    f.a.middleCols(r * l, l) *= nrm;
  }
}

Matrix padded_basis(const Matrix& unfolding, std::size_t cols, Rng& rng) {
  const auto rows = static_cast<std::size_t>(unfolding.rows());
  const std::size_t lead = std::min(cols, rows);
  Matrix m(rows, cols);
  m.leftCols(static_cast<Eigen::Index>(lead)) = leading_left_singular_vectors(unfolding, lead);
  if (cols > lead) {
    m.rightCols(static_cast<Eigen::Index>(cols - lead)) = random_gaussian(rows, cols - lead, rng);
  }
  return m;
}

struct Run {
  Ll1Factors factors;
  FitTrace trace;
};

Run run_als(const DenseTensor& t, const std::array<Matrix, 3>& unfoldings, Ll1Factors f,
            std::size_t terms, std::size_t block, const BtdOptions& opts) {
  FitTrace trace;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    f.a = solve_least_squares(expand_with_c(f.c, f.b, block), unfoldings[0].transpose()).transpose();
    f.b = solve_least_squares(expand_with_c(f.c, f.a, block), unfoldings[1].transpose()).transpose();
    f.c = solve_least_squares(slice_patterns(f, terms, block), unfoldings[2].transpose()).transpose();
    absorb_c_scale(f, block);
    const double fit = relative_fit(t, btd_reconstruct(to_terms(f, terms, block)));
    trace.fits.push_back(fit);
    trace.iterations = it + 1;
    if (std::abs(fit - previous) < opts.tol) {
      trace.converged = true;
      break;
    }
    previous = fit;
  }
  return {std::move(f), std::move(trace)};
}

// Damped Gauss-Newton on all factor entries jointly. Steps are kept only when
// the fit improves, so the trace stays nondecreasing.
void lm_polish(const DenseTensor& t, Run& run, std::size_t terms, std::size_t block, const BtdOptions& opts) {
  Ll1Factors& f = run.factors;
  const Eigen::Index ni = f.a.rows(), nj = f.b.rows(), nk = f.c.rows();
  const auto l = static_cast<Eigen::Index>(block);
  const auto nr = static_cast<Eigen::Index>(terms);
  const Eigen::Index rl = nr * l;
  const Eigen::Index params = (ni + nj) * rl + nk * nr;
  const Eigen::Index entries = ni * nj * nk;
  if (opts.polish_iters == 0 || static_cast<double>(entries) * static_cast<double>(params) > 5e6) return;

  const Eigen::Map<const Vector> target(t.data().data(), entries);
  const auto model_of = [&](const Ll1Factors& g) {
    return btd_reconstruct(to_terms(g, terms, block)).vectorize().eval();
  };
  const double target_norm = target.norm();
  double fit = run.trace.fits.empty() ? -std::numeric_limits<double>::infinity() : run.trace.fits.back();
  Vector residual = target - model_of(f);
  double mu = -1.0;

  for (std::size_t it = 0; it < opts.polish_iters; ++it) {
    Matrix jac = Matrix::Zero(entries, params);
    for (Eigen::Index r = 0; r < nr; ++r) {
      const Matrix ab = f.a.middleCols(r * l, l) * f.b.middleCols(r * l, l).transpose();
      for (Eigen::Index k = 0; k < nk; ++k) {
        const double ck = f.c(k, r);
        for (Eigen::Index j = 0; j < nj; ++j) {
          for (Eigen::Index i = 0; i < ni; ++i) {
            const Eigen::Index row = i + ni * (j + nj * k);
            for (Eigen::Index q = r * l; q < (r + 1) * l; ++q) {
              jac(row, i + ni * q) = f.b(j, q) * ck;
              jac(row, ni * rl + j + nj * q) = f.a(i, q) * ck;
            }
            jac(row, (ni + nj) * rl + k + nk * r) = ab(i, j);
          }
        }
      }
    }
    const Matrix gram = jac.transpose() * jac;
    const Vector grad = jac.transpose() * residual;
    if (mu < 0.0) mu = 1e-3 * gram.diagonal().maxCoeff();

    bool accepted = false;
    while (!accepted && mu < 1e20) {
      Matrix damped = gram;
      damped.diagonal().array() += mu;
      const Vector step = damped.ldlt().solve(grad);
      Ll1Factors trial = f;
      Eigen::Map<Vector>(trial.a.data(), trial.a.size()) += step.head(ni * rl);
      Eigen::Map<Vector>(trial.b.data(), trial.b.size()) += step.segment(ni * rl, nj * rl);
      Eigen::Map<Vector>(trial.c.data(), trial.c.size()) += step.tail(nk * nr);
      const Vector next_residual = target - model_of(trial);
      const double next_fit = 1.0 - next_residual.norm() / target_norm;
      if (std::isfinite(next_fit) && next_fit > fit) {
        absorb_c_scale(trial, block);
        const double gain = next_fit - fit;
        f = std::move(trial);
        residual = next_residual;
        fit = next_fit;
        run.trace.fits.push_back(fit);
        run.trace.iterations += 1;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        if (gain < opts.tol) return;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) return;
  }
}

}  // namespace

DenseTensor term_tensor(const Ll1Term& term) {
  if (term.a.cols() != term.b.cols()) throw std::invalid_argument("LL1 term: A and B block sizes differ");
  const Matrix ab = term.a * term.b.transpose();
  const Vector vec = kronecker(term.c, Eigen::Map<const Vector>(ab.data(), ab.size()));
  return DenseTensor(term_shape(term), std::vector<double>(vec.data(), vec.data() + vec.size()));
}

DenseTensor btd_reconstruct(const std::vector<Ll1Term>& terms) {
  if (terms.empty()) throw std::invalid_argument("btd_reconstruct: no terms");
  DenseTensor sum = term_tensor(terms.front());
  for (std::size_t r = 1; r < terms.size(); ++r) {
    const DenseTensor next = term_tensor(terms[r]);
    if (next.shape() != sum.shape()) throw std::invalid_argument("btd_reconstruct: term shape mismatch");
    sum.vectorize() += next.vectorize();
  }
  return sum;
}

DenseTensor btd_reconstruct(const std::vector<BtdTerm>& terms) {
  if (terms.empty()) throw std::invalid_argument("btd_reconstruct: no terms");
  std::optional<DenseTensor> sum;
  for (const auto& term : terms) {
    DenseTensor part = std::visit(
        [](const auto& v) -> DenseTensor {
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Ll1Term>) {
            return term_tensor(v);
          } else {
            return tucker_reconstruct(v);
          }
        },
        term);
    if (!sum) {
      sum = std::move(part);
    } else {
      if (part.shape() != sum->shape()) throw std::invalid_argument("btd_reconstruct: term shape mismatch");
      sum->vectorize() += part.vectorize();
    }
  }
  return *sum;
}

Ll1Term canonicalize(const Ll1Term& term) {
  const auto l = term.a.cols();
  Ll1Term out;
  out.c = term.c;
  double scale = out.c.norm();
  if (scale == 0.0) {
    out.c = Vector::Zero(term.c.size());
    out.c(0) = 1.0;
  } else {
    out.c /= scale;
  }
  Eigen::Index arg = 0;
  out.c.cwiseAbs().maxCoeff(&arg);
  if (out.c(arg) < 0.0) {
    out.c = -out.c;
    scale = -scale;
  }
  const Matrix ab = scale * term.a * term.b.transpose();
  Svd svd = thin_svd(ab);
  Matrix b = svd.v.leftCols(l);
  Matrix a = svd.u.leftCols(l) * svd.s.head(l).asDiagonal();
  canonicalize_signs(b, &a);
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

std::vector<Ll1Term> canonicalize(std::vector<Ll1Term> terms) {
  for (auto& t : terms) t = canonicalize(t);
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Ll1Term& x, const Ll1Term& y) { return x.a.norm() > y.a.norm(); });
  return terms;
}

BtdResult btd_ll1_als(const DenseTensor& t, std::size_t terms, std::size_t block_rank,
                      const BtdOptions& opts) {
  if (t.order() != 3) throw std::invalid_argument("btd_ll1_als: third-order tensor required");
  if (terms == 0 || block_rank == 0) throw std::invalid_argument("btd_ll1_als: R and L must be positive");
  if (!std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("btd_ll1_als: tensor has non-finite values");
  }
  const std::array<Matrix, 3> unfoldings = {unfold(t, 0), unfold(t, 1), unfold(t, 2)};
  const std::size_t width = terms * block_rank;
  Rng rng(opts.seed);

  std::optional<Run> best;
  for (std::size_t start = 0; start <= opts.restarts; ++start) {
    Ll1Factors f;
    if (start == 0) {
      // dominant subspaces, cut into consecutive blocks
      f.a = padded_basis(unfoldings[0], width, rng);
      f.b = padded_basis(unfoldings[1], width, rng);
      f.c = padded_basis(unfoldings[2], terms, rng);
    } else {
      // dominant subspaces mixed by a random rotation before partitioning
      const Matrix rot_a = random_orthonormal(width, width, rng);
      const Matrix rot_b = random_orthonormal(width, width, rng);
      f.a = padded_basis(unfoldings[0], width, rng) * rot_a;
      f.b = padded_basis(unfoldings[1], width, rng) * rot_b;
      f.c = random_gaussian(t.shape()[2], terms, rng);
    }
    Run run = run_als(t, unfoldings, std::move(f), terms, block_rank, opts);
    if (!best || run.trace.fits.back() > best->trace.fits.back()) best = std::move(run);
  }
  lm_polish(t, *best, terms, block_rank, opts);
  return {canonicalize(to_terms(best->factors, terms, block_rank)), std::move(best->trace)};
}

}  // namespace multiway
