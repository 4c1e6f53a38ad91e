#include "multiway/tucker.hpp"

#include "multiway/linalg.hpp"
#include "multiway/metrics.hpp"
#include "multiway/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace multiway {

namespace {

void check_ranks(const DenseTensor& t, const Shape& ranks) {
  if (ranks.size() != t.order()) throw std::invalid_argument("need one rank per mode");
  for (std::size_t n = 0; n < ranks.size(); ++n) {
    if (ranks[n] == 0 || ranks[n] > t.shape()[n]) {
      throw std::invalid_argument("rank " + std::to_string(ranks[n]) + " invalid for mode " +
                                  std::to_string(n) + " of extent " +
                                  std::to_string(t.shape()[n]));
    }
  }
}

DenseTensor project_core(const DenseTensor& t, const std::vector<Matrix>& factors) {
  return multilinear_product_transposed(t, factors);
}

// Least-squares core for possibly non-orthonormal factors.
DenseTensor least_squares_core(const DenseTensor& t, const std::vector<Matrix>& factors) {
  std::vector<Matrix> inverses;
  inverses.reserve(factors.size());
  for (const auto& b : factors) inverses.push_back(pinv(b));
  return multilinear_product(t, inverses);
}

}  // namespace

Shape TuckerModel::shape() const {
  Shape s;
  for (const auto& b : factors) s.push_back(static_cast<std::size_t>(b.rows()));
  return s;
}

void validate(const TuckerModel& model) {
  if (model.factors.size() != model.core.order()) {
    throw std::invalid_argument("Tucker model: one factor per core mode required");
  }
  for (std::size_t n = 0; n < model.factors.size(); ++n) {
    if (static_cast<std::size_t>(model.factors[n].cols()) != model.core.shape()[n]) {
      throw std::invalid_argument("Tucker model: factor " + std::to_string(n) +
                                  " column count differs from core extent");
    }
  }
}

DenseTensor tucker_reconstruct(const TuckerModel& model) {
  validate(model);
  return multilinear_product(model.core, model.factors);
}

MultilinearSpectrum multilinear_spectrum(const DenseTensor& t) {
  MultilinearSpectrum spec;
  for (std::size_t n = 0; n < t.order(); ++n) {
    spec.values.push_back(full_left_svd(unfold(t, n)).s);
  }
  return spec;
}

MlsvdResult mlsvd(const DenseTensor& t) {
  MlsvdResult out;
  for (std::size_t n = 0; n < t.order(); ++n) {
    Svd svd = full_left_svd(unfold(t, n));
    canonicalize_signs(svd.u);
    out.model.factors.push_back(std::move(svd.u));
    out.spectrum.values.push_back(std::move(svd.s));
  }
  out.model.core = project_core(t, out.model.factors);
  out.model.orthonormal.assign(t.order(), true);
  return out;
}

TuckerModel truncated_mlsvd(const DenseTensor& t, const Shape& ranks) {
  check_ranks(t, ranks);
  TuckerModel m;
  for (std::size_t n = 0; n < t.order(); ++n) {
    m.factors.push_back(leading_left_singular_vectors(unfold(t, n), ranks[n]));
  }
  m.core = project_core(t, m.factors);
  m.orthonormal.assign(t.order(), true);
  return m;
}

Matrix hooi_mode_update(const DenseTensor& t, const std::vector<Matrix>& factors,
                        std::size_t mode, std::size_t rank) {
  const DenseTensor y = multilinear_product_transposed(t, factors, mode);
  return leading_left_singular_vectors(unfold(y, mode), rank);
}

TuckerFit hooi(const DenseTensor& t, const Shape& ranks, const HooiOptions& opts) {
  TuckerFit out;
  out.model = truncated_mlsvd(t, ranks);
  double previous = relative_fit(t, tucker_reconstruct(out.model));
  out.fits.push_back(previous);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    auto factors = out.model.factors;
    for (std::size_t n = 0; n < t.order(); ++n) {
      factors[n] = hooi_mode_update(t, factors, n, ranks[n]);
    }
    TuckerModel candidate{project_core(t, factors), factors, std::vector<bool>(t.order(), true)};
    const double fit = relative_fit(t, tucker_reconstruct(candidate));
    out.iterations = it + 1;
    // HOOI cannot decrease the captured energy; a lower value is rounding noise
    // at a fixed point, so keep the previous iterate and stop.
    if (fit < previous) {
      out.converged = true;
      break;
    }
    out.model = std::move(candidate);
    out.fits.push_back(fit);
    if (fit - previous < opts.tol) {
      out.converged = true;
      break;
    }
    previous = fit;
  }
  return out;
}

Shape multilinear_rank(const DenseTensor& t, double tol) {
  const MultilinearSpectrum spec = multilinear_spectrum(t);
  Shape ranks;
  for (const auto& s : spec.values) {
    std::size_t r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * s(0)) ++r;
      }
    }
    ranks.push_back(r);
  }
  return ranks;
}

TuckerFit constrained_tucker(const DenseTensor& t, const Shape& ranks,
                             const std::vector<ModeConstraint>& constraints,
                             const ConstrainedTuckerOptions& opts) {
  check_ranks(t, ranks);
  if (constraints.size() != t.order()) throw std::invalid_argument("need one constraint per mode");

  TuckerFit out;
  out.model = truncated_mlsvd(t, ranks);
  for (std::size_t n = 0; n < t.order(); ++n) {
    if (constraints[n] == ModeConstraint::Nonnegative) {
      out.model.factors[n] = out.model.factors[n].cwiseAbs();
      out.model.orthonormal[n] = false;
    }
  }
  out.model.core = least_squares_core(t, out.model.factors);
  double previous = relative_fit(t, tucker_reconstruct(out.model));
  out.fits.push_back(previous);

  std::vector<Matrix> unfoldings;
  for (std::size_t n = 0; n < t.order(); ++n) unfoldings.push_back(unfold(t, n));

  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    auto& model = out.model;
    for (std::size_t n = 0; n < t.order(); ++n) {
      // X_(n) ~ B_n Z with Z the mode-n unfolding of the core expanded in every other mode
      DenseTensor expanded = model.core;
      for (std::size_t k = 0; k < t.order(); ++k) {
        if (k != n) expanded = mode_n_product(expanded, model.factors[k], k);
      }
      const Matrix z = unfold(expanded, n);
      const Matrix xz = unfoldings[n] * z.transpose();
      Matrix& b = model.factors[n];
      if (constraints[n] == ModeConstraint::Orthogonal) {
        Svd svd = thin_svd(xz);
        b = svd.u * svd.v.transpose();
      } else {
        const Matrix zz = z * z.transpose();
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          if (zz(j, j) <= 0.0) continue;
          Vector col = b.col(j) + (xz.col(j) - b * zz.col(j)) / zz(j, j);
          b.col(j) = col.cwiseMax(0.0);
        }
      }
      model.core = least_squares_core(t, model.factors);
    }
    const double fit = relative_fit(t, tucker_reconstruct(model));
    out.fits.push_back(fit);
    out.iterations = it + 1;
    if (std::abs(fit - previous) < opts.tol) {
      out.converged = true;
      break;
    }
    previous = fit;
  }
  return out;
}

}  // namespace multiway
