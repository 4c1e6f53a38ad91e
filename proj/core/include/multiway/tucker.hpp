#pragma once

// Tucker decomposition: X = G x_1 B_1 x_2 B_2 ... x_N B_N.

#include "multiway/tensor.hpp"

#include <vector>

namespace multiway {

struct TuckerModel {
  DenseTensor core;
  std::vector<Matrix> factors;      // I_n x R_n
  std::vector<bool> orthonormal;    // per factor

  Shape shape() const;
  Shape ranks() const { return core.shape(); }
};

void validate(const TuckerModel& model);

DenseTensor tucker_reconstruct(const TuckerModel& model);

/// Multilinear singular values, one descending sequence per mode (length I_n,
/// zero padded). Each mode's squares sum to ||X||^2.
struct MultilinearSpectrum {
  std::vector<Vector> values;
};

struct MlsvdResult {
  TuckerModel model;
  MultilinearSpectrum spectrum;
};

/// Full multilinear SVD: U_n holds all left singular vectors of X_(n) (largest
/// magnitude entry of each column positive) and the core is X x_n U_n^T.
MlsvdResult mlsvd(const DenseTensor& t);

MultilinearSpectrum multilinear_spectrum(const DenseTensor& t);

/// Leading R_n singular vectors per mode; core by projection.
TuckerModel truncated_mlsvd(const DenseTensor& t, const Shape& ranks);

struct HooiOptions {
  std::size_t max_iters = 100;
  double tol = 1e-12;  // on change in relative fit
};

struct TuckerFit {
  TuckerModel model;
  std::vector<double> fits;  // fits[0] is the initial truncated-MLSVD fit
  std::size_t iterations = 0;
  bool converged = false;
};

/// Higher-order orthogonal iteration initialized from truncated_mlsvd.
TuckerFit hooi(const DenseTensor& t, const Shape& ranks, const HooiOptions& opts = {});

/// One HOOI factor update: leading R_n left singular vectors of the mode-n
/// unfolding of t projected onto every other factor.
Matrix hooi_mode_update(const DenseTensor& t, const std::vector<Matrix>& factors,
                        std::size_t mode, std::size_t rank);

/// Count of multilinear singular values above tol * the largest, per mode.
Shape multilinear_rank(const DenseTensor& t, double tol = 1e-8);

enum class ModeConstraint { Orthogonal, Nonnegative };

struct ConstrainedTuckerOptions {
  std::size_t max_iters = 200;
  double tol = 1e-10;
};

/// Tucker fit with a per-mode constraint. Orthogonal modes are updated by
/// orthogonal Procrustes, nonnegative modes by projected (HALS) column
/// updates; the core is refit by least squares after each mode. The residual
/// never increases across sweeps.
TuckerFit constrained_tucker(const DenseTensor& t, const Shape& ranks,
                             const std::vector<ModeConstraint>& constraints,
                             const ConstrainedTuckerOptions& opts = {});

}  // namespace multiway
