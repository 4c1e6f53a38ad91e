#pragma once

// Baselines for blind source separation on channels x samples data.

#include "multiway/tensor.hpp"

namespace multiway {

struct SeparationResult {
  Matrix mixing;   // channels x sources
  Matrix sources;  // sources x samples
};

/// Leading principal directions of the centered data; sources are the
/// projections onto them.
SeparationResult pca_separation(const Matrix& x, std::size_t sources);

struct IcaOptions {
  std::size_t max_sweeps = 100;
  double rotation_tol = 1e-10;
};

/// ICA (cumulant): prewhitening to `sources` dimensions, then Jacobi joint
/// diagonalization of the fourth-order cumulant slices Q_kl = Cum(., ., z_k, z_l).
/// The mixing estimate is the pseudo-inverse of the separating matrix.
SeparationResult ica_cumulant(const Matrix& x, std::size_t sources, const IcaOptions& opts = {});

}  // namespace multiway
