#pragma once

// Linked multiway component analysis: K coupled Tucker models
//   X_k ~ G_k x_1 [Bc_1 | Bi_1k] x_2 [Bc_2 | Bi_2k] ...
// whose first C_n columns in mode n are shared by every dataset.

#include "multiway/tensor.hpp"

#include <vector>

namespace multiway {

struct LinkedModel {
  std::vector<DenseTensor> cores;                // one per dataset
  std::vector<Matrix> common;                    // per mode, I_n x C_n (shared storage)
  std::vector<std::vector<Matrix>> individual;   // [dataset][mode], I_n x (R_n - C_n)
  Shape ranks;
  Shape commons;

  std::size_t datasets() const noexcept { return cores.size(); }
  std::size_t order() const noexcept { return common.size(); }
  /// [Bc_n | Bi_nk]
  Matrix factor(std::size_t dataset, std::size_t mode) const;
  DenseTensor reconstruct(std::size_t dataset) const;
};

struct LmwcaOptions {
  std::size_t sweeps = 2;
};

/// Common blocks start from the dominant subspace of the stacked per-dataset
/// mode-n bases (or of the stacked unfoldings when C_n = R_n); individual
/// blocks are the dominant subspace of each dataset's unfolding after the
/// common block is projected out. Each refinement sweep repeats this on the
/// unfoldings projected onto the other modes' current factors.
LinkedModel lmwca_fit(const std::vector<DenseTensor>& tensors, const Shape& ranks, const Shape& commons,
                      const LmwcaOptions& opts = {});

/// Per-dataset relative fits.
std::vector<double> lmwca_fits(const LinkedModel& model, const std::vector<DenseTensor>& tensors);

/// Number of mode-n components shared by all datasets: the rank-R_n bases of
/// the K unfoldings are stacked and a direction counts as common when its
/// mean pairwise canonical correlation (sigma^2 - 1) / (K - 1) reaches the
/// threshold.
std::size_t detect_common_components(const std::vector<DenseTensor>& tensors, std::size_t mode,
                                     std::size_t rank, double threshold = 0.9);

/// A class's training data: tensors of equal shape whose last mode indexes samples.
struct ClassGroup {
  std::vector<DenseTensor> tensors;
};

struct ClassifyResult {
  std::size_t label = 0;
  Vector scores;  // canonical correlation with each class's common subspace
};

/// Common feature subspace of one class: every training tensor is unfolded to
/// features x samples, and a linked fit with round(common_fraction * samples)
/// shared feature columns is run.
Matrix class_common_subspace(const ClassGroup& group, double common_fraction = 0.8);

/// Scores a test sample (the feature modes of the training tensors, with or
/// without a trailing unit sample mode) against each class's common subspace
/// and returns the argmax; ties go to the lowest class index.
ClassifyResult lmwca_classify(const std::vector<ClassGroup>& train, const DenseTensor& test,
                              double common_fraction = 0.8);

/// Same, with common subspaces already computed.
ClassifyResult classify_with_subspaces(const std::vector<Matrix>& subspaces, const DenseTensor& test);

}  // namespace multiway
