#pragma once

// Synthetic data generators and demo pipelines: source separation on Hankel
// tensors, Kronecker compressed sensing, multiway regression and linked
// classification. All randomness flows from the seed argument.

#include "multiway/kron_cs.hpp"
#include "multiway/tensor.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace multiway::experiments {

// ---- blind source separation ----

enum class NoiseStage { Mixtures, Tensor };

struct BssConfig {
  std::size_t samples = 60;
  std::size_t channels = 5;
  double time_step = 1.0 / 240.0;
  std::size_t hankel_rows = 24;    // I; J = samples - I + 1
  double mixing_inner = 0.1;       // a_1^T a_2 for unit columns
  NoiseStage noise_stage = NoiseStage::Mixtures;
  bool equal_power_sources = true;  // scale each source to unit RMS before mixing
};

/// Rows sin(6 pi t) and exp(10 t) sin(20 pi t) at t_k = k * time_step.
Matrix bss_sources(std::size_t samples, double time_step);

/// Correlation degree |s_1^T s_2| / (||s_1|| ||s_2||) of the two sources.
double source_correlation(const BssConfig& cfg);

/// channels x 2 with unit columns and a_1^T a_2 = inner.
Matrix two_column_mixing(std::size_t channels, double inner, Rng& rng);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct BssTrial {
  double sae_pca = 0.0;
  double sae_ica = 0.0;
  double sae_cpd = 0.0;
  double sae_btd = 0.0;
  double tucker_angle = 0.0;  // largest principal angle (rad) of the Tucker mode-3 subspace
  Vector btd_source_correlation;  // |corr| of recovered vs true sources, matched
};

BssTrial run_bss_trial(const BssConfig& cfg, double snr_db, std::uint64_t seed);

struct BssRow {
  double snr_db = 0.0;
  double pca = 0.0, ica = 0.0, cpd = 0.0, btd = 0.0, tucker_angle = 0.0;  // medians
};

/// Median SAE per method over `trials` seeded runs at each SNR.
std::vector<BssRow> run_bss_sweep(const BssConfig& cfg, const std::vector<double>& snrs_db, std::size_t trials,
                                  std::uint64_t seed);

// ---- Kronecker compressed sensing ----

struct PlantedCs {
  KronDictionary dictionary;
  SparseCore core;
  DenseTensor measurements;
};

/// Block-sparse core with a random L-per-mode support and entries bounded away
/// from zero. Orthonormal dictionaries are square random rotations; otherwise
/// Gaussian sensing with identity bases.
PlantedCs planted_block_sparse(const Shape& core_shape, const Shape& measurement_shape, std::size_t block,
                               bool orthonormal, Rng& rng);

/// Smooth separable components plus a constant-valued box, values in [0, 1].
DenseTensor piecewise_smooth_cube(const Shape& shape, Rng& rng);

struct CsConfig {
  Shape shape{64, 64, 8};
  double sampling_ratio = 0.33;
  std::size_t block = 6;             // N-BOMP L
  std::size_t komp_sparsity = 216;   // Kronecker-OMP K
};

/// M_n = ceil(I_n * ratio^(1/N)), at least 1.
Shape measurement_shape(const Shape& shape, double sampling_ratio);

struct CsReport {
  Shape measurement_shape;
  double psnr_nbomp = 0.0;
  double psnr_komp = 0.0;
  std::size_t nbomp_iterations = 0;
  std::size_t komp_iterations = 0;
  double nbomp_residual = 0.0;  // relative
  double komp_residual = 0.0;
};

/// Cube -> per-mode Gaussian sensing -> recovery in DCT bases by both greedy
/// algorithms -> PSNR of the reconstructed cube.
CsReport run_cs_pipeline(const CsConfig& cfg, std::uint64_t seed);

// ---- multiway regression ----

struct RegressConfig {
  std::size_t train = 8;
  std::size_t test = 50;
  Shape x_features{12, 10, 8};  // channel x epoch x frequency
  Shape y_features{3, 10};      // coordinate x marker
  std::size_t planted_blocks = 1;
  std::size_t planted_rank = 2;
  double noise = 0.1;
  double signal_scale = 0.1;    // RMS of the noise-free entries
  double block_decay = 1.0;    // block r is scaled by block_decay^r
};

struct RegressData {
  DenseTensor x_train, y_train, x_test, y_test;
};

/// Samples (mode 0) from a planted HOPLS model with Gaussian latent scores;
/// noise is added to X and Y after scaling.
RegressData planted_regression(const RegressConfig& cfg, std::uint64_t seed);

/// Correlation between deviations of the prediction and of the truth from
/// the training mean; 0 when the prediction equals the mean.
double prediction_correlation(const DenseTensor& truth, const DenseTensor& prediction, const DenseTensor& train_mean);

struct RegressTrial {
  double hopls = 0.0;
  double pls = 0.0;
};

/// HOPLS(R, L) against PLS(R) on the mode-0 unfoldings.
RegressTrial run_regress_trial(const RegressConfig& cfg, std::size_t components, std::size_t block_rank,
                               std::uint64_t seed);

// ---- linked classification ----

struct LinkedClassConfig {
  Shape feature_shape{8, 8, 3};
  std::size_t samples = 10;     // per training tensor
  std::size_t classes = 2;
  std::size_t tests_per_class = 5;
  double common_fraction = 0.8;
  double noise = 0.1;
};

struct LinkedClassTrial {
  std::size_t correct = 0;
  std::size_t total = 0;
};

/// Each class has a planted common subspace of round(fraction * samples)
/// columns; each of its two training tensors and each test sample adds its
/// own individual directions and noise.
LinkedClassTrial run_linked_class_trial(const LinkedClassConfig& cfg, std::uint64_t seed);

}  // namespace multiway::experiments
