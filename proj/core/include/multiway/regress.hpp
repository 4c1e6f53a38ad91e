#pragma once

// Latent-variable regression: PLS on matrices and higher-order PLS on tensors.
// Mode 0 is the sample mode throughout.

#include "multiway/tensor.hpp"

#include <vector>

namespace multiway {

/// NIPALS-style PLS with X-only deflation. Score vectors t_r have unit norm;
/// loadings carry the scale.
struct PLSModel {
  Matrix weights;        // W, p x R (unit columns)
  Matrix x_scores;       // T, n x R (orthonormal columns)
  Matrix y_scores;       // U, n x R
  Matrix x_loadings;     // P, p x R
  Matrix y_loadings;     // Q, q x R
  Matrix coefficients;   // B, p x q: Y_hat = (X - x_mean) B + y_mean
  Eigen::RowVectorXd x_mean;
  Eigen::RowVectorXd y_mean;
  std::size_t components = 0;
  bool rank_exhausted = false;  // stopped before R components
};

struct PlsOptions {
  bool center = true;
};

PLSModel pls_fit(const Matrix& x, const Matrix& y, std::size_t components, const PlsOptions& opts = {});

Matrix pls_predict(const PLSModel& model, const Matrix& x_new);

/// One HOPLS block: X_r ~ Gx x_0 t x_1 P_1 ... and Y_r ~ Gy x_0 t x_1 Q_1 ...
struct HoplsComponent {
  Vector t;                         // unit-norm score over samples
  Vector u;                         // Y-side score: Y_r projected on the Q loadings and Gy
  std::vector<Matrix> x_loadings;   // one per non-sample mode of X, orthonormal
  std::vector<Matrix> y_loadings;   // one per non-sample mode of Y, orthonormal
  DenseTensor x_core;               // 1 x L x ... x L
  DenseTensor y_core;
};

struct HOPLSModel {
  std::vector<HoplsComponent> components;
  DenseTensor x_mean;  // sample extent 1
  DenseTensor y_mean;
  Shape x_shape;       // training shapes (sample extent included)
  Shape y_shape;
  std::vector<double> x_residual_norms;  // [0] = ||X centered||, then after each block
  std::vector<double> y_residual_norms;
};

struct HoplsOptions {
  bool center = true;
};

/// Sequential block extraction. Each block takes the rank-(L, ..., L)
/// truncated MLSVD of the cross-covariance tensor <X_r, Y_r> contracted over
/// the sample mode for the loadings, the dominant left singular vector of
/// X_r-projected scores for t, and deflates both blocks.
HOPLSModel hopls_fit(const DenseTensor& x, const DenseTensor& y, std::size_t components,
                     std::size_t block_rank, const HoplsOptions& opts = {});

/// New scores block by block from X_new and the stored X-side parameters, then
/// Y_hat = sum_r Gy_r x_0 t*_r x_1 Q_1 ... plus the training mean.
DenseTensor hopls_predict(const HOPLSModel& model, const DenseTensor& x_new);

/// Pearson correlation between two equally sized arrays.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace multiway
