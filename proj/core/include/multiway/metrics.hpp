#pragma once

#include "multiway/tensor.hpp"

#include <optional>
#include <vector>

namespace multiway {

struct MetricsReport {
  double relative_fit = 0.0;   // 1 - ||E|| / ||reference||
  double residual_norm = 0.0;  // ||E||_F
  std::optional<double> sae_db;
  std::optional<double> psnr_db;
};

MetricsReport compare(const DenseTensor& reference, const DenseTensor& estimate);

/// 1 - ||reference - estimate|| / ||reference||.
double relative_fit(const DenseTensor& reference, const DenseTensor& estimate);

/// SAE values at or below this are reported as the floor.
inline constexpr double kSaeFloorDb = -300.0;

/// Average squared angular error between matched columns, in dB.
///
/// Columns are paired by the permutation minimizing the total squared sine of
/// the principal angles; sign is irrelevant. Returns 10 log10(mean sin^2),
/// floored at kSaeFloorDb. Throws on zero-norm columns or count mismatch.
double compute_sae(const Matrix& true_vectors, const Matrix& estimated_vectors);

/// 10 log10(peak^2 * count / RSS) with peak = max |reference|; +inf when exact.
double compute_psnr(const DenseTensor& reference, const DenseTensor& estimate);

/// Column pairing that maximizes total |cosine| between a and b (equal column
/// counts). Entry j gives the column of b matched to column j of a.
std::vector<std::size_t> best_column_matching(const Matrix& a, const Matrix& b);

/// |cosine| between each column of a and its matched column of b.
Vector matched_abs_correlations(const Matrix& a, const Matrix& b);

}  // namespace multiway
