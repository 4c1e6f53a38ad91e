#pragma once

// Canonical polyadic decomposition: X = sum_r lambda_r b_r^(1) o ... o b_r^(N).

#include "multiway/fit_trace.hpp"
#include "multiway/linalg.hpp"
#include "multiway/tensor.hpp"

#include <cstdint>
#include <vector>

namespace multiway {

/// Weights plus one I_n x R factor matrix per mode.
///
/// Canonical form: unit-norm factor columns, weights non-negative and sorted
/// descending (ties by lexicographic order of the first-factor columns), and
/// the largest-magnitude entry of every first-factor column positive.
struct CPModel {
  Vector weights;
  std::vector<Matrix> factors;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(weights.size()); }
  std::size_t order() const noexcept { return factors.size(); }
  Shape shape() const;
};

/// Throws std::invalid_argument if factor/weight dimensions are inconsistent.
void validate(const CPModel& model);

/// Rescales, re-signs and reorders components into canonical form.
/// Idempotent: canonicalize(canonicalize(m)) is bit-identical to canonicalize(m).
CPModel canonicalize(CPModel model);

DenseTensor cpd_reconstruct(const CPModel& model);

enum class CpInit { Mlsvd, Random };

struct CpAlsOptions {
  std::size_t max_iters = 500;
  double tol = 1e-10;
  CpInit init = CpInit::Mlsvd;
  std::uint64_t seed = 0;
};

struct CpAlsResult {
  CPModel model;
  FitTrace trace;
};

/// Alternating least squares, one factor matrix at a time.
///
/// Each conditional update solves the normal equations with the Hadamard
/// product of the other Gramians, switching to QR on the Khatri-Rao matrix when
/// the Gramian condition number exceeds 1e8. Throws for rank 0 or non-finite data.
CpAlsResult cpd_als(const DenseTensor& t, std::size_t rank, const CpAlsOptions& opts = {});

/// Same, starting from the given factors.
CpAlsResult cpd_als(const DenseTensor& t, const CPModel& init, const CpAlsOptions& opts = {});

/// Kruskal rank: largest k such that every k columns are linearly independent
/// (a subset is independent when sigma_min > tol * sigma_max of the subset).
std::size_t k_rank(const Matrix& m, double tol = 1e-10);

struct UniquenessVerdict {
  std::size_t krank_sum = 0;
  std::size_t threshold = 0;  // 2R + N - 1
  bool satisfied = false;     // false means "not certified", not "non-unique"
  std::vector<std::size_t> per_factor_kranks;
};

UniquenessVerdict kruskal_uniqueness(const CPModel& model);

struct CoreConsistency {
  double percent = 0.0;
  bool rank_deficient = false;  // pseudo-inverse fallback was needed
};

/// Core consistency: LS Tucker core G of t on the model factors, scored as
/// 100 * (1 - ||G - D||^2 / ||D||^2) with D = diag(weights).
CoreConsistency corcondia(const DenseTensor& t, const CPModel& model);

}  // namespace multiway
