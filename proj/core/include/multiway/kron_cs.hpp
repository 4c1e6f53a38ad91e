#pragma once

// Compressed sensing with Kronecker-structured dictionaries:
//   Y = G x_1 W_1 x_2 W_2 ... x_N W_N,  W_n = Phi_n B_n.
// The global matrix W_N (x) ... (x) W_1 is never formed.

#include "multiway/linalg.hpp"
#include "multiway/tensor.hpp"

#include <map>
#include <vector>

namespace multiway {

struct KronDictionary {
  std::vector<Matrix> sensing;  // Phi_n, M_n x I_n
  std::vector<Matrix> bases;    // B_n, I_n x I_n
  std::vector<Matrix> atoms;    // W_n = Phi_n B_n

  std::size_t order() const noexcept { return atoms.size(); }
  Shape core_shape() const;
  Shape measurement_shape() const;
};

/// Builds W_n = Phi_n B_n; requires M_n <= I_n and finite entries.
KronDictionary make_kron_dictionary(std::vector<Matrix> sensing, std::vector<Matrix> bases);

/// Dictionary with identity bases (W_n = Phi_n).
KronDictionary make_kron_dictionary(std::vector<Matrix> sensing);

/// Orthonormal DCT-II basis: column k is the k-th cosine atom.
Matrix dct_basis(std::size_t n);

/// M x I Gaussian sensing matrix scaled by 1/sqrt(M).
Matrix gaussian_sensing(std::size_t rows, std::size_t cols, Rng& rng);

/// Sparse core tensor keyed by canonical linear index; zeros are never stored.
class SparseCore {
 public:
  SparseCore() = default;
  explicit SparseCore(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  void set(std::span<const std::size_t> idx, double value);
  double get(std::span<const std::size_t> idx) const;

  struct Entry {
    Index index;
    double value;
  };
  /// Entries in canonical linear order.
  std::vector<Entry> entries() const;

  DenseTensor to_dense() const;
  static SparseCore from_dense(const DenseTensor& t, double drop_below = 0.0);

 private:
  Shape shape_;
  std::map<std::size_t, double> values_;
};

/// Y = G x_n W_n.
DenseTensor kron_apply(const KronDictionary& d, const SparseCore& g);
DenseTensor kron_apply(const KronDictionary& d, const DenseTensor& g);

/// Y x_n W_n^T, the adjoint of kron_apply.
DenseTensor kron_adjoint_apply(const KronDictionary& d, const DenseTensor& y);

/// Largest |normalized inner product| over distinct column pairs.
double mutual_coherence(const Matrix& m);

struct OmpResult {
  SparseCore core;
  std::vector<Index> support;          // in selection order
  std::vector<double> residual_norms;  // [0] = ||y||, then after each iteration
  std::size_t iterations = 0;
};

/// Kronecker OMP: exactly K greedy iterations. Each picks the unselected atom
/// with the largest normalized |correlation| with the residual (lowest linear
/// index wins ties) and refits all selected coefficients by least squares.
/// Throws when K exceeds the number of measurements.
OmpResult kronecker_omp(const DenseTensor& y, const KronDictionary& d, std::size_t sparsity);

struct NbompOptions {
  std::size_t max_iters = 0;   // 0 means N * L
  double residual_tol = 1e-10; // relative to ||y||
};

struct NbompResult {
  SparseCore core;
  std::vector<std::vector<std::size_t>> mode_supports;  // sorted
  std::vector<double> residual_norms;
  std::size_t iterations = 0;
  bool tolerance_met = false;
};

/// N-way block OMP. Grows one index per iteration in one mode set; the score
/// of adding index i to mode n is the norm of the normalized correlation
/// tensor restricted to i in mode n and to the current sets of the other
/// modes (all indices for modes whose set is still empty). Once every mode set
/// is non-empty the block core is refit by least squares through per-mode
/// pseudo-inverses. Stops at the residual tolerance or when every set holds
/// min(L, I_n) indices, so at most N * L iterations run.
NbompResult n_bomp(const DenseTensor& y, const KronDictionary& d, std::size_t block_budget,
                   const NbompOptions& opts = {});

}  // namespace multiway
