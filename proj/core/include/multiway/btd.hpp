#pragma once

// Block term decompositions of third-order tensors.

#include "multiway/fit_trace.hpp"
#include "multiway/tucker.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace multiway {

/// Multilinear rank-(L, L, 1) term (A B^T) o c.
struct Ll1Term {
  Matrix a;  // I x L
  Matrix b;  // J x L
  Vector c;  // K
};

/// Either an (L, L, 1) term or a general rank-(L, M, N) Tucker block.
using BtdTerm = std::variant<Ll1Term, TuckerModel>;

DenseTensor term_tensor(const Ll1Term& term);

DenseTensor btd_reconstruct(const std::vector<Ll1Term>& terms);
DenseTensor btd_reconstruct(const std::vector<BtdTerm>& terms);

/// Canonical (L, L, 1) term: ||c|| = 1 with the scale in A, B with orthonormal
/// columns (right singular vectors of A B^T), largest |c_k| positive.
Ll1Term canonicalize(const Ll1Term& term);

/// Canonicalizes every term and orders them by ||A B^T||_F, descending.
std::vector<Ll1Term> canonicalize(std::vector<Ll1Term> terms);

struct BtdOptions {
  std::size_t max_iters = 2000;
  double tol = 1e-13;
  std::uint64_t seed = 0;
  /// Extra randomized starts beyond the deterministic MLSVD start; the best
  /// final fit wins.
  std::size_t restarts = 4;
  /// Damped Gauss-Newton steps after ALS; skipped for large problems.
  std::size_t polish_iters = 200;
};

struct BtdResult {
  std::vector<Ll1Term> terms;
  FitTrace trace;  // of the winning start
};

/// ALS for R rank-(L, L, 1) terms: every sweep solves for all A blocks, then
/// all B blocks, then C, each as one linear least-squares problem.
BtdResult btd_ll1_als(const DenseTensor& t, std::size_t terms, std::size_t block_rank,
                      const BtdOptions& opts = {});

}  // namespace multiway
