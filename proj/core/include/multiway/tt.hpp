#pragma once

// Tensor train: x(i_1..i_N) = G_1(:, i_1, :) G_2(:, i_2, :) ... G_N(:, i_N, :).

#include "multiway/tensor.hpp"

#include <string_view>
#include <vector>

namespace multiway {

/// Chain of order-3 carriages R_{n-1} x I_n x R_n with R_0 = R_N = 1. The
/// boundary carriages are stored as order-3 tensors with a unit rank.
struct TTModel {
  std::vector<DenseTensor> carriages;

  Shape shape() const;
  /// Interior bond ranks (R_1, ..., R_{N-1}).
  Shape ranks() const;
  std::size_t parameter_count() const;
};

void validate(const TTModel& model);

/// Left-to-right sequential SVD. Each step truncates to the smallest rank
/// whose discarded tail has norm <= tol * ||t|| / sqrt(N - 1), so the total
/// error is at most tol * ||t||.
TTModel tt_svd(const DenseTensor& t, double tol);

/// Single entry by contracting the carriage slices, O(sum R_{n-1} R_n).
double tt_element(const TTModel& model, std::span<const std::size_t> idx);

inline constexpr std::size_t kMaxReconstructElements = 100'000'000;

/// Dense tensor; throws std::length_error above kMaxReconstructElements.
DenseTensor tt_reconstruct(const TTModel& model);

/// QR sweep making every carriage but the last left-orthonormal.
TTModel left_orthogonalize(TTModel model);

/// Quantize a length base^L vector and decompose it with tt_svd.
TTModel qtt_decompose(const Vector& v, std::size_t base, double tol);

enum class StorageKind { Cpd, Tucker, Tt, Qtt };

StorageKind parse_storage_kind(std::string_view name);

/// Exact parameter counts of an order-N, extent-I, rank-R model:
///   CPD N I R; Tucker N I R + R^N; TT 2 I R + (N - 2) I R^2;
///   QTT the TT count of the order N log_q(I) tensor with extents q.
std::size_t storage_cost(StorageKind kind, std::size_t order, std::size_t extent,
                         std::size_t rank, std::size_t base = 2);

}  // namespace multiway
