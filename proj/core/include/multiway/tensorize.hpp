#pragma once

// Constructors that rearrange lower-order data into tensors.

#include "multiway/tensor.hpp"

namespace multiway {

/// I x J Hankel matrix with H(i, j) = signal(i + j); needs length I + J - 1.
Matrix hankelize(const Vector& signal, std::size_t rows, std::size_t cols);

/// I x J x K tensor whose k-th frontal slice is the Hankel matrix of row k of
/// `signals` (K x (I + J - 1)).
DenseTensor hankel_tensorize(const Matrix& signals, std::size_t rows, std::size_t cols);

/// Inverse of hankelize in the least-squares sense: averages each anti-diagonal.
Vector dehankelize(const Matrix& h);

/// Reshape a length q^L vector into an order-L tensor with all extents q.
/// Mode 0 carries the least significant base-q digit of the index.
DenseTensor quantize(const Vector& v, std::size_t base);

/// L such that base^L == n, or throws.
std::size_t exact_log(std::size_t n, std::size_t base);

}  // namespace multiway
