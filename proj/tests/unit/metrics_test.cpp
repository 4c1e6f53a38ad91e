#include "multiway/metrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace multiway {
namespace {

TEST(Sae, ExactEstimateHitsTheFloor) {
  std::mt19937_64 rng(1);
  const Matrix a = oracle::random_matrix(5, 2, rng);
  EXPECT_EQ(compute_sae(a, a), kSaeFloorDb);
  EXPECT_EQ(compute_sae(a, -3.0 * a), kSaeFloorDb);
}

TEST(Sae, OrthogonalEstimateIsZeroDb) {
  const Matrix a = Matrix::Identity(3, 1);
  Matrix b = Matrix::Zero(3, 1);
  b(1, 0) = 2.0;
  EXPECT_NEAR(compute_sae(a, b), 0.0, 1e-12);
}

TEST(Sae, SmallPerturbationMatchesAngle) {
  std::mt19937_64 rng(2);
  const Vector a = oracle::random_matrix(6, 1, rng);
  const Vector u = oracle::random_matrix(6, 1, rng);
  const double eps = 1e-4;
  const Vector u_perp = u - a * (a.dot(u) / a.squaredNorm());
  const double predicted = 20.0 * std::log10(eps * u_perp.norm() / a.norm());
  EXPECT_NEAR(compute_sae(a, a + eps * u), predicted, 1e-2);
}

TEST(Sae, PermutationInvariant) {
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_matrix(5, 3, rng);
  Matrix b = a + 1e-3 * oracle::random_matrix(5, 3, rng);
  const double direct = compute_sae(a, b);
  Matrix perm(5, 3);
  perm << b.col(2), b.col(0), b.col(1);
  EXPECT_NEAR(compute_sae(a, perm), direct, 1e-12);
  EXPECT_THROW(compute_sae(a, Matrix(5, 2)), std::invalid_argument);
  EXPECT_THROW(compute_sae(a, Matrix::Zero(5, 3)), std::invalid_argument);
}

TEST(Psnr, DefinitionAndExact) {
  const DenseTensor ref({2, 2}, {0.0, 1.0, 0.5, 0.25});
  EXPECT_TRUE(std::isinf(compute_psnr(ref, ref)));
  const DenseTensor est({2, 2}, {0.1, 1.0, 0.5, 0.25});
  EXPECT_NEAR(compute_psnr(ref, est), 10.0 * std::log10(1.0 * 4 / 0.01), 1e-10);
}

TEST(Fit, RelativeFitAndCompare) {
  const DenseTensor ref({2}, {3.0, 4.0});
  const DenseTensor est({2}, {3.0, 3.0});
  EXPECT_NEAR(relative_fit(ref, est), 1.0 - 1.0 / 5.0, 1e-15);
  const auto r = compare(ref, est);
  EXPECT_NEAR(r.residual_norm, 1.0, 1e-15);
  EXPECT_EQ(relative_fit(DenseTensor({2}), DenseTensor({2})), 1.0);
}

TEST(Matching, FindsPermutationAndSign) {
  std::mt19937_64 rng(4);
  const Matrix a = oracle::random_matrix(8, 3, rng);
  Matrix b(8, 3);
  b << -a.col(1), a.col(2), 2.0 * a.col(0);
  const auto m = best_column_matching(a, b);
  EXPECT_EQ(m, (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_LE((matched_abs_correlations(a, b).array() - 1.0).abs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace multiway
