#include "multiway/regress.hpp"

#include "multiway/linalg.hpp"
#include "multiway/products.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace multiway {
namespace {

struct PlantedBlock {
  DenseTensor x, y;
  Vector t;
};

// Noise-free single block: X = Gx x_0 t x_1 P_1 x_2 P_2, Y = Gy x_0 t x_1 Q_1.
PlantedBlock planted(std::size_t samples, std::size_t l, std::mt19937_64& rng) {
  PlantedBlock p;
  p.t = oracle::random_matrix(static_cast<Eigen::Index>(samples), 1, rng);
  p.t.array() -= p.t.mean();
  const auto gx = oracle::random_tensor({1, l, l}, rng);
  const auto gy = oracle::random_tensor({1, l}, rng);
  p.x = oracle::multilinear(gx, {Matrix(p.t), random_orthonormal(6, l, rng), random_orthonormal(5, l, rng)});
  p.y = oracle::multilinear(gy, {Matrix(p.t), random_orthonormal(4, l, rng)});
  return p;
}

TEST(Pls, ExactLinearModel) {
  // With X^T X proportional to I the first weight vector is w itself.
  std::mt19937_64 rng(1);
  const Matrix x = std::sqrt(20.0) * random_orthonormal(20, 5, rng);
  const Vector w = oracle::random_matrix(5, 1, rng);
  const Matrix y = x * w;
  const auto m = pls_fit(x, y, 1, {false});
  EXPECT_LE((pls_predict(m, x) - y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pls, FullRankReproducesLeastSquares) {
  std::mt19937_64 rng(2);
  const Matrix x = oracle::random_matrix(30, 4, rng);
  const Matrix y = x * oracle::random_matrix(4, 2, rng) + 0.1 * oracle::random_matrix(30, 2, rng);
  const auto m = pls_fit(x, y, 4);
  Matrix xc = x.rowwise() - x.colwise().mean();
  Matrix yc = y.rowwise() - y.colwise().mean();
  const Matrix b = xc.colPivHouseholderQr().solve(yc);
  EXPECT_LE((m.coefficients - b).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pls, ZeroResponse) {
  std::mt19937_64 rng(3);
  const Matrix x = oracle::random_matrix(10, 3, rng);
  const auto m = pls_fit(x, Matrix::Zero(10, 2), 2);
  EXPECT_EQ(m.y_loadings.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(pls_predict(m, x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Pls, ScoresOrthonormal) {
  std::mt19937_64 rng(4);
  const Matrix x = oracle::random_matrix(25, 6, rng);
  const Matrix y = oracle::random_matrix(25, 3, rng);
  const auto m = pls_fit(x, y, 4);
  const Matrix tt = m.x_scores.transpose() * m.x_scores;
  EXPECT_LE((tt - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index r = 0; r < m.weights.cols(); ++r) EXPECT_NEAR(m.weights.col(r).norm(), 1.0, 1e-12);
}

TEST(Pls, YScoresProportionalForSingleLatent) {
  std::mt19937_64 rng(5);
  const Vector t = oracle::random_matrix(15, 1, rng);
  const Matrix x = t * oracle::random_matrix(1, 4, rng);
  const Matrix y = t * oracle::random_matrix(1, 3, rng);
  const auto m = pls_fit(x, y, 1, {false});
  EXPECT_NEAR(oracle::cosine(m.x_scores.col(0), m.y_scores.col(0)), 1.0, 1e-10);
}

TEST(Pls, RowPermutationLeavesMapUnchanged) {
  std::mt19937_64 rng(6);
  const Matrix x = oracle::random_matrix(12, 5, rng);
  const Matrix y = oracle::random_matrix(12, 2, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(12);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + 12, rng);
  const auto a = pls_fit(x, y, 3), b = pls_fit(perm * x, perm * y, 3);
  const Matrix probe = oracle::random_matrix(4, 5, rng);
  EXPECT_LE((pls_predict(a, probe) - pls_predict(b, probe)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pls, RankExhaustionAndErrors) {
  std::mt19937_64 rng(7);
  const Matrix x = oracle::random_matrix(10, 2, rng) * oracle::random_matrix(2, 6, rng);
  const auto m = pls_fit(x, oracle::random_matrix(10, 2, rng), 5, {false});
  EXPECT_TRUE(m.rank_exhausted);
  EXPECT_EQ(m.components, 2u);
  const auto zero = pls_fit(x, Matrix::Ones(10, 1), 0);
  EXPECT_EQ(zero.coefficients.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(pls_fit(x, Matrix::Ones(9, 1), 1), std::invalid_argument);
  EXPECT_THROW(pls_predict(m, Matrix::Ones(3, 5)), std::invalid_argument);
}

TEST(Hopls, RecoversPlantedBlock) {
  std::mt19937_64 rng(8);
  const auto p = planted(12, 2, rng);
  const auto m = hopls_fit(p.x, p.y, 1, 2);
  ASSERT_EQ(m.components.size(), 1u);
  const double fit = 1.0 - m.x_residual_norms.back() / m.x_residual_norms.front();
  EXPECT_GE(fit, 1.0 - 1e-8);
  EXPECT_GE(oracle::cosine(m.components[0].t, p.t), 0.999);
  EXPECT_LE(max_abs_diff(hopls_predict(m, p.x), p.y), 1e-8 * frobenius_norm(p.y) + 1e-12);
}

TEST(Hopls, InvariantsAcrossComponents) {
  std::mt19937_64 rng(9);
  const auto x = oracle::random_tensor({15, 5, 4, 3}, rng);
  const auto y = oracle::random_tensor({15, 4, 3}, rng);
  const auto m = hopls_fit(x, y, 3, 2);
  for (std::size_t r = 1; r < m.x_residual_norms.size(); ++r) EXPECT_LT(m.x_residual_norms[r], m.x_residual_norms[r - 1]);
  for (const auto& c : m.components) {
    EXPECT_EQ(c.x_core.shape(), (Shape{1, 2, 2, 2}));
    EXPECT_EQ(c.y_core.shape(), (Shape{1, 2, 2}));
    for (const auto* set : {&c.x_loadings, &c.y_loadings})
      for (const auto& p : *set) EXPECT_LE((p.transpose() * p - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(c.t.norm(), 1.0, 1e-12);
  }
}

TEST(Hopls, OrderTwoMatchesPls) {
  // Later components differ: HOPLS deflates only the rank-L part along P.
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = oracle::random_matrix(20, 6, rng);
    const Matrix y = oracle::random_matrix(20, 3, rng);
    const auto h = hopls_fit(DenseTensor::from_matrix(x), DenseTensor::from_matrix(y), 1, 1);
    const auto p = pls_fit(x, y, 1);
    EXPECT_GE(oracle::cosine(h.components[0].t, p.x_scores.col(0)), 0.999);
  }
}

TEST(Hopls, LinearPredictionAndZeroCases) {
  std::mt19937_64 rng(11);
  const auto x = oracle::random_tensor({10, 4, 3}, rng);
  const auto y = oracle::random_tensor({10, 3}, rng);
  const auto m = hopls_fit(x, y, 2, 2, {false});
  const auto a = oracle::random_tensor({5, 4, 3}, rng), b = oracle::random_tensor({5, 4, 3}, rng);
  const auto lhs = hopls_predict(m, 2.0 * a + b);
  const auto rhs = 2.0 * hopls_predict(m, a) + hopls_predict(m, b);
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10);
  EXPECT_EQ(frobenius_norm(hopls_predict(m, DenseTensor({5, 4, 3}))), 0.0);
  const auto empty = hopls_fit(x, y, 0, 2, {false});
  EXPECT_EQ(frobenius_norm(hopls_predict(empty, a)), 0.0);
}

TEST(Hopls, Errors) {
  EXPECT_THROW(hopls_fit(DenseTensor({4, 3}), DenseTensor({5, 2}), 1, 1), std::invalid_argument);
  EXPECT_THROW(hopls_fit(DenseTensor({4, 3, 2}), DenseTensor({4, 2}), 1, 3), std::invalid_argument);
  EXPECT_THROW(hopls_fit(DenseTensor({4, 3}), DenseTensor({4, 2}), 1, 0), std::invalid_argument);
  std::mt19937_64 rng(12);
  const auto m = hopls_fit(oracle::random_tensor({6, 3, 2}, rng), oracle::random_tensor({6, 2}, rng), 1, 1);
  EXPECT_THROW(hopls_predict(m, DenseTensor({2, 3, 3})), std::invalid_argument);
}

TEST(Pearson, KnownValues) {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1};
  EXPECT_NEAR(pearson_correlation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(a, c), -1.0, 1e-15);
  EXPECT_THROW(pearson_correlation(a, std::vector<double>{1, 2}), std::invalid_argument);
}

}  // namespace
}  // namespace multiway
