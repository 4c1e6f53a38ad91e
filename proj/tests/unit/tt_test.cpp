#include "multiway/tt.hpp"

#include "multiway/products.hpp"
#include "multiway/tensorize.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace multiway {
namespace {

TTModel random_tt(const Shape& shape, const Shape& ranks, std::mt19937_64& rng) {
  TTModel m;
  for (std::size_t n = 0; n < shape.size(); ++n) {
    const std::size_t left = n == 0 ? 1 : ranks[n - 1];
    const std::size_t right = n + 1 == shape.size() ? 1 : ranks[n];
    m.carriages.push_back(oracle::random_tensor({left, shape[n], right}, rng));
  }
  return m;
}

// Dense evaluation by explicit bond summation.
double chain_element(const TTModel& m, const Index& idx) {
  Matrix acc = Matrix::Ones(1, 1);
  for (std::size_t n = 0; n < m.carriages.size(); ++n) {
    const auto& g = m.carriages[n];
    Matrix slice(static_cast<Eigen::Index>(g.extent(0)), static_cast<Eigen::Index>(g.extent(2)));
    for (std::size_t a = 0; a < g.extent(0); ++a)
      for (std::size_t b = 0; b < g.extent(2); ++b) slice(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = oracle::get(g, {a, idx[n], b});
    acc = acc * slice;
  }
  return acc(0, 0);
}

Vector geometric(std::size_t n, double a, double z) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = a * std::pow(z, static_cast<double>(k));
  return v;
}

TEST(TtSvd, RankOneTensor) {
  std::mt19937_64 rng(1);
  const auto x = outer({oracle::random_matrix(3, 1, rng), oracle::random_matrix(4, 1, rng), oracle::random_matrix(2, 1, rng),
                        oracle::random_matrix(5, 1, rng)});
  const auto m = tt_svd(x, 1e-10);
  EXPECT_EQ(m.ranks(), (Shape{1, 1, 1}));
  EXPECT_LE(frobenius_norm(x - tt_reconstruct(m)), 1e-12 * frobenius_norm(x));
}

TEST(TtSvd, QuantizedExponentialExposesParameters) {
  const double a = 3.0, z = 2.0;
  const auto m = qtt_decompose(geometric(64, a, z), 2, 1e-12);
  EXPECT_EQ(m.ranks(), (Shape{1, 1, 1, 1, 1}));
  const Vector v = geometric(64, a, z);
  const auto r = tt_reconstruct(m);
  EXPECT_LE((r.vectorize() - v).cwiseAbs().maxCoeff(), 1e-12 * v.cwiseAbs().maxCoeff());
  double scale = 1.0;
  for (const auto& g : m.carriages) scale *= g[0];
  EXPECT_NEAR(scale, a, 1e-12);
  EXPECT_NEAR(m.carriages[0][1] / m.carriages[0][0], z, 1e-12);
}

TEST(TtSvd, LosslessRegime) {
  std::mt19937_64 rng(2);
  const auto x = oracle::random_tensor({4, 4, 4, 4}, rng);
  const auto m = tt_svd(x, 1e-15);
  const Shape r = m.ranks();
  EXPECT_LE(r[0], 4u);
  EXPECT_LE(r[1], 16u);
  EXPECT_LE(r[2], 4u);
  EXPECT_LE(frobenius_norm(x - tt_reconstruct(m)), 1e-12 * frobenius_norm(x));
}

TEST(TtSvd, AccuracyContractAndRankMonotonicity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape shape{3 + static_cast<std::size_t>(trial % 3), 4, 3, 2 + static_cast<std::size_t>(trial % 2)};
    const auto x = trial % 2 == 0 ? oracle::random_tensor(shape, rng)
                                  : tt_reconstruct(random_tt(shape, {2, 3, 2}, rng)) + 1e-4 * oracle::random_tensor(shape, rng);
    Shape prev;
    for (double tol : {1e-12, 1e-6, 1e-2}) {
      const auto m = tt_svd(x, tol);
      EXPECT_LE(frobenius_norm(x - tt_reconstruct(m)), tol * frobenius_norm(x) * (1.0 + 1e-9));
      const Shape r = m.ranks();
      if (!prev.empty())
        for (std::size_t i = 0; i < r.size(); ++i) EXPECT_LE(r[i], prev[i]);
      prev = r;
    }
  }
}

TEST(TtSvd, RejectsBadTolerance) {
  EXPECT_THROW(tt_svd(DenseTensor({2, 2}), 0.0), std::invalid_argument);
  EXPECT_THROW(tt_svd(DenseTensor({2, 2}), 1.0), std::invalid_argument);
}

TEST(TtElement, AgreesWithDenseAndChainOracle) {
  std::mt19937_64 rng(4);
  const Shape shape{3, 4, 2, 5};
  const auto m = random_tt(shape, {2, 3, 2}, rng);
  const auto dense = tt_reconstruct(m);
  std::uniform_int_distribution<std::size_t> pick(0, oracle::count(shape) - 1);
  for (int i = 0; i < 100; ++i) {
    const Index idx = oracle::unlin(shape, pick(rng));
    EXPECT_NEAR(tt_element(m, idx), oracle::get(dense, idx), 1e-12);
    EXPECT_NEAR(tt_element(m, idx), chain_element(m, idx), 1e-12);
  }
  const Index bad{3, 0, 0, 0};
  EXPECT_THROW(tt_element(m, bad), std::out_of_range);
}

TEST(TtElement, UnitRanksMultiplyEntries) {
  std::mt19937_64 rng(5);
  const auto m = random_tt({3, 2, 4}, {1, 1}, rng);
  const Index idx{2, 1, 3};
  EXPECT_NEAR(tt_element(m, idx), m.carriages[0][2] * m.carriages[1][1] * m.carriages[2][3], 1e-14);
}

TEST(TtElement, TwoCarriagesAreAMatrixFactorization) {
  std::mt19937_64 rng(6);
  const auto m = random_tt({4, 5}, {3}, rng);
  const Matrix left = unfold(m.carriages[0], 1);   // 4 x 3
  const Matrix right = unfold(m.carriages[1], 0);  // 3 x 5
  const Matrix prod = left * right;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const Index idx{i, j};
      EXPECT_NEAR(tt_element(m, idx), prod(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 1e-13);
    }
}

TEST(TtModel, LeftOrthogonalization) {
  std::mt19937_64 rng(7);
  const auto m = random_tt({3, 4, 3, 2}, {2, 3, 2}, rng);
  const auto o = left_orthogonalize(m);
  for (std::size_t n = 0; n + 1 < o.carriages.size(); ++n) {
    const auto& g = o.carriages[n];
    const Matrix left = Eigen::Map<const Matrix>(g.data().data(), static_cast<Eigen::Index>(g.extent(0) * g.extent(1)),
                                                 static_cast<Eigen::Index>(g.extent(2)));
    EXPECT_LE((left.transpose() * left - Matrix::Identity(left.cols(), left.cols())).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_LE(max_abs_diff(tt_reconstruct(m), tt_reconstruct(o)), 1e-12);
}

TEST(TtModel, ValidateAndSizeGuard) {
  TTModel bad;
  bad.carriages = {DenseTensor({2, 3, 1})};
  EXPECT_THROW(validate(bad), std::invalid_argument);
  TTModel chain;
  chain.carriages = {DenseTensor({1, 3, 2}), DenseTensor({3, 3, 1})};
  EXPECT_THROW(validate(chain), std::invalid_argument);
  TTModel big;
  for (int n = 0; n < 4; ++n) big.carriages.push_back(DenseTensor({1, 101, 1}));
  EXPECT_THROW(tt_reconstruct(big), std::length_error);
}

TEST(StorageCost, CountsAndParameterCount) {
  EXPECT_EQ(storage_cost(StorageKind::Cpd, 3, 10, 2), 60u);
  EXPECT_EQ(storage_cost(StorageKind::Tucker, 3, 10, 2), 68u);
  EXPECT_EQ(storage_cost(StorageKind::Tt, 4, 10, 3), 2u * 10 * 3 + 2u * 10 * 9);
  EXPECT_EQ(storage_cost(StorageKind::Cpd, 3, 10, 0), 0u);
  EXPECT_EQ(storage_cost(StorageKind::Qtt, 1, 1024, 1, 2), 20u);
  EXPECT_EQ(parse_storage_kind("tucker"), StorageKind::Tucker);
  EXPECT_THROW(parse_storage_kind("hierarchical"), std::invalid_argument);
  std::mt19937_64 rng(8);
  const auto m = random_tt({3, 4, 5}, {2, 2}, rng);
  EXPECT_EQ(m.parameter_count(), 3u * 2 + 2u * 4 * 2 + 2u * 5);
}

TEST(StorageCost, QttLogarithmicLaw) {
  for (std::size_t levels = 8; levels <= 16; levels += 2) {
    const auto m = qtt_decompose(geometric(std::size_t{1} << levels, 1.0, 0.999), 2, 1e-12);
    EXPECT_EQ(m.parameter_count(), 2 * levels);
    EXPECT_EQ(m.parameter_count(), storage_cost(StorageKind::Qtt, 1, std::size_t{1} << levels, 1, 2));
  }
}

}  // namespace
}  // namespace multiway
