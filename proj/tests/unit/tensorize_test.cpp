#include "multiway/tensorize.hpp"

#include "multiway/linalg.hpp"
#include "multiway/products.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace multiway {
namespace {

Vector geometric(std::size_t n, double a, double z) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = a * std::pow(z, static_cast<double>(k));
  return v;
}

TEST(Hankelize, PowersOfTwo) {
  const Matrix h = hankelize(geometric(3, 1.0, 2.0), 2, 2);
  Matrix expect(2, 2);
  expect << 1, 2, 2, 4;
  EXPECT_EQ(h, expect);
  EXPECT_THROW(hankelize(geometric(4, 1.0, 2.0), 2, 2), std::invalid_argument);
}

TEST(Hankelize, EntryRule) {
  Vector s(6);
  s << 3, 1, 4, 1, 5, 9;
  const Matrix h = hankelize(s, 4, 3);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), s(i + j));
}

TEST(Hankelize, ConstantSignalIsRankOne) {
  const Matrix h = hankelize(Vector::Constant(9, 2.5), 4, 6);
  EXPECT_TRUE((h.array() == 2.5).all());
  EXPECT_EQ(numerical_rank(h), 1u);
}

TEST(Hankelize, ExponentialIsNumericallyRankOne) {
  for (double z : {0.9, 1.05, -0.7}) {
    const Matrix h = hankelize(geometric(31, 1.7, z), 16, 16);
    const Svd svd = thin_svd(h);
    EXPECT_LE(svd.s(1), 1e-10 * svd.s(0)) << z;
  }
}

TEST(Hankelize, DehankelizeInvertsAndAverages) {
  Vector s(7);
  s << 1, -2, 3, 0.5, 8, 2, -1;
  EXPECT_LE((dehankelize(hankelize(s, 3, 5)) - s).cwiseAbs().maxCoeff(), 1e-15);
  Matrix m(2, 2);
  m << 1, 2, 4, 8;
  const Vector d = dehankelize(m);
  EXPECT_EQ(d(1), 3.0);
}

TEST(HankelTensorize, SlicesAreChannelHankels) {
  Matrix signals(5, 60);
  for (Eigen::Index k = 0; k < 5; ++k)
    for (Eigen::Index t = 0; t < 60; ++t) signals(k, t) = std::sin(0.1 * static_cast<double>(t * (k + 1)));
  const auto x = hankel_tensorize(signals, 24, 37);
  EXPECT_EQ(x.shape(), (Shape{24, 37, 5}));
  for (std::size_t k = 0; k < 5; ++k) {
    const Matrix h = hankelize(signals.row(static_cast<Eigen::Index>(k)).transpose(), 24, 37);
    for (std::size_t i = 0; i < 24; i += 5)
      for (std::size_t j = 0; j < 37; j += 7) EXPECT_EQ(x.at({i, j, k}), h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
}

TEST(Quantize, ReshapeIsIdentityOnData) {
  Vector v(8);
  std::iota(v.data(), v.data() + 8, 1.0);
  const auto q = quantize(v, 2);
  EXPECT_EQ(q.shape(), (Shape{2, 2, 2}));
  EXPECT_EQ(q.vectorize(), v);
  const auto single = quantize(v, 8);
  EXPECT_EQ(single.shape(), (Shape{8}));
  EXPECT_THROW(quantize(Vector::Ones(6), 2), std::invalid_argument);
  EXPECT_THROW(quantize(Vector::Ones(4), 1), std::invalid_argument);
}

TEST(Quantize, ExponentialBecomesRankOneWithPowerFactors) {
  const double a = 3.0, z = 1.1;
  const std::size_t levels = 5;
  const auto q = quantize(geometric(std::size_t{1} << levels, a, z), 2);
  std::vector<Vector> factors;
  for (std::size_t n = 0; n < levels; ++n) {
    Vector f(2);
    f << 1.0, std::pow(z, static_cast<double>(std::size_t{1} << n));
    factors.push_back(f);
  }
  factors[0] *= a;
  EXPECT_LE(max_abs_diff(q, outer(factors)), 1e-12);
  for (std::size_t n = 0; n < levels; ++n) EXPECT_EQ(oracle::matrix_rank(oracle::unfold(q, n), 1e-10), 1u);
}

TEST(ExactLog, Powers) {
  EXPECT_EQ(exact_log(1024, 2), 10u);
  EXPECT_EQ(exact_log(81, 3), 4u);
  EXPECT_THROW(exact_log(100, 3), std::invalid_argument);
}

}  // namespace
}  // namespace multiway
