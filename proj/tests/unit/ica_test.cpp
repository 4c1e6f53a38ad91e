#include "multiway/ica.hpp"

#include "multiway/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace multiway {
namespace {

TEST(Pca, RecoversOrthogonalMixingOfUnequalPowerSources) {
  std::mt19937_64 rng(1);
  Matrix s = oracle::random_matrix(2, 500, rng);
  s.row(0) *= 5.0;
  const Matrix a = Eigen::HouseholderQR<Matrix>(oracle::random_matrix(4, 2, rng)).householderQ() * Matrix::Identity(4, 2);
  const auto r = pca_separation(a * s, 2);
  EXPECT_LE(compute_sae(a, r.mixing), -30.0);
  EXPECT_EQ(r.sources.rows(), 2);
  EXPECT_EQ(r.sources.cols(), 500);
}

TEST(IcaCumulant, SeparatesNonGaussianSources) {
  std::mt19937_64 rng(2);
  const Eigen::Index t = 4000;
  Matrix s(2, t);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (Eigen::Index j = 0; j < t; ++j) {
    s(0, j) = uni(rng);
    s(1, j) = std::sin(0.05 * static_cast<double>(j));
  }
  const Matrix a = oracle::random_matrix(5, 2, rng);
  const auto r = ica_cumulant(a * s, 2);
  EXPECT_LE(compute_sae(a, r.mixing), -25.0);
  const auto p = pca_separation(a * s, 2);
  EXPECT_LT(compute_sae(a, r.mixing), compute_sae(a, p.mixing));
}

TEST(IcaCumulant, Deterministic) {
  std::mt19937_64 rng(3);
  const Matrix x = oracle::random_matrix(3, 200, rng).array().cube().matrix();
  const auto a = ica_cumulant(x, 3), b = ica_cumulant(x, 3);
  EXPECT_EQ(a.mixing, b.mixing);
}

}  // namespace
}  // namespace multiway
