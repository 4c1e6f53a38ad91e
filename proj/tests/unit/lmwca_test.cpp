#include "multiway/lmwca.hpp"

#include "multiway/linalg.hpp"
#include "multiway/metrics.hpp"
#include "multiway/products.hpp"
#include "multiway/tucker.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace multiway {
namespace {

struct Planted {
  std::vector<DenseTensor> tensors;
  Matrix common;
};

// K datasets of shape 8 x 6 x 5 with mode-0 factors [Bc | Bi_k] (Bc has 2 columns).
Planted planted_common(std::size_t k_count, std::mt19937_64& rng) {
  Planted p;
  p.common = random_orthonormal(8, 2, rng);
  for (std::size_t k = 0; k < k_count; ++k) {
    Matrix b0(8, 3);
    b0 << p.common, oracle::random_matrix(8, 1, rng);
    const std::vector<Matrix> f{b0, oracle::random_matrix(6, 2, rng), oracle::random_matrix(5, 2, rng)};
    p.tensors.push_back(oracle::multilinear(oracle::random_tensor({3, 2, 2}, rng), f));
  }
  return p;
}

double total_residual(const LinkedModel& m, const std::vector<DenseTensor>& xs) {
  double acc = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = frobenius_norm(xs[k] - m.reconstruct(k));
    acc += r * r;
  }
  return std::sqrt(acc);
}

TEST(LmwcaFit, RecoversPlantedCommonSubspace) {
  std::mt19937_64 rng(1);
  const auto p = planted_common(3, rng);
  const auto m = lmwca_fit(p.tensors, {3, 2, 2}, {2, 0, 0});
  EXPECT_LE(principal_angles(m.common[0], p.common).maxCoeff(), 1e-6);
  for (double f : lmwca_fits(m, p.tensors)) EXPECT_GE(f, 1.0 - 1e-8);
}

TEST(LmwcaFit, FactorBlocksOrthonormalAndCommonShared) {
  std::mt19937_64 rng(2);
  std::vector<DenseTensor> xs;
  for (int k = 0; k < 3; ++k) xs.push_back(oracle::random_tensor({6, 5, 4}, rng));
  const auto m = lmwca_fit(xs, {3, 3, 2}, {1, 2, 0});
  for (std::size_t n = 0; n < 3; ++n) {
    for (std::size_t k = 0; k < 3; ++k) {
      const Matrix f = m.factor(k, n);
      EXPECT_LE((f.transpose() * f - Matrix::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_TRUE(f.leftCols(static_cast<Eigen::Index>(m.commons[n])) == m.factor(0, n).leftCols(static_cast<Eigen::Index>(m.commons[n])));
    }
  }
}

TEST(LmwcaFit, NoCommonColumnsIsIndependentHooi) {
  std::mt19937_64 rng(3);
  std::vector<DenseTensor> xs;
  for (int k = 0; k < 2; ++k) xs.push_back(oracle::random_tensor({5, 6, 4}, rng));
  LmwcaOptions opts;
  opts.sweeps = 200;
  const auto m = lmwca_fit(xs, {2, 3, 2}, {0, 0, 0}, opts);
  HooiOptions h;
  h.max_iters = 200;
  h.tol = 0.0;
  const auto fits = lmwca_fits(m, xs);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto ref = hooi(xs[k], {2, 3, 2}, h);
    EXPECT_NEAR(fits[k], relative_fit(xs[k], tucker_reconstruct(ref.model)), 1e-10);
  }
}

TEST(LmwcaFit, AllCommonIsHooiOnStackedTensor) {
  std::mt19937_64 rng(4);
  std::vector<DenseTensor> xs;
  for (int k = 0; k < 3; ++k) xs.push_back(oracle::random_tensor({5, 4, 6}, rng));
  DenseTensor stacked({5, 4, 6, 3});
  for (std::size_t k = 0; k < 3; ++k)
    std::copy(xs[k].data().begin(), xs[k].data().end(), stacked.data().begin() + static_cast<std::ptrdiff_t>(k * xs[k].size()));
  LmwcaOptions opts;
  opts.sweeps = 200;
  const auto m = lmwca_fit(xs, {2, 2, 3}, {2, 2, 3}, opts);
  HooiOptions h;
  h.max_iters = 200;
  h.tol = 0.0;
  const auto ref = hooi(stacked, {2, 2, 3, 3}, h);
  EXPECT_NEAR(total_residual(m, xs), frobenius_norm(stacked - tucker_reconstruct(ref.model)), 1e-9);
}

TEST(LmwcaFit, RotatingIndividualBlocksKeepsReconstruction) {
  std::mt19937_64 rng(5);
  std::vector<DenseTensor> xs;
  for (int k = 0; k < 2; ++k) xs.push_back(oracle::random_tensor({6, 5, 4}, rng));
  auto m = lmwca_fit(xs, {4, 3, 2}, {1, 1, 0});
  const auto before = m.reconstruct(1);
  const Matrix q = random_orthonormal(3, 3, rng);
  m.individual[1][0] = m.individual[1][0] * q;
  Matrix full = Matrix::Identity(4, 4);
  full.bottomRightCorner(3, 3) = q.transpose();
  m.cores[1] = oracle::mode_product(m.cores[1], full, 0);
  EXPECT_LE(max_abs_diff(before, m.reconstruct(1)), 1e-12);
}

TEST(LmwcaFit, Errors) {
  const DenseTensor a({3, 3}), b({3, 4});
  EXPECT_THROW(lmwca_fit({a}, {1, 1}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(lmwca_fit({a, b}, {1, 1}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(lmwca_fit({a, a}, {1, 1}, {2, 0}), std::invalid_argument);
  EXPECT_THROW(lmwca_fit({a, a}, {4, 1}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(lmwca_fit({a, a}, {1}, {0}), std::invalid_argument);
}

TEST(DetectCommon, CountsPlantedSharedDirections) {
  std::mt19937_64 rng(6);
  const auto p = planted_common(3, rng);
  EXPECT_EQ(detect_common_components(p.tensors, 0, 3), 2u);
  EXPECT_THROW(detect_common_components({p.tensors[0]}, 0, 3), std::invalid_argument);
}

std::vector<ClassGroup> two_classes(std::mt19937_64& rng) {
  std::vector<ClassGroup> groups;
  for (int c = 0; c < 2; ++c) {
    const Matrix common = random_orthonormal(48, 8, rng);
    ClassGroup g;
    for (int k = 0; k < 2; ++k) {
      Matrix samples = common * oracle::random_matrix(8, 10, rng) + 0.3 * oracle::random_matrix(48, 10, rng);
      g.tensors.push_back(DenseTensor::from_matrix(samples).reshaped({8, 6, 10}));
    }
    groups.push_back(g);
  }
  return groups;
}

TEST(LmwcaClassify, TrainingSampleWinsItsClass) {
  std::mt19937_64 rng(7);
  const auto groups = two_classes(rng);
  for (std::size_t c = 0; c < 2; ++c) {
    const Matrix samples = unfold(groups[c].tensors[1], 2).transpose();
    const DenseTensor test = DenseTensor::from_vector(samples.col(3)).reshaped({8, 6});
    EXPECT_EQ(lmwca_classify(groups, test).label, c);
  }
}

TEST(LmwcaClassify, ScoresInvariantToSubspaceRotation) {
  std::mt19937_64 rng(8);
  const auto groups = two_classes(rng);
  std::vector<Matrix> subspaces;
  for (const auto& g : groups) subspaces.push_back(class_common_subspace(g));
  EXPECT_EQ(subspaces[0].cols(), 8);
  const auto test = oracle::random_tensor({8, 6}, rng);
  const auto base = classify_with_subspaces(subspaces, test);
  std::vector<Matrix> rotated;
  for (const auto& s : subspaces) rotated.push_back(s * random_orthonormal(s.cols(), s.cols(), rng));
  const auto again = classify_with_subspaces(rotated, test);
  EXPECT_LE((base.scores - again.scores).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(base.label, again.label);
}

TEST(LmwcaClassify, TiesGoToLowestIndex) {
  const Matrix s = Matrix::Identity(4, 2);
  const auto r = classify_with_subspaces({s, s, s}, DenseTensor::from_vector(Vector::Ones(4)));
  EXPECT_EQ(r.label, 0u);
}

TEST(LmwcaClassify, Errors) {
  std::mt19937_64 rng(9);
  auto groups = two_classes(rng);
  EXPECT_THROW(lmwca_classify({groups[0]}, DenseTensor({8, 6})), std::invalid_argument);
  groups[1].tensors.pop_back();
  EXPECT_THROW(lmwca_classify(groups, DenseTensor({8, 6})), std::invalid_argument);
  EXPECT_THROW(classify_with_subspaces({Matrix::Identity(4, 1), Matrix::Identity(4, 1)}, DenseTensor({5})), std::invalid_argument);
  EXPECT_THROW(class_common_subspace(two_classes(rng)[0], 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace multiway
