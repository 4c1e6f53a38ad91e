#include "multiway/lmwca.hpp"

#include "multiway/linalg.hpp"
#include "multiway/metrics.hpp"
#include "multiway/products.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace multiway {

namespace {

Matrix hstack(const std::vector<Matrix>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix out(blocks.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

// Orthonormal basis of the complement of span(common), I x (I - C).
Matrix complement_basis(const Matrix& common) {
  const Eigen::HouseholderQR<Matrix> qr(common);
  const Matrix q = qr.householderQ() * Matrix::Identity(common.rows(), common.rows());
  return q.rightCols(common.rows() - common.cols());
}

struct ModeEstimate {
  Matrix common;
  std::vector<Matrix> individual;
};

ModeEstimate estimate_mode(const std::vector<Matrix>& z, std::size_t rank, std::size_t shared) {
  const auto rows = z.front().rows();
  ModeEstimate est;
  if (shared == rank) {
    est.common = leading_left_singular_vectors(hstack(z), rank);
    est.individual.assign(z.size(), Matrix(rows, 0));
    return est;
  }
  if (shared == 0) {
    est.common = Matrix(rows, 0);
    for (const auto& zk : z) est.individual.push_back(leading_left_singular_vectors(zk, rank));
    return est;
  }
  std::vector<Matrix> bases;
  for (const auto& zk : z) bases.push_back(leading_left_singular_vectors(zk, rank));
  est.common = leading_left_singular_vectors(hstack(bases), shared);
  const Matrix comp = complement_basis(est.common);
  for (const auto& zk : z) {
    est.individual.push_back(comp * leading_left_singular_vectors(comp.transpose() * zk, rank - shared));
  }
  return est;
}

std::vector<Matrix> dataset_factors(const LinkedModel& m, std::size_t k) {
  std::vector<Matrix> f;
  for (std::size_t n = 0; n < m.order(); ++n) f.push_back(m.factor(k, n));
  return f;
}

void store_mode(LinkedModel& m, std::size_t mode, ModeEstimate est) {
  m.common[mode] = std::move(est.common);
  for (std::size_t k = 0; k < est.individual.size(); ++k) m.individual[k][mode] = std::move(est.individual[k]);
}

void check_inputs(const std::vector<DenseTensor>& tensors, const Shape& ranks, const Shape& commons) {
  if (tensors.size() < 2) throw std::invalid_argument("lmwca_fit: at least two datasets required");
  const Shape& shape = tensors.front().shape();
  for (std::size_t k = 1; k < tensors.size(); ++k) {
    if (tensors[k].shape() != shape) {
      throw std::invalid_argument("lmwca_fit: dataset " + std::to_string(k) + " has a different shape");
    }
  }
  if (ranks.size() != shape.size() || commons.size() != shape.size()) {
    throw std::invalid_argument("lmwca_fit: ranks and commons need one entry per mode");
  }
  for (std::size_t n = 0; n < shape.size(); ++n) {
    if (ranks[n] == 0 || ranks[n] > shape[n] || commons[n] > ranks[n]) {
      throw std::invalid_argument("lmwca_fit: need C_n <= R_n <= I_n and R_n > 0 in mode " + std::to_string(n));
    }
  }
}

}  // namespace

Matrix LinkedModel::factor(std::size_t dataset, std::size_t mode) const {
  const Matrix& c = common.at(mode);
  const Matrix& i = individual.at(dataset).at(mode);
  Matrix out(c.rows(), c.cols() + i.cols());
  out << c, i;
  return out;
}

DenseTensor LinkedModel::reconstruct(std::size_t dataset) const {
  return multilinear_product(cores.at(dataset), dataset_factors(*this, dataset));
}

LinkedModel lmwca_fit(const std::vector<DenseTensor>& tensors, const Shape& ranks, const Shape& commons,
                      const LmwcaOptions& opts) {
  check_inputs(tensors, ranks, commons);
  const std::size_t order = ranks.size();
  const std::size_t k_count = tensors.size();
  LinkedModel m;
  m.ranks = ranks;
  m.commons = commons;
  m.common.resize(order);
  m.individual.assign(k_count, std::vector<Matrix>(order));

  for (std::size_t n = 0; n < order; ++n) {
    std::vector<Matrix> z;
    for (const auto& t : tensors) z.push_back(unfold(t, n));
    store_mode(m, n, estimate_mode(z, ranks[n], commons[n]));
  }
  for (std::size_t s = 0; s < opts.sweeps; ++s) {
    for (std::size_t n = 0; n < order; ++n) {
      std::vector<Matrix> z;
      for (std::size_t k = 0; k < k_count; ++k) {
        z.push_back(unfold(multilinear_product_transposed(tensors[k], dataset_factors(m, k), n), n));
      }
      store_mode(m, n, estimate_mode(z, ranks[n], commons[n]));
    }
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    m.cores.push_back(multilinear_product_transposed(tensors[k], dataset_factors(m, k)));
  }
  return m;
}

std::vector<double> lmwca_fits(const LinkedModel& model, const std::vector<DenseTensor>& tensors) {
  if (tensors.size() != model.datasets()) throw std::invalid_argument("lmwca_fits: dataset count mismatch");
  std::vector<double> fits;
  for (std::size_t k = 0; k < tensors.size(); ++k) fits.push_back(relative_fit(tensors[k], model.reconstruct(k)));
  return fits;
}

std::size_t detect_common_components(const std::vector<DenseTensor>& tensors, std::size_t mode,
                                     std::size_t rank, double threshold) {
  if (tensors.size() < 2) throw std::invalid_argument("detect_common_components: at least two datasets required");
  std::vector<Matrix> bases;
  for (const auto& t : tensors) {
    if (mode >= t.order() || t.shape() != tensors.front().shape()) {
      throw std::invalid_argument("detect_common_components: inconsistent shapes");
    }
    bases.push_back(leading_left_singular_vectors(unfold(t, mode), rank));
  }
  const Svd svd = thin_svd(hstack(bases));
  const double k = static_cast<double>(tensors.size());
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
    const double corr = (svd.s(i) * svd.s(i) - 1.0) / (k - 1.0);
    if (corr >= threshold) ++count;
  }
  return std::min(count, rank);
}

Matrix class_common_subspace(const ClassGroup& group, double common_fraction) {
  if (group.tensors.size() < 2) throw std::invalid_argument("lmwca_classify: a class needs at least two tensors");
  if (!(common_fraction > 0.0 && common_fraction <= 1.0)) {
    throw std::invalid_argument("lmwca_classify: common_fraction must lie in (0, 1]");
  }
  std::vector<DenseTensor> mats;
  for (const auto& t : group.tensors) {
    if (t.order() < 2) throw std::invalid_argument("lmwca_classify: training tensors need a sample mode");
    const Matrix m = unfold(t, t.order() - 1).transpose();
    mats.push_back(DenseTensor::from_matrix(m));
  }
  const Shape& s = mats.front().shape();
  const std::size_t features = s[0];
  const std::size_t samples = s[1];
  const std::size_t r1 = std::min(features, samples);
  const auto shared = static_cast<std::size_t>(std::lround(common_fraction * static_cast<double>(samples)));
  const std::size_t c1 = std::clamp<std::size_t>(shared, 1, r1);
  const LinkedModel m = lmwca_fit(mats, {r1, samples}, {c1, 0});
  return m.common[0];
}

ClassifyResult classify_with_subspaces(const std::vector<Matrix>& subspaces, const DenseTensor& test) {
  if (subspaces.size() < 2) throw std::invalid_argument("lmwca_classify: at least two classes required");
  const auto x = test.vectorize();
  ClassifyResult out;
  out.scores = Vector::Zero(static_cast<Eigen::Index>(subspaces.size()));
  const double xn = x.norm();
  for (std::size_t c = 0; c < subspaces.size(); ++c) {
    if (subspaces[c].rows() != x.size()) {
      throw std::invalid_argument("lmwca_classify: test sample has " + std::to_string(x.size()) +
                                  " features, class subspace has " + std::to_string(subspaces[c].rows()));
    }
    const auto i = static_cast<Eigen::Index>(c);
    out.scores(i) = xn > 0.0 ? (subspaces[c].transpose() * x).norm() / xn : 0.0;
    if (out.scores(i) > out.scores(static_cast<Eigen::Index>(out.label))) out.label = c;
  }
  return out;
}

ClassifyResult lmwca_classify(const std::vector<ClassGroup>& train, const DenseTensor& test,
                              double common_fraction) {
  if (train.size() < 2) throw std::invalid_argument("lmwca_classify: at least two classes required");
  std::vector<Matrix> subspaces;
  for (const auto& g : train) subspaces.push_back(class_common_subspace(g, common_fraction));
  return classify_with_subspaces(subspaces, test);
}

}  // namespace multiway
