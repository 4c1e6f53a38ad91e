#include "multiway/tt.hpp"

#include "multiway/linalg.hpp"
#include "multiway/tensorize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace multiway {

namespace {

Eigen::Map<const Matrix> left_unfolding(const DenseTensor& carriage) {
  const auto& s = carriage.shape();
  return {carriage.data().data(), static_cast<Eigen::Index>(s[0] * s[1]),
          static_cast<Eigen::Index>(s[2])};
}

DenseTensor carriage_from(const Matrix& m, std::size_t left, std::size_t extent, std::size_t right) {
  return DenseTensor({left, extent, right}, std::vector<double>(m.data(), m.data() + m.size()));
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

Shape TTModel::shape() const {
  Shape s;
  for (const auto& g : carriages) s.push_back(g.shape()[1]);
  return s;
}

Shape TTModel::ranks() const {
  Shape r;
  for (std::size_t n = 0; n + 1 < carriages.size(); ++n) r.push_back(carriages[n].shape()[2]);
  return r;
}

std::size_t TTModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& g : carriages) count += g.size();
  return count;
}

void validate(const TTModel& model) {
  if (model.carriages.empty()) throw std::invalid_argument("TT model has no carriages");
  for (std::size_t n = 0; n < model.carriages.size(); ++n) {
    const auto& g = model.carriages[n];
    if (g.order() != 3) throw std::invalid_argument("TT carriage must be order 3");
    if (n == 0 && g.shape()[0] != 1) throw std::invalid_argument("TT left boundary rank must be 1");
    if (n + 1 == model.carriages.size() && g.shape()[2] != 1) {
      throw std::invalid_argument("TT right boundary rank must be 1");
    }
    if (n > 0 && model.carriages[n - 1].shape()[2] != g.shape()[0]) {
      throw std::invalid_argument("TT ranks do not chain at carriage " + std::to_string(n));
    }
  }
}

TTModel tt_svd(const DenseTensor& t, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tt_svd: tol must be in (0, 1)");
  const auto& shape = t.shape();
  const std::size_t order = shape.size();
  TTModel model;
  if (order == 1) {
    model.carriages.push_back(t.reshaped({1, shape[0], 1}));
    return model;
  }
  const double delta = tol * frobenius_norm(t) / std::sqrt(static_cast<double>(order - 1));
  std::size_t left = 1;
  std::size_t rest = t.size();
  Matrix remainder = Eigen::Map<const Matrix>(t.data().data(), 1, static_cast<Eigen::Index>(t.size()));
  for (std::size_t n = 0; n + 1 < order; ++n) {
    rest /= shape[n];
    const Eigen::Map<const Matrix> c(remainder.data(), static_cast<Eigen::Index>(left * shape[n]),
                                     static_cast<Eigen::Index>(rest));
    Svd svd = thin_svd(c);
    const auto k = svd.s.size();
    // smallest rank whose discarded tail is within delta
    std::size_t rank = static_cast<std::size_t>(k);
    double tail = 0.0;
    while (rank > 1) {
      const double next = tail + svd.s(static_cast<Eigen::Index>(rank - 1)) *
                                     svd.s(static_cast<Eigen::Index>(rank - 1));
      if (std::sqrt(next) > delta) break;
      tail = next;
      --rank;
    }
    const auto r = static_cast<Eigen::Index>(rank);
    model.carriages.push_back(carriage_from(svd.u.leftCols(r), left, shape[n], rank));
    remainder = svd.s.head(r).asDiagonal() * svd.v.leftCols(r).transpose();
    left = rank;
  }
  model.carriages.push_back(carriage_from(remainder, left, shape[order - 1], 1));
  return model;
}

double tt_element(const TTModel& model, std::span<const std::size_t> idx) {
  if (idx.size() != model.carriages.size()) throw std::invalid_argument("tt_element: index arity");
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const auto& g = model.carriages[n];
    const auto& s = g.shape();
    if (idx[n] >= s[1]) throw std::out_of_range("tt_element: index out of range in mode " + std::to_string(n));
    Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(s[2]));
    for (std::size_t b = 0; b < s[2]; ++b) {
      double acc = 0.0;
      for (std::size_t a = 0; a < s[0]; ++a) acc += v(static_cast<Eigen::Index>(a)) * g[a + s[0] * (idx[n] + s[1] * b)];
      next(static_cast<Eigen::Index>(b)) = acc;
    }
    v = std::move(next);
  }
  return v(0);
}

DenseTensor tt_reconstruct(const TTModel& model) {
  validate(model);
  const Shape shape = model.shape();
  if (index_map::element_count(shape) > kMaxReconstructElements) {
    throw std::length_error("tt_reconstruct: tensor exceeds the dense size guard");
  }
  Matrix acc = Matrix::Ones(1, 1);
  for (const auto& g : model.carriages) {
    const auto& s = g.shape();
    const Eigen::Map<const Matrix> gm(g.data().data(), static_cast<Eigen::Index>(s[0]),
                                      static_cast<Eigen::Index>(s[1] * s[2]));
    Matrix prod = acc * gm;  // P x (I_n R_n)
    acc = Eigen::Map<const Matrix>(prod.data(), prod.rows() * static_cast<Eigen::Index>(s[1]),
                                   static_cast<Eigen::Index>(s[2]));
  }
  return DenseTensor(shape, std::vector<double>(acc.data(), acc.data() + acc.size()));
}

TTModel left_orthogonalize(TTModel model) {
  validate(model);
  for (std::size_t n = 0; n + 1 < model.carriages.size(); ++n) {
    auto& g = model.carriages[n];
    const auto s = g.shape();
    Eigen::HouseholderQR<Matrix> qr(left_unfolding(g));
    const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(s[0] * s[1]), static_cast<Eigen::Index>(s[2]));
    Matrix q = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(s[0] * s[1]), k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    g = carriage_from(q, s[0], s[1], static_cast<std::size_t>(k));
    auto& next = model.carriages[n + 1];
    const auto ns = next.shape();
    const Eigen::Map<const Matrix> nm(next.data().data(), static_cast<Eigen::Index>(ns[0]),
                                      static_cast<Eigen::Index>(ns[1] * ns[2]));
    const Matrix merged = r * nm;
    next = carriage_from(merged, static_cast<std::size_t>(k), ns[1], ns[2]);
  }
  return model;
}

TTModel qtt_decompose(const Vector& v, std::size_t base, double tol) {
  return tt_svd(quantize(v, base), tol);
}

StorageKind parse_storage_kind(std::string_view name) {
  if (name == "cpd" || name == "CPD") return StorageKind::Cpd;
  if (name == "tucker" || name == "Tucker") return StorageKind::Tucker;
  if (name == "tt" || name == "TT") return StorageKind::Tt;
  if (name == "qtt" || name == "QTT") return StorageKind::Qtt;
  throw std::invalid_argument("unknown storage kind '" + std::string(name) + "'");
}

std::size_t storage_cost(StorageKind kind, std::size_t order, std::size_t extent,
                         std::size_t rank, std::size_t base) {
  if (order == 0 || extent == 0) throw std::invalid_argument("storage_cost: order and extent must be positive");
  if (rank == 0) return 0;
  const auto tt_count = [&](std::size_t n, std::size_t i) -> std::size_t {
    if (n == 1) return i;
    return 2 * i * rank + (n - 2) * i * rank * rank;
  };
  switch (kind) {
    case StorageKind::Cpd:
      return order * extent * rank;
    case StorageKind::Tucker:
      return order * extent * rank + ipow(rank, order);
    case StorageKind::Tt:
      return tt_count(order, extent);
    case StorageKind::Qtt: {
      const std::size_t levels = exact_log(extent, base);
      return tt_count(order * levels, base);
    }
  }
  throw std::invalid_argument("storage_cost: invalid kind");
}

}  // namespace multiway
