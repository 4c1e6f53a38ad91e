#include "multiway/kron_cs.hpp"

#include "multiway/products.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace multiway {

namespace {

void check_measurements(const KronDictionary& d, const DenseTensor& y) {
  if (y.shape() != d.measurement_shape()) {
    throw std::invalid_argument("measurement tensor shape does not match the dictionary");
  }
}

std::vector<Vector> atom_column_norms(const KronDictionary& d) {
  std::vector<Vector> norms;
  for (const auto& w : d.atoms) {
    Vector n = w.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n.size(); ++i) {
      if (n(i) == 0.0) throw std::invalid_argument("dictionary has a zero column");
    }
    norms.push_back(std::move(n));
  }
  return norms;
}

// Correlation tensor divided by the norm of each Kronecker atom.
DenseTensor normalized_correlation(const KronDictionary& d, const DenseTensor& residual,
                                   const std::vector<Vector>& norms) {
  DenseTensor c = kron_adjoint_apply(d, residual);
  for (std::size_t n = 0; n < norms.size(); ++n) {
    const Matrix scale = norms[n].cwiseInverse().asDiagonal();
    c = mode_n_product(c, scale, n);
  }
  return c;
}

Vector kron_atom(const KronDictionary& d, std::span<const std::size_t> idx) {
  Vector acc = Vector::Ones(1);
  for (std::size_t n = 0; n < d.atoms.size(); ++n) {
    acc = kronecker(d.atoms[n].col(static_cast<Eigen::Index>(idx[n])), acc);
  }
  return acc;
}

Matrix select_columns(const Matrix& m, const std::vector<std::size_t>& cols) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
  }
  return out;
}

Matrix selection_matrix(const std::vector<std::size_t>& rows, std::size_t extent) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(extent));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(rows[j])) = 1.0;
  }
  return e;
}

}  // namespace

Shape KronDictionary::core_shape() const {
  Shape s;
  for (const auto& w : atoms) s.push_back(static_cast<std::size_t>(w.cols()));
  return s;
}

Shape KronDictionary::measurement_shape() const {
  Shape s;
  for (const auto& w : atoms) s.push_back(static_cast<std::size_t>(w.rows()));
  return s;
}

KronDictionary make_kron_dictionary(std::vector<Matrix> sensing, std::vector<Matrix> bases) {
  if (sensing.empty()) throw std::invalid_argument("dictionary needs at least one mode");
  if (sensing.size() != bases.size()) throw std::invalid_argument("one basis per sensing matrix");
  KronDictionary d;
  for (std::size_t n = 0; n < sensing.size(); ++n) {
    const auto& phi = sensing[n];
    const auto& b = bases[n];
    if (phi.cols() != b.rows()) throw std::invalid_argument("sensing/basis size mismatch in mode " + std::to_string(n));
    if (phi.rows() > b.cols()) {
      throw std::invalid_argument("mode " + std::to_string(n) + ": more measurements than atoms");
    }
    if (!phi.allFinite() || !b.allFinite()) throw std::invalid_argument("dictionary entries must be finite");
    d.atoms.push_back(phi * b);
  }
  d.sensing = std::move(sensing);
  d.bases = std::move(bases);
  return d;
}

KronDictionary make_kron_dictionary(std::vector<Matrix> sensing) {
  std::vector<Matrix> bases;
  for (const auto& phi : sensing) bases.push_back(Matrix::Identity(phi.cols(), phi.cols()));
  return make_kron_dictionary(std::move(sensing), std::move(bases));
}

Matrix dct_basis(std::size_t n) {
  Matrix b(n, n);
  const double len = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / len);
    for (std::size_t i = 0; i < n; ++i) {
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          scale * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) * static_cast<double>(k) / len);
    }
  }
  return b;
}

Matrix gaussian_sensing(std::size_t rows, std::size_t cols, Rng& rng) {
  return random_gaussian(rows, cols, rng) / std::sqrt(static_cast<double>(rows));
}

SparseCore::SparseCore(Shape shape) : shape_(std::move(shape)) {
  if (shape_.empty()) throw std::invalid_argument("sparse core needs at least one mode");
}

void SparseCore::set(std::span<const std::size_t> idx, double value) {
  const std::size_t key = index_map::linear(shape_, idx);
  if (value == 0.0) {
    values_.erase(key);
  } else {
    values_[key] = value;
  }
}

double SparseCore::get(std::span<const std::size_t> idx) const {
  const auto it = values_.find(index_map::linear(shape_, idx));
  return it == values_.end() ? 0.0 : it->second;
}

std::vector<SparseCore::Entry> SparseCore::entries() const {
  std::vector<Entry> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back({index_map::multi(shape_, key), value});
  return out;
}

DenseTensor SparseCore::to_dense() const {
  DenseTensor t(shape_);
  for (const auto& [key, value] : values_) t[key] = value;
  return t;
}

SparseCore SparseCore::from_dense(const DenseTensor& t, double drop_below) {
  SparseCore g(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != 0.0 && std::abs(t[i]) >= drop_below) g.values_[i] = t[i];
  }
  return g;
}

DenseTensor kron_apply(const KronDictionary& d, const DenseTensor& g) {
  if (g.shape() != d.core_shape()) throw std::invalid_argument("core shape does not match the dictionary");
  return multilinear_product(g, d.atoms);
}

DenseTensor kron_apply(const KronDictionary& d, const SparseCore& g) {
  if (g.shape() != d.core_shape()) throw std::invalid_argument("core shape does not match the dictionary");
  const Shape out_shape = d.measurement_shape();
  const std::size_t out_size = index_map::element_count(out_shape);
  // sum of rank-1 terms when that is cheaper than the dense product
  if (g.nnz() * out_size <= index_map::element_count(g.shape())) {
    DenseTensor y(out_shape);
    for (const auto& e : g.entries()) y.vectorize() += e.value * kron_atom(d, e.index);
    return y;
  }
  return kron_apply(d, g.to_dense());
}

DenseTensor kron_adjoint_apply(const KronDictionary& d, const DenseTensor& y) {
  check_measurements(d, y);
  return multilinear_product_transposed(y, d.atoms);
}

double mutual_coherence(const Matrix& m) {
  Matrix normalized = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (n == 0.0) throw std::invalid_argument("mutual_coherence: zero column");
    normalized.col(j) /= n;
  }
  const Matrix gram = normalized.transpose() * normalized;
  double mu = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) mu = std::max(mu, std::abs(gram(i, j)));
  }
  return std::min(mu, 1.0);
}

OmpResult kronecker_omp(const DenseTensor& y, const KronDictionary& d, std::size_t sparsity) {
  check_measurements(d, y);
  const std::size_t measurements = y.size();
  if (sparsity > measurements) {
    throw std::invalid_argument("sparsity " + std::to_string(sparsity) + " exceeds the " +
                                std::to_string(measurements) + " measurements");
  }
  const auto norms = atom_column_norms(d);
  const Shape core_shape = d.core_shape();

  OmpResult out;
  out.core = SparseCore(core_shape);
  const Vector target = y.vectorize();
  Vector residual = target;
  out.residual_norms.push_back(residual.norm());

  Matrix q(static_cast<Eigen::Index>(measurements), 0);        // orthonormal basis of active atoms
  std::vector<std::size_t> selected;  // linear indices
  std::vector<bool> taken(index_map::element_count(core_shape), false);

  for (std::size_t it = 0; it < sparsity; ++it) {
    DenseTensor res_t(y.shape(), std::vector<double>(residual.data(), residual.data() + residual.size()));
    const DenseTensor corr = normalized_correlation(d, res_t, norms);
    std::size_t best = corr.size();
    double best_score = -1.0;
    for (std::size_t i = 0; i < corr.size(); ++i) {
      if (taken[i]) continue;
      const double s = std::abs(corr[i]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    taken[best] = true;
    selected.push_back(best);
    const Index idx = index_map::multi(core_shape, best);
    out.support.push_back(idx);

    // two passes of Gram-Schmidt keep the active basis orthonormal
    const Vector atom = kron_atom(d, idx);
    Vector v = atom;
    for (int pass = 0; pass < 2; ++pass) v -= q * (q.transpose() * v);
    const double vn = v.norm();
    if (vn > 1e-12 * atom.norm()) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v / vn;
    }
    residual = target - q * (q.transpose() * target);
    out.residual_norms.push_back(residual.norm());
    out.iterations = it + 1;
  }

  if (!selected.empty()) {
    // coefficients from the atoms themselves, least squares on the active set
    Matrix active(static_cast<Eigen::Index>(measurements), static_cast<Eigen::Index>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j) {
      active.col(static_cast<Eigen::Index>(j)) = kron_atom(d, out.support[j]);
    }
    const Vector x = solve_least_squares(active, target);
    for (std::size_t j = 0; j < selected.size(); ++j) {
      out.core.set(out.support[j], x(static_cast<Eigen::Index>(j)));
    }
  }
  return out;
}

NbompResult n_bomp(const DenseTensor& y, const KronDictionary& d, std::size_t block_budget,
                   const NbompOptions& opts) {
  if (block_budget == 0) throw std::invalid_argument("n_bomp: block budget must be positive");
  check_measurements(d, y);
  const std::size_t order = d.order();
  const Shape core_shape = d.core_shape();
  std::vector<std::size_t> caps(order);
  std::size_t block_size = 1;
  for (std::size_t n = 0; n < order; ++n) {
    caps[n] = std::min(block_budget, core_shape[n]);
    block_size *= caps[n];
  }
  if (block_size > y.size()) {
    throw std::invalid_argument("n_bomp: block of " + std::to_string(block_size) +
                                " coefficients exceeds the " + std::to_string(y.size()) + " measurements");
  }
  const auto norms = atom_column_norms(d);
  const std::size_t max_iters = opts.max_iters == 0 ? order * block_budget : opts.max_iters;

  NbompResult out;
  out.core = SparseCore(core_shape);
  out.mode_supports.assign(order, {});
  DenseTensor residual = y;
  const double y_norm = frobenius_norm(y);
  out.residual_norms.push_back(y_norm);
  if (y_norm == 0.0) {
    out.tolerance_met = true;
    return out;
  }

  std::optional<DenseTensor> block_core;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const DenseTensor corr = normalized_correlation(d, residual, norms);
    DenseTensor energy = corr;
    for (auto& v : energy.data()) v *= v;

    double best_score = -1.0;
    std::size_t best_mode = 0;
    std::size_t best_index = 0;
    for (std::size_t n = 0; n < order; ++n) {
      auto& set = out.mode_supports[n];
      if (set.size() >= caps[n]) continue;
      DenseTensor restricted = energy;
      for (std::size_t k = 0; k < order; ++k) {
        if (k == n || out.mode_supports[k].empty()) continue;
        restricted = mode_n_product(restricted, selection_matrix(out.mode_supports[k], core_shape[k]), k);
      }
      const Vector slice_energy = unfold(restricted, n).rowwise().sum();
      for (Eigen::Index i = 0; i < slice_energy.size(); ++i) {
        if (std::find(set.begin(), set.end(), static_cast<std::size_t>(i)) != set.end()) continue;
        const double s = std::sqrt(slice_energy(i));
        if (s > best_score) {
          best_score = s;
          best_mode = n;
          best_index = static_cast<std::size_t>(i);
        }
      }
    }
    if (best_score <= 0.0) break;

    auto& set = out.mode_supports[best_mode];
    set.insert(std::upper_bound(set.begin(), set.end(), best_index), best_index);
    out.iterations = it + 1;

    const bool all_nonempty = std::all_of(out.mode_supports.begin(), out.mode_supports.end(),
                                          [](const auto& s) { return !s.empty(); });
    if (all_nonempty) {
      std::vector<Matrix> restricted_atoms;
      std::vector<Matrix> inverses;
      for (std::size_t n = 0; n < order; ++n) {
        restricted_atoms.push_back(select_columns(d.atoms[n], out.mode_supports[n]));
        inverses.push_back(pinv(restricted_atoms.back()));
      }
      block_core = multilinear_product(y, inverses);
      residual = y - multilinear_product(*block_core, restricted_atoms);
    }
    const double res_norm = frobenius_norm(residual);
    out.residual_norms.push_back(res_norm);
    if (res_norm <= opts.residual_tol * y_norm) {
      out.tolerance_met = true;
      break;
    }
    bool full = true;
    for (std::size_t n = 0; n < order; ++n) full = full && out.mode_supports[n].size() >= caps[n];
    if (full) break;
  }

  if (block_core) {
    for (std::size_t lin = 0; lin < block_core->size(); ++lin) {
      const Index local = index_map::multi(block_core->shape(), lin);
      Index global(order);
      for (std::size_t n = 0; n < order; ++n) global[n] = out.mode_supports[n][local[n]];
      out.core.set(global, (*block_core)[lin]);
    }
  }
  return out;
}

}  // namespace multiway
