#include "multiway/experiments.hpp"

#include "multiway/btd.hpp"
#include "multiway/cpd.hpp"
#include "multiway/ica.hpp"
#include "multiway/linalg.hpp"
#include "multiway/lmwca.hpp"
#include "multiway/metrics.hpp"
#include "multiway/products.hpp"
#include "multiway/regress.hpp"
#include "multiway/tensorize.hpp"
#include "multiway/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace multiway::experiments {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

Matrix add_noise(const Matrix& m, double sigma, Rng& rng) {
  if (sigma == 0.0) return m;
  return m + sigma * random_gaussian(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), rng);
}

DenseTensor add_noise(const DenseTensor& t, double sigma, Rng& rng) {
  if (sigma == 0.0) return t;
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> data(t.data().begin(), t.data().end());
  for (auto& v : data) v += g(rng);
  return DenseTensor(t.shape(), std::move(data));
}

Matrix stack_columns(const std::vector<Ll1Term>& terms) {
  Matrix c(terms.front().c.size(), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t r = 0; r < terms.size(); ++r) c.col(static_cast<Eigen::Index>(r)) = terms[r].c;
  return c;
}

Shape with_samples(std::size_t samples, const Shape& features) {
  Shape s{samples};
  s.insert(s.end(), features.begin(), features.end());
  return s;
}

}  // namespace

// ---- blind source separation ----

Matrix bss_sources(std::size_t samples, double time_step) {
  Matrix s(2, static_cast<Eigen::Index>(samples));
  const double pi = std::numbers::pi;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * time_step;
    const auto i = static_cast<Eigen::Index>(k);
    s(0, i) = std::sin(6.0 * pi * t);
    s(1, i) = std::exp(10.0 * t) * std::sin(20.0 * pi * t);
  }
  return s;
}

double source_correlation(const BssConfig& cfg) {
  const Matrix s = bss_sources(cfg.samples, cfg.time_step);
  return std::abs(s.row(0).dot(s.row(1))) / (s.row(0).norm() * s.row(1).norm());
}

Matrix two_column_mixing(std::size_t channels, double inner, Rng& rng) {
  if (channels < 2 || std::abs(inner) >= 1.0) throw std::invalid_argument("two_column_mixing: need 2+ channels, |inner| < 1");
  const Matrix q = random_orthonormal(channels, 2, rng);
  Matrix a(channels, 2);
  a.col(0) = q.col(0);
  a.col(1) = inner * q.col(0) + std::sqrt(1.0 - inner * inner) * q.col(1);
  return a;
}

BssTrial run_bss_trial(const BssConfig& cfg, double snr_db, std::uint64_t seed) {
  if (cfg.hankel_rows == 0 || cfg.hankel_rows >= cfg.samples) {
    throw std::invalid_argument("run_bss_trial: Hankel rows must lie in [1, samples)");
  }
  Rng rng(seed);
  const Matrix a = two_column_mixing(cfg.channels, cfg.mixing_inner, rng);
  Matrix s = bss_sources(cfg.samples, cfg.time_step);
  if (cfg.equal_power_sources) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) s.row(r) *= std::sqrt(static_cast<double>(s.cols())) / s.row(r).norm();
  }
  const Matrix clean = a * s;
  const double power = clean.squaredNorm() / static_cast<double>(clean.size());
  const double sigma = std::isinf(snr_db) ? 0.0 : std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  const std::size_t rows = cfg.hankel_rows;
  const std::size_t cols = cfg.samples - rows + 1;

  Matrix observed = clean;
  DenseTensor tensor;
  if (cfg.noise_stage == NoiseStage::Mixtures) {
    observed = add_noise(clean, sigma, rng);
    tensor = hankel_tensorize(observed, rows, cols);
  } else {
    tensor = add_noise(hankel_tensorize(clean, rows, cols), sigma, rng);
    observed = add_noise(clean, sigma, rng);
  }

  BssTrial out;
  out.sae_pca = compute_sae(a, pca_separation(observed, 2).mixing);
  out.sae_ica = compute_sae(a, ica_cumulant(observed, 2).mixing);

  CpAlsOptions cp_opts;
  cp_opts.seed = seed;
  out.sae_cpd = compute_sae(a, cpd_als(tensor, 2, cp_opts).model.factors[2]);

  BtdOptions btd_opts;
  btd_opts.seed = seed;
  btd_opts.max_iters = 500;
  btd_opts.tol = 1e-12;
  btd_opts.restarts = 2;
  const BtdResult btd = btd_ll1_als(tensor, 2, 2, btd_opts);
  const Matrix c = stack_columns(btd.terms);
  out.sae_btd = compute_sae(a, c);
  const Matrix recovered = pinv(c) * observed;
  out.btd_source_correlation = matched_abs_correlations(s.transpose(), recovered.transpose());

  const std::size_t tucker_rank = std::min<std::size_t>(4, std::min(rows, cols));
  const TuckerFit tk = hooi(tensor, {tucker_rank, tucker_rank, 2});
  out.tucker_angle = principal_angles(a, tk.model.factors[2]).maxCoeff();
  return out;
}

std::vector<BssRow> run_bss_sweep(const BssConfig& cfg, const std::vector<double>& snrs_db, std::size_t trials,
                                  std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("run_bss_sweep: trials must be positive");
  std::vector<BssRow> rows;
  for (std::size_t i = 0; i < snrs_db.size(); ++i) {
    std::vector<double> pca, ica, cpd, btd, angle;
    for (std::size_t t = 0; t < trials; ++t) {
      const BssTrial r = run_bss_trial(cfg, snrs_db[i], seed + 1000 * i + t);
      pca.push_back(r.sae_pca);
      ica.push_back(r.sae_ica);
      cpd.push_back(r.sae_cpd);
      btd.push_back(r.sae_btd);
      angle.push_back(r.tucker_angle);
    }
    rows.push_back({snrs_db[i], median(pca), median(ica), median(cpd), median(btd), median(angle)});
  }
  return rows;
}

// ---- Kronecker compressed sensing ----

PlantedCs planted_block_sparse(const Shape& core_shape, const Shape& measurement_shape, std::size_t block,
                               bool orthonormal, Rng& rng) {
  if (core_shape.size() != measurement_shape.size()) {
    throw std::invalid_argument("planted_block_sparse: shape orders differ");
  }
  std::vector<Matrix> sensing;
  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t n = 0; n < core_shape.size(); ++n) {
    if (block == 0 || block > core_shape[n]) throw std::invalid_argument("planted_block_sparse: block out of range");
    if (orthonormal) {
      if (measurement_shape[n] != core_shape[n]) {
        throw std::invalid_argument("planted_block_sparse: orthonormal dictionaries must be square");
      }
      sensing.push_back(random_orthonormal(core_shape[n], core_shape[n], rng));
    } else {
      sensing.push_back(gaussian_sensing(measurement_shape[n], core_shape[n], rng));
    }
    std::vector<std::size_t> idx(core_shape[n]);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(block);
    std::sort(idx.begin(), idx.end());
    supports.push_back(std::move(idx));
  }
  SparseCore core(core_shape);
  std::normal_distribution<double> g(0.0, 1.0);
  const Shape block_shape(core_shape.size(), block);
  const std::size_t count = index_map::element_count(block_shape);
  for (std::size_t lin = 0; lin < count; ++lin) {
    const Index local = index_map::multi(block_shape, lin);
    Index global(local.size());
    for (std::size_t n = 0; n < local.size(); ++n) global[n] = supports[n][local[n]];
    const double v = g(rng);
    core.set(global, std::copysign(0.5 + std::abs(v), v));
  }
  KronDictionary dict = make_kron_dictionary(std::move(sensing));
  DenseTensor y = kron_apply(dict, core);
  return {std::move(dict), std::move(core), std::move(y)};
}

DenseTensor piecewise_smooth_cube(const Shape& shape, Rng& rng) {
  if (shape.empty()) throw std::invalid_argument("piecewise_smooth_cube: empty shape");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseTensor cube(shape);
  auto data = cube.data();
  const std::size_t n = shape.size();
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Vector> profiles;
    for (std::size_t m = 0; m < n; ++m) {
      const double centre = u(rng);
      const double width = 0.2 + 0.4 * u(rng);
      Vector p(static_cast<Eigen::Index>(shape[m]));
      for (std::size_t i = 0; i < shape[m]; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(shape[m]);
        p(static_cast<Eigen::Index>(i)) = std::exp(-0.5 * std::pow((x - centre) / width, 2));
      }
      profiles.push_back(p);
    }
    const DenseTensor part = outer(profiles);
    const double amp = 0.3 + 0.4 * u(rng);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += amp * part[i];
  }
  // constant box
  Index lo(n), hi(n);
  for (std::size_t m = 0; m < n; ++m) {
    lo[m] = static_cast<std::size_t>(0.2 * static_cast<double>(shape[m]));
    hi[m] = std::max(lo[m] + 1, static_cast<std::size_t>(0.6 * static_cast<double>(shape[m])));
  }
  for (std::size_t lin = 0; lin < data.size(); ++lin) {
    const Index idx = index_map::multi(shape, lin);
    bool inside = true;
    for (std::size_t m = 0; m < n; ++m) inside = inside && idx[m] >= lo[m] && idx[m] < hi[m];
    if (inside) data[lin] += 0.3;
  }
  const double peak = *std::max_element(data.begin(), data.end());
  for (auto& v : data) v /= peak;
  return cube;
}

Shape measurement_shape(const Shape& shape, double sampling_ratio) {
  if (!(sampling_ratio > 0.0 && sampling_ratio <= 1.0)) {
    throw std::invalid_argument("measurement_shape: sampling ratio must lie in (0, 1]");
  }
  const double per_mode = std::pow(sampling_ratio, 1.0 / static_cast<double>(shape.size()));
  Shape m;
  for (std::size_t extent : shape) {
    const auto rows = static_cast<std::size_t>(std::ceil(static_cast<double>(extent) * per_mode - 1e-12));
    m.push_back(std::clamp<std::size_t>(rows, 1, extent));
  }
  return m;
}

CsReport run_cs_pipeline(const CsConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const DenseTensor cube = piecewise_smooth_cube(cfg.shape, rng);
  CsReport out;
  out.measurement_shape = measurement_shape(cfg.shape, cfg.sampling_ratio);
  std::vector<Matrix> sensing, bases;
  for (std::size_t n = 0; n < cfg.shape.size(); ++n) {
    sensing.push_back(gaussian_sensing(out.measurement_shape[n], cfg.shape[n], rng));
    bases.push_back(dct_basis(cfg.shape[n]));
  }
  const KronDictionary dict = make_kron_dictionary(sensing, bases);
  DenseTensor y = cube;
  for (std::size_t n = 0; n < cfg.shape.size(); ++n) y = mode_n_product(y, sensing[n], n);
  const double y_norm = frobenius_norm(y);

  const auto synthesize = [&](const SparseCore& core) {
    return multilinear_product(core.to_dense(), bases);
  };

  const NbompResult nb = n_bomp(y, dict, cfg.block);
  out.nbomp_iterations = nb.iterations;
  out.nbomp_residual = nb.residual_norms.back() / y_norm;
  out.psnr_nbomp = compute_psnr(cube, synthesize(nb.core));

  const OmpResult ko = kronecker_omp(y, dict, cfg.komp_sparsity);
  out.komp_iterations = ko.iterations;
  out.komp_residual = ko.residual_norms.back() / y_norm;
  out.psnr_komp = compute_psnr(cube, synthesize(ko.core));
  return out;
}

// ---- multiway regression ----

RegressData planted_regression(const RegressConfig& cfg, std::uint64_t seed) {
  if (cfg.planted_blocks == 0 || cfg.planted_rank == 0) throw std::invalid_argument("planted_regression: empty model");
  Rng rng(seed);
  struct Block {
    DenseTensor gx, gy;
    std::vector<Matrix> p, q;
  };
  std::vector<Block> blocks;
  for (std::size_t r = 0; r < cfg.planted_blocks; ++r) {
    Block b;
    for (std::size_t e : cfg.x_features) b.p.push_back(random_orthonormal(e, std::min(cfg.planted_rank, e), rng));
    for (std::size_t e : cfg.y_features) b.q.push_back(random_orthonormal(e, std::min(cfg.planted_rank, e), rng));
    Shape gxs{1}, gys{1};
    for (const auto& p : b.p) gxs.push_back(static_cast<std::size_t>(p.cols()));
    for (const auto& q : b.q) gys.push_back(static_cast<std::size_t>(q.cols()));
    const Vector gx = random_gaussian_vector(index_map::element_count(gxs), rng);
    const Vector gy = random_gaussian_vector(index_map::element_count(gys), rng);
    b.gx = DenseTensor(gxs, std::vector<double>(gx.data(), gx.data() + gx.size()));
    b.gy = DenseTensor(gys, std::vector<double>(gy.data(), gy.data() + gy.size()));
    blocks.push_back(std::move(b));
  }
  const auto generate = [&](std::size_t samples, DenseTensor& x, DenseTensor& y) {
    x = DenseTensor(with_samples(samples, cfg.x_features));
    y = DenseTensor(with_samples(samples, cfg.y_features));
    double weight = 1.0;
    for (const auto& b : blocks) {
      const Matrix t = weight * random_gaussian(samples, 1, rng);
      weight *= cfg.block_decay;
      DenseTensor xb = mode_n_product(b.gx, t, 0);
      for (std::size_t n = 0; n < b.p.size(); ++n) xb = mode_n_product(xb, b.p[n], n + 1);
      DenseTensor yb = mode_n_product(b.gy, t, 0);
      for (std::size_t n = 0; n < b.q.size(); ++n) yb = mode_n_product(yb, b.q[n], n + 1);
      x = x + xb;
      y = y + yb;
    }
  };
  RegressData d;
  generate(cfg.train, d.x_train, d.y_train);
  generate(cfg.test, d.x_test, d.y_test);
  // common scale from the training block, so train and test share the model
  const double xs = cfg.signal_scale * std::sqrt(static_cast<double>(d.x_train.size())) / frobenius_norm(d.x_train);
  const double ys = cfg.signal_scale * std::sqrt(static_cast<double>(d.y_train.size())) / frobenius_norm(d.y_train);
  d.x_train = add_noise(xs * d.x_train, cfg.noise, rng);
  d.y_train = add_noise(ys * d.y_train, cfg.noise, rng);
  d.x_test = add_noise(xs * d.x_test, cfg.noise, rng);
  d.y_test = add_noise(ys * d.y_test, cfg.noise, rng);
  return d;
}

double prediction_correlation(const DenseTensor& truth, const DenseTensor& prediction, const DenseTensor& train_mean) {
  if (truth.shape() != prediction.shape()) throw std::invalid_argument("prediction_correlation: shape mismatch");
  Matrix t = unfold(truth, 0);
  Matrix p = unfold(prediction, 0);
  const Matrix mean = unfold(train_mean, 0);
  t.rowwise() -= mean.row(0);
  p.rowwise() -= mean.row(0);
  const double denom = t.norm() * p.norm();
  if (denom == 0.0) return 0.0;
  return t.cwiseProduct(p).sum() / denom;
}

RegressTrial run_regress_trial(const RegressConfig& cfg, std::size_t components, std::size_t block_rank,
                               std::uint64_t seed) {
  const RegressData d = planted_regression(cfg, seed);
  const HOPLSModel hm = hopls_fit(d.x_train, d.y_train, components, block_rank);
  RegressTrial out;
  out.hopls = prediction_correlation(d.y_test, hopls_predict(hm, d.x_test), hm.y_mean);

  const PLSModel pm = pls_fit(unfold(d.x_train, 0), unfold(d.y_train, 0), components);
  const Matrix yhat = pls_predict(pm, unfold(d.x_test, 0));
  out.pls = prediction_correlation(d.y_test, fold(yhat, 0, d.y_test.shape()), hm.y_mean);
  return out;
}

// ---- linked classification ----

LinkedClassTrial run_linked_class_trial(const LinkedClassConfig& cfg, std::uint64_t seed) {
  if (cfg.classes < 2 || cfg.samples == 0) throw std::invalid_argument("run_linked_class_trial: bad configuration");
  Rng rng(seed);
  const std::size_t features = index_map::element_count(cfg.feature_shape);
  const auto shared = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(cfg.common_fraction * static_cast<double>(cfg.samples))), 1, cfg.samples);
  const std::size_t own = cfg.samples - shared;
  if (cfg.samples > features) throw std::invalid_argument("run_linked_class_trial: more samples than features");

  const auto draw = [&](const Matrix& common, std::size_t count) {
    const Matrix indiv = own > 0 ? random_orthonormal(features, own, rng) : Matrix(features, 0);
    Matrix x = common * random_gaussian(shared, count, rng);
    if (own > 0) x += indiv * random_gaussian(own, count, rng);
    return add_noise(x, cfg.noise, rng);
  };

  std::vector<Matrix> commons;
  std::vector<ClassGroup> groups;
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    commons.push_back(random_orthonormal(features, shared, rng));
    ClassGroup g;
    for (int k = 0; k < 2; ++k) {
      const Matrix x = draw(commons.back(), cfg.samples);
      Shape s = cfg.feature_shape;
      s.push_back(cfg.samples);
      g.tensors.emplace_back(s, std::vector<double>(x.data(), x.data() + x.size()));
    }
    groups.push_back(std::move(g));
  }
  std::vector<Matrix> learned;
  for (const auto& g : groups) learned.push_back(class_common_subspace(g, cfg.common_fraction));

  LinkedClassTrial out;
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    const Matrix tests = draw(commons[c], cfg.tests_per_class);
    for (Eigen::Index j = 0; j < tests.cols(); ++j) {
      const Vector x = tests.col(j);
      const DenseTensor sample(cfg.feature_shape, std::vector<double>(x.data(), x.data() + x.size()));
      out.correct += classify_with_subspaces(learned, sample).label == c ? 1 : 0;
      ++out.total;
    }
  }
  return out;
}

}  // namespace multiway::experiments
