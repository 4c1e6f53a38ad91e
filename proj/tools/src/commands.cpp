#include "commands.hpp"

#include "multiway/btd.hpp"
#include "multiway/cpd.hpp"
#include "multiway/experiments.hpp"
#include "multiway/io.hpp"
#include "multiway/kron_cs.hpp"
#include "multiway/linalg.hpp"
#include "multiway/metrics.hpp"
#include "multiway/serialize.hpp"
#include "multiway/tensorize.hpp"
#include "multiway/tt.hpp"
#include "multiway/tucker.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace multiway::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_out_dir(const GlobalOptions& g) {
  fs::create_directories(g.out_dir);
  return g.out_dir;
}

std::string fixed(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json shape_json(const Shape& s) { return json(s); }

void report_fit(RunManifest& m, const DenseTensor& t, const DenseTensor& approx) {
  const MetricsReport r = compare(t, approx);
  const double norm = frobenius_norm(t);
  m.metric("relative_fit", number(r.relative_fit));
  m.metric("residual_norm", number(r.residual_norm));
  m.metric("relative_error", number(norm > 0.0 ? r.residual_norm / norm : r.residual_norm));
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw io::FormatError("dictionary: matrix data length does not match rows x cols");
  }
  return Eigen::Map<const Matrix>(data.data(), rows, cols);
}

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

KronDictionary read_dictionary(const fs::path& path) {
  const auto bytes = io::read_file(path);
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
    std::vector<Matrix> sensing, bases;
    for (const auto& s : j.at("sensing")) sensing.push_back(matrix_from_json(s));
    if (j.contains("bases")) {
      for (const auto& b : j.at("bases")) bases.push_back(matrix_from_json(b));
      return make_kron_dictionary(std::move(sensing), std::move(bases));
    }
    return make_kron_dictionary(std::move(sensing));
  } catch (const json::exception& e) {
    throw io::FormatError(std::string("dictionary: ") + e.what());
  }
}

std::string dictionary_json(const KronDictionary& d) {
  json sensing = json::array(), bases = json::array();
  for (const auto& s : d.sensing) sensing.push_back(matrix_to_json(s));
  for (const auto& b : d.bases) bases.push_back(matrix_to_json(b));
  return json{{"sensing", sensing}, {"bases", bases}}.dump();
}

double parse_snr(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return experiments::kNoiseless;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad SNR value '" + s + "'");
  return v;
}

}  // namespace

int cmd_decompose(const GlobalOptions& g, const DecomposeOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("decompose", g.seed);
  m.parameter("method", o.method);
  m.input(o.input);
  const DenseTensor t = io::read_mwt1(o.input);
  const fs::path dir = prepare_out_dir(g);
  const fs::path model_path = dir / "model.json";

  std::string model_json;
  DenseTensor approx;
  if (o.method == "cpd") {
    CpAlsOptions opts;
    opts.max_iters = o.max_iters;
    opts.seed = g.seed;
    const CpAlsResult r = cpd_als(t, o.rank, opts);
    m.parameter("rank", o.rank);
    m.metric("iterations", r.trace.iterations);
    m.metric("converged", r.trace.converged);
    m.metric("degenerate", r.trace.degenerate);
    model_json = to_json(r.model);
    approx = cpd_reconstruct(r.model);
  } else if (o.method == "tucker" || o.method == "hooi") {
    if (o.ranks.size() != t.order()) throw std::invalid_argument("--ranks needs one value per mode");
    const Shape ranks(o.ranks.begin(), o.ranks.end());
    m.parameter("ranks", shape_json(ranks));
    TuckerModel model;
    if (o.method == "tucker") {
      model = truncated_mlsvd(t, ranks);
    } else {
      HooiOptions opts;
      opts.max_iters = o.max_iters;
      const TuckerFit r = hooi(t, ranks, opts);
      m.metric("iterations", r.iterations);
      m.metric("converged", r.converged);
      model = r.model;
    }
    model_json = to_json(model);
    approx = tucker_reconstruct(model);
  } else if (o.method == "btd") {
    BtdOptions opts;
    opts.max_iters = o.max_iters;
    opts.seed = g.seed;
    const BtdResult r = btd_ll1_als(t, o.terms, o.block, opts);
    m.parameter("terms", o.terms);
    m.parameter("block", o.block);
    m.metric("iterations", r.trace.iterations);
    m.metric("converged", r.trace.converged);
    model_json = to_json(r.terms);
    approx = btd_reconstruct(r.terms);
  } else if (o.method == "tt") {
    const TTModel model = tt_svd(t, o.tol);
    m.parameter("tol", o.tol);
    m.metric("tt_ranks", shape_json(model.ranks()));
    m.metric("parameter_count", model.parameter_count());
    model_json = to_json(model);
    approx = tt_reconstruct(model);
  } else {
    throw std::invalid_argument("unknown method '" + o.method + "'");
  }

  io::write_file_atomic(model_path, model_json);
  m.output(model_path);
  report_fit(m, t, approx);
  const double fit = relative_fit(t, approx);
  m.parameter("min_fit", o.min_fit);
  const int code = fit < o.min_fit ? kFitBelowThreshold : kOk;
  m.write(dir / "manifest.json", code);
  log.info("decompose finished", {{"method", o.method}, {"relative_fit", number(fit)}});
  if (code != kOk) log.error("fit below --min-fit");
  return code;
}

int cmd_tensorize(const GlobalOptions& g, const TensorizeOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("tensorize", g.seed);
  m.parameter("scheme", o.scheme);
  m.input(o.input);
  Matrix signals = io::read_csv_matrix(o.input);
  if (signals.cols() == 1) signals.transposeInPlace();
  const fs::path dir = prepare_out_dir(g);

  DenseTensor out;
  if (o.scheme == "hankel") {
    const auto length = static_cast<std::size_t>(signals.cols());
    const std::size_t rows = o.rows == 0 ? (length + 1) / 2 : o.rows;
    if (rows == 0 || rows > length) throw std::invalid_argument("--rows must lie in [1, signal length]");
    const std::size_t cols = length - rows + 1;
    m.parameter("rows", rows);
    m.parameter("cols", cols);
    if (signals.rows() == 1) {
      const Matrix h = hankelize(signals.row(0).transpose(), rows, cols);
      out = DenseTensor::from_matrix(h);
      m.metric("matrix_rank", numerical_rank(h));
    } else {
      out = hankel_tensorize(signals, rows, cols);
    }
    m.metric("multilinear_rank", shape_json(multilinear_rank(out)));
  } else if (o.scheme == "quantize") {
    if (signals.rows() != 1) throw std::invalid_argument("quantize expects a single vector");
    const Vector v = signals.row(0).transpose();
    out = quantize(v, o.base);
    m.parameter("base", o.base);
    m.metric("order", out.order());
    const Vector back = out.vectorize();
    m.metric("roundtrip_max_abs_diff", (back - v).cwiseAbs().maxCoeff());
  } else {
    throw std::invalid_argument("unknown scheme '" + o.scheme + "'");
  }
  m.metric("shape", shape_json(out.shape()));
  const fs::path path = dir / o.output;
  io::write_mwt1(path, out);
  m.output(path);
  m.write(dir / "manifest.json", kOk);
  log.info("tensorize finished", {{"scheme", o.scheme}, {"shape", shape_json(out.shape())}});
  return kOk;
}

int cmd_cs_recover(const GlobalOptions& g, const CsRecoverOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("cs-recover", g.seed);
  m.parameter("algorithm", o.algorithm);
  const fs::path dir = prepare_out_dir(g);

  if (o.synthetic == "cube") {
    experiments::CsConfig cfg;
    if (!o.shape.empty()) cfg.shape = Shape(o.shape.begin(), o.shape.end());
    cfg.sampling_ratio = o.sampling_ratio;
    cfg.block = o.block.value_or(6);
    cfg.komp_sparsity = o.sparsity.value_or(216);
    m.parameter("synthetic", "cube");
    m.parameter("shape", shape_json(cfg.shape));
    m.parameter("sampling_ratio", cfg.sampling_ratio);
    m.parameter("block", cfg.block);
    m.parameter("sparsity", cfg.komp_sparsity);
    const experiments::CsReport r = experiments::run_cs_pipeline(cfg, g.seed);
    m.metric("measurement_shape", shape_json(r.measurement_shape));
    m.metric("nbomp_iterations", r.nbomp_iterations);
    m.metric("komp_iterations", r.komp_iterations);
    m.metric("psnr_nbomp_db", number(r.psnr_nbomp));
    m.metric("psnr_komp_db", number(r.psnr_komp));
    m.metric("nbomp_relative_residual", number(r.nbomp_residual));
    m.metric("komp_relative_residual", number(r.komp_residual));
    m.write(dir / "manifest.json", kOk);
    log.info("cs-recover cube finished", {{"nbomp_iterations", r.nbomp_iterations},
                                          {"komp_iterations", r.komp_iterations},
                                          {"psnr_nbomp_db", number(r.psnr_nbomp)}});
    return kOk;
  }

  KronDictionary dict;
  DenseTensor y;
  std::optional<SparseCore> planted;
  if (o.synthetic == "planted") {
    Rng rng(g.seed);
    const Shape shape = o.shape.empty() ? Shape{8, 8, 8} : Shape(o.shape.begin(), o.shape.end());
    experiments::PlantedCs p = experiments::planted_block_sparse(shape, shape, o.block.value_or(2), true, rng);
    dict = std::move(p.dictionary);
    y = std::move(p.measurements);
    planted = std::move(p.core);
    m.parameter("synthetic", "planted");
    m.parameter("shape", shape_json(shape));
    const fs::path ypath = dir / "measurements.mwt1";
    const fs::path dpath = dir / "dictionary.json";
    io::write_mwt1(ypath, y);
    io::write_file_atomic(dpath, dictionary_json(dict));
    m.output(ypath);
    m.output(dpath);
  } else if (o.synthetic.empty()) {
    if (o.measurements.empty() || o.dictionary.empty()) {
      throw std::invalid_argument("--measurements and --dictionary are required without --synthetic");
    }
    y = io::read_mwt1(o.measurements);
    dict = read_dictionary(o.dictionary);
    m.input(o.measurements);
    m.input(o.dictionary);
    if (y.shape() != dict.measurement_shape()) throw std::invalid_argument("measurement shape does not match dictionary");
  } else {
    throw std::invalid_argument("unknown --synthetic mode '" + o.synthetic + "'");
  }

  const double y_norm = frobenius_norm(y);
  const auto relative = [&](double r) { return y_norm > 0.0 ? r / y_norm : r; };
  m.parameter("residual_tol", o.residual_tol);
  bool met = true;
  std::optional<SparseCore> result;

  if (o.algorithm == "komp" || o.algorithm == "both") {
    const std::size_t k = o.sparsity.value_or(8);
    m.parameter("sparsity", k);
    const OmpResult r = kronecker_omp(y, dict, k);
    const double rel = relative(r.residual_norms.back());
    m.metric("komp_iterations", r.iterations);
    m.metric("komp_relative_residual", number(rel));
    if (k > 0 && rel > o.residual_tol) met = false;
    result = r.core;
  }
  if (o.algorithm == "nbomp" || o.algorithm == "both") {
    const std::size_t l = o.block.value_or(2);
    m.parameter("block", l);
    NbompOptions opts;
    opts.residual_tol = o.residual_tol;
    const NbompResult r = n_bomp(y, dict, l, opts);
    m.metric("nbomp_iterations", r.iterations);
    m.metric("nbomp_relative_residual", number(relative(r.residual_norms.back())));
    if (!r.tolerance_met) met = false;
    result = r.core;
  }
  if (!result) throw std::invalid_argument("unknown algorithm '" + o.algorithm + "'");

  m.metric("nnz", result->nnz());
  if (planted) {
    m.metric("core_max_abs_error", number(max_abs_diff(planted->to_dense(), result->to_dense())));
  }
  const fs::path core_path = dir / "core.json";
  io::write_file_atomic(core_path, to_json(*result));
  m.output(core_path);
  const int code = met ? kOk : kResidualUnmet;
  m.write(dir / "manifest.json", code);
  log.info("cs-recover finished", m.document()["metrics"]);
  if (!met) log.error("residual tolerance not met");
  return code;
}

int cmd_bss_demo(const GlobalOptions& g, const BssDemoOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("bss-demo", g.seed);
  experiments::BssConfig cfg;
  cfg.samples = o.samples;
  cfg.channels = o.channels;
  cfg.hankel_rows = o.hankel_rows;
  cfg.time_step = o.time_step;
  if (o.noise_stage == "mixtures") {
    cfg.noise_stage = experiments::NoiseStage::Mixtures;
  } else if (o.noise_stage == "tensor") {
    cfg.noise_stage = experiments::NoiseStage::Tensor;
  } else {
    throw std::invalid_argument("--noise-stage must be mixtures or tensor");
  }
  std::vector<double> snrs;
  for (const auto& s : o.snrs) snrs.push_back(parse_snr(s));
  m.parameter("samples", o.samples);
  m.parameter("channels", o.channels);
  m.parameter("hankel_rows", o.hankel_rows);
  m.parameter("time_step", o.time_step);
  m.parameter("snr_db", o.snrs);
  m.parameter("trials", o.trials);
  m.parameter("noise_stage", o.noise_stage);

  const auto rows = experiments::run_bss_sweep(cfg, snrs, o.trials, g.seed);
  std::ostringstream csv;
  csv << "snr_db,pca,ica_cumulant,cpd,btd,tucker_angle_rad\n";
  for (const auto& r : rows) {
    csv << fixed(r.snr_db) << ',' << fixed(r.pca) << ',' << fixed(r.ica) << ',' << fixed(r.cpd) << ','
        << fixed(r.btd) << ',' << fixed(r.tucker_angle) << '\n';
  }
  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "bss_sae.csv";
  io::write_file_atomic(csv_path, csv.str());
  m.output(csv_path);
  m.metric("source_correlation", experiments::source_correlation(cfg));
  json per_snr = json::array();
  for (const auto& r : rows) {
    per_snr.push_back({{"snr_db", number(r.snr_db)}, {"pca", number(r.pca)}, {"ica_cumulant", number(r.ica)},
                       {"cpd", number(r.cpd)}, {"btd", number(r.btd)}, {"tucker_angle_rad", number(r.tucker_angle)}});
  }
  m.metric("median_sae_db", per_snr);
  m.write(dir / "manifest.json", kOk);
  log.info("bss-demo finished", {{"rows", rows.size()}});
  return kOk;
}

int cmd_regress_demo(const GlobalOptions& g, const RegressDemoOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("regress-demo", g.seed);
  experiments::RegressConfig cfg;
  cfg.noise = o.noise;
  cfg.train = o.train;
  cfg.test = o.test;
  m.parameter("seeds", o.seeds);
  m.parameter("components", o.components);
  m.parameter("block_rank", o.block_rank);
  m.parameter("noise", o.noise);
  m.parameter("train", o.train);
  m.parameter("test", o.test);

  std::ostringstream csv;
  csv << "seed,hopls,pls\n";
  double sum_h = 0.0, sum_p = 0.0;
  std::size_t wins = 0;
  for (std::size_t s = 0; s < o.seeds; ++s) {
    const std::uint64_t seed = g.seed + s;
    const auto r = experiments::run_regress_trial(cfg, o.components, o.block_rank, seed);
    csv << seed << ',' << fixed(r.hopls) << ',' << fixed(r.pls) << '\n';
    sum_h += r.hopls;
    sum_p += r.pls;
    wins += r.hopls > r.pls ? 1 : 0;
  }
  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "regress.csv";
  io::write_file_atomic(csv_path, csv.str());
  m.output(csv_path);
  const double n = o.seeds > 0 ? static_cast<double>(o.seeds) : 1.0;
  m.metric("mean_hopls_correlation", sum_h / n);
  m.metric("mean_pls_correlation", sum_p / n);
  m.metric("hopls_wins", wins);
  m.write(dir / "manifest.json", kOk);
  log.info("regress-demo finished", {{"mean_hopls", sum_h / n}, {"mean_pls", sum_p / n}});
  return kOk;
}

int cmd_lmwca_demo(const GlobalOptions& g, const LmwcaDemoOptions& o) {
  const Logger log(g.json_logs);
  RunManifest m("lmwca-demo", g.seed);
  experiments::LinkedClassConfig cfg;
  cfg.common_fraction = o.common_fraction;
  cfg.noise = o.noise;
  m.parameter("trials", o.trials);
  m.parameter("common_fraction", o.common_fraction);
  m.parameter("noise", o.noise);

  std::ostringstream csv;
  csv << "trial,correct,total\n";
  std::size_t correct = 0, total = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto r = experiments::run_linked_class_trial(cfg, g.seed + t);
    csv << t << ',' << r.correct << ',' << r.total << '\n';
    correct += r.correct;
    total += r.total;
  }
  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "lmwca.csv";
  io::write_file_atomic(csv_path, csv.str());
  m.output(csv_path);
  const double accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  m.metric("accuracy", accuracy);
  m.metric("correct", correct);
  m.metric("total", total);
  m.write(dir / "manifest.json", kOk);
  log.info("lmwca-demo finished", {{"accuracy", accuracy}});
  return kOk;
}

}  // namespace multiway::cli
