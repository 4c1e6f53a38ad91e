#include "multiway/serialize.hpp"

#include "multiway/io.hpp"

#include "json.hpp"

#include <stdexcept>

namespace multiway {

namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json tensor_json(const DenseTensor& t) {
  return {{"shape", t.shape()}, {"data", std::vector<double>(t.data().begin(), t.data().end())}};
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw io::FormatError(std::string("model JSON: ") + e.what());
  }
}

void expect_kind(const json& j, const char* kind) {
  if (!j.is_object() || !j.contains("kind") || j["kind"] != kind) {
    throw io::FormatError(std::string("model JSON: expected kind '") + kind + "'");
  }
}

// Wraps json type errors and dimension checks from the model validators.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw io::FormatError(std::string("model JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw io::FormatError(std::string("model JSON: ") + e.what());
  }
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw io::FormatError("model JSON: matrix data length does not match rows x cols");
  }
  return Eigen::Map<const Matrix>(data.data(), rows, cols);
}

Vector vector_from(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
}

DenseTensor tensor_from(const json& j) {
  return DenseTensor(j.at("shape").get<Shape>(), j.at("data").get<std::vector<double>>());
}

}  // namespace

std::string to_json(const CPModel& model) {
  validate(model);
  json factors = json::array();
  for (const auto& f : model.factors) factors.push_back(matrix_json(f));
  return json{{"kind", "cpd"}, {"shape", model.shape()}, {"rank", model.rank()},
              {"weights", vector_json(model.weights)}, {"factors", factors}}
      .dump();
}

std::string to_json(const TuckerModel& model) {
  validate(model);
  json factors = json::array();
  for (const auto& f : model.factors) factors.push_back(matrix_json(f));
  return json{{"kind", "tucker"}, {"shape", model.shape()}, {"ranks", model.ranks()},
              {"core", tensor_json(model.core)}, {"factors", factors}, {"orthonormal", model.orthonormal}}
      .dump();
}

std::string to_json(const std::vector<Ll1Term>& terms) {
  if (terms.empty()) throw std::invalid_argument("to_json: no BTD terms");
  json arr = json::array();
  for (const auto& t : terms) {
    arr.push_back({{"a", matrix_json(t.a)}, {"b", matrix_json(t.b)}, {"c", vector_json(t.c)}});
  }
  const Shape shape = btd_reconstruct(std::vector<Ll1Term>{terms.front()}).shape();
  return json{{"kind", "btd_ll1"}, {"shape", shape}, {"terms", arr}}.dump();
}

std::string to_json(const TTModel& model) {
  validate(model);
  json carriages = json::array();
  for (const auto& c : model.carriages) carriages.push_back(tensor_json(c));
  return json{{"kind", "tt"}, {"shape", model.shape()}, {"ranks", model.ranks()}, {"carriages", carriages}}.dump();
}

std::string to_json(const SparseCore& core) {
  json entries = json::array();
  for (const auto& e : core.entries()) entries.push_back({{"index", e.index}, {"value", e.value}});
  return json{{"kind", "sparse_core"}, {"shape", core.shape()}, {"entries", entries}}.dump();
}

std::string model_kind(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw io::FormatError("model JSON: missing 'kind'");
  }
  return j["kind"].get<std::string>();
}

CPModel cp_model_from_json(std::string_view text) {
  const json j = parse(text);
  expect_kind(j, "cpd");
  return guarded([&] {
    CPModel m;
    m.weights = vector_from(j.at("weights"));
    for (const auto& f : j.at("factors")) m.factors.push_back(matrix_from(f));
    validate(m);
    return m;
  });
}

TuckerModel tucker_model_from_json(std::string_view text) {
  const json j = parse(text);
  expect_kind(j, "tucker");
  return guarded([&] {
    TuckerModel m;
    m.core = tensor_from(j.at("core"));
    for (const auto& f : j.at("factors")) m.factors.push_back(matrix_from(f));
    m.orthonormal = j.contains("orthonormal") ? j["orthonormal"].get<std::vector<bool>>()
                                              : std::vector<bool>(m.factors.size(), false);
    validate(m);
    return m;
  });
}

std::vector<Ll1Term> btd_terms_from_json(std::string_view text) {
  const json j = parse(text);
  expect_kind(j, "btd_ll1");
  return guarded([&] {
    std::vector<Ll1Term> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({matrix_from(t.at("a")), matrix_from(t.at("b")), vector_from(t.at("c"))});
    }
    if (terms.empty()) throw io::FormatError("model JSON: no BTD terms");
    btd_reconstruct(terms);
    return terms;
  });
}

TTModel tt_model_from_json(std::string_view text) {
  const json j = parse(text);
  expect_kind(j, "tt");
  return guarded([&] {
    TTModel m;
    for (const auto& c : j.at("carriages")) m.carriages.push_back(tensor_from(c));
    validate(m);
    return m;
  });
}

SparseCore sparse_core_from_json(std::string_view text) {
  const json j = parse(text);
  expect_kind(j, "sparse_core");
  return guarded([&] {
    SparseCore core(j.at("shape").get<Shape>());
    for (const auto& e : j.at("entries")) {
      const auto idx = e.at("index").get<Index>();
      if (idx.size() != core.shape().size()) throw io::FormatError("model JSON: entry index has wrong order");
      core.set(idx, e.at("value").get<double>());
    }
    return core;
  });
}

}  // namespace multiway
