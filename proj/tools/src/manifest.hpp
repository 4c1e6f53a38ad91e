#pragma once

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace multiway::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kFitBelowThreshold = 2,
  kResidualUnmet = 3,
};

/// Record of one command invocation, written as manifest.json.
class RunManifest {
 public:
  RunManifest(std::string command, std::uint64_t seed);

  void parameter(const std::string& key, nlohmann::json value) { doc_["parameters"][key] = std::move(value); }
  void metric(const std::string& key, nlohmann::json value) { doc_["metrics"][key] = std::move(value); }
  void input(const std::filesystem::path& p) { doc_["inputs"].push_back(p.string()); }
  void output(const std::filesystem::path& p) { doc_["outputs"].push_back(p.string()); }

  /// Stamps the elapsed time and exit code, then writes atomically.
  void write(const std::filesystem::path& path, int exit_code);

  const nlohmann::json& document() const noexcept { return doc_; }

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

/// JSON-safe number: non-finite values become the strings "inf", "-inf", "nan".
nlohmann::json number(double v);

class Logger {
 public:
  explicit Logger(bool json) : json_(json) {}
  void info(std::string_view msg, const nlohmann::json& fields = nlohmann::json::object()) const;
  void error(std::string_view msg) const;

 private:
  bool json_;
};

}  // namespace multiway::cli
