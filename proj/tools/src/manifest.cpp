#include "manifest.hpp"

#include "multiway/io.hpp"

#include <cmath>
#include <iostream>

namespace multiway::cli {

RunManifest::RunManifest(std::string command, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
  doc_ = {{"command", std::move(command)},
          {"seed", seed},
          {"parameters", nlohmann::json::object()},
          {"inputs", nlohmann::json::array()},
          {"outputs", nlohmann::json::array()},
          {"metrics", nlohmann::json::object()}};
}

void RunManifest::write(const std::filesystem::path& path, int exit_code) {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  doc_["wall_clock_seconds"] = elapsed.count();
  doc_["exit_code"] = exit_code;
  io::write_file_atomic(path, doc_.dump(2) + "\n");
}

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void Logger::info(std::string_view msg, const nlohmann::json& fields) const {
  if (json_) {
    nlohmann::json line = fields;
    line["level"] = "info";
    line["msg"] = msg;
    std::cerr << line.dump() << '\n';
    return;
  }
  std::cerr << msg;
  for (const auto& [k, v] : fields.items()) std::cerr << ' ' << k << '=' << v.dump();
  std::cerr << '\n';
}

void Logger::error(std::string_view msg) const {
  if (json_) {
    std::cerr << nlohmann::json{{"level", "error"}, {"msg", msg}}.dump() << '\n';
  } else {
    std::cerr << "error: " << msg << '\n';
  }
}

}  // namespace multiway::cli
