#pragma once

#include "manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace multiway::cli {

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  bool json_logs = false;
};

struct DecomposeOptions {
  std::filesystem::path input;
  std::string method;
  std::size_t rank = 1;                 // cpd
  std::vector<std::size_t> ranks;       // tucker, hooi
  std::size_t terms = 1;                // btd
  std::size_t block = 1;                // btd
  double tol = 1e-6;                    // tt
  std::size_t max_iters = 500;
  double min_fit = 0.0;
};

struct TensorizeOptions {
  std::filesystem::path input;
  std::string scheme;
  std::size_t rows = 0;   // hankel; 0 means half the signal length
  std::size_t base = 2;   // quantize
  std::string output = "tensor.mwt1";
};

struct CsRecoverOptions {
  std::filesystem::path measurements;
  std::filesystem::path dictionary;
  std::string synthetic;          // "", planted or cube
  std::string algorithm = "nbomp";  // komp, nbomp or both
  std::optional<std::size_t> sparsity;  // komp K
  std::optional<std::size_t> block;     // nbomp L
  double residual_tol = 1e-10;
  double sampling_ratio = 0.33;
  std::vector<std::size_t> shape;  // default 8,8,8 planted; 64,64,8 cube
};

struct BssDemoOptions {
  std::size_t samples = 60;
  std::size_t channels = 5;
  std::size_t hankel_rows = 24;
  double time_step = 1.0 / 240.0;
  std::vector<std::string> snrs{"0", "10", "20", "30", "inf"};
  std::size_t trials = 1;
  std::string noise_stage = "mixtures";
};

struct RegressDemoOptions {
  std::size_t seeds = 20;
  std::size_t components = 1;
  std::size_t block_rank = 2;
  double noise = 0.1;
  std::size_t train = 8;
  std::size_t test = 50;
};

struct LmwcaDemoOptions {
  std::size_t trials = 50;
  double common_fraction = 0.8;
  double noise = 0.1;
};

int cmd_decompose(const GlobalOptions& g, const DecomposeOptions& o);
int cmd_tensorize(const GlobalOptions& g, const TensorizeOptions& o);
int cmd_cs_recover(const GlobalOptions& g, const CsRecoverOptions& o);
int cmd_bss_demo(const GlobalOptions& g, const BssDemoOptions& o);
int cmd_regress_demo(const GlobalOptions& g, const RegressDemoOptions& o);
int cmd_lmwca_demo(const GlobalOptions& g, const LmwcaDemoOptions& o);

}  // namespace multiway::cli
