#include "commands.hpp"

#include "multiway/io.hpp"

#include "CLI11.hpp"

#include <exception>
#include <functional>

int main(int argc, char** argv) {
  using namespace multiway::cli;

  CLI::App app{"multiway: tensor decompositions, tensor compressed sensing and multiway analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(42);
  app.add_option("--out-dir", g.out_dir, "Directory for outputs and manifest.json")->default_val(".");
  app.add_flag("--json-logs", g.json_logs, "Emit log lines as JSON on stderr");

  std::function<int()> action;

  DecomposeOptions dec;
  auto* decompose = app.add_subcommand("decompose", "Decompose an MWT1 tensor");
  decompose->add_option("input", dec.input, "Input tensor (MWT1)")->required();
  decompose->add_option("--method", dec.method, "cpd, tucker, hooi, btd or tt")
      ->required()
      ->check(CLI::IsMember({"cpd", "tucker", "hooi", "btd", "tt"}));
  decompose->add_option("--rank", dec.rank, "CP rank");
  decompose->add_option("--ranks", dec.ranks, "Tucker multilinear ranks")->delimiter(',');
  decompose->add_option("--terms", dec.terms, "BTD term count R");
  decompose->add_option("--block", dec.block, "BTD block rank L");
  decompose->add_option("--tol", dec.tol, "TT relative accuracy");
  decompose->add_option("--max-iters", dec.max_iters, "Iteration cap for ALS and HOOI");
  decompose->add_option("--min-fit", dec.min_fit, "Exit with status 2 when the fit is lower");
  decompose->callback([&] { action = [&] { return cmd_decompose(g, dec); }; });

  TensorizeOptions ten;
  auto* tensorize = app.add_subcommand("tensorize", "Build a tensor from a CSV vector or signal matrix");
  tensorize->add_option("input", ten.input, "CSV file: one signal per row, or a single column")->required();
  tensorize->add_option("--scheme", ten.scheme, "hankel or quantize")
      ->required()
      ->check(CLI::IsMember({"hankel", "quantize"}));
  tensorize->add_option("--rows", ten.rows, "Hankel rows I (default: half the length)");
  tensorize->add_option("--base", ten.base, "Quantization base");
  tensorize->add_option("--output", ten.output, "Output file name inside --out-dir");
  tensorize->callback([&] { action = [&] { return cmd_tensorize(g, ten); }; });

  CsRecoverOptions cs;
  auto* recover = app.add_subcommand("cs-recover", "Sparse core recovery with a Kronecker dictionary");
  recover->add_option("--measurements", cs.measurements, "Measurement tensor (MWT1)");
  recover->add_option("--dictionary", cs.dictionary, "Dictionary JSON with 'sensing' and optional 'bases'");
  recover->add_option("--synthetic", cs.synthetic, "planted or cube")->check(CLI::IsMember({"planted", "cube"}));
  recover->add_option("--algorithm", cs.algorithm, "komp, nbomp or both")
      ->check(CLI::IsMember({"komp", "nbomp", "both"}));
  recover->add_option("--sparsity,-K", cs.sparsity, "Kronecker-OMP sparsity K");
  recover->add_option("--block,-L", cs.block, "N-BOMP per-mode block size L");
  recover->add_option("--residual-tol", cs.residual_tol, "Relative residual tolerance");
  recover->add_option("--sampling-ratio", cs.sampling_ratio, "Measurement ratio for the cube pipeline");
  recover->add_option("--shape", cs.shape, "Synthetic core or cube shape")->delimiter(',');
  recover->callback([&] { action = [&] { return cmd_cs_recover(g, cs); }; });

  BssDemoOptions bss;
  auto* bss_cmd = app.add_subcommand("bss-demo", "Source separation shootout on Hankel tensors");
  bss_cmd->add_option("--samples", bss.samples);
  bss_cmd->add_option("--channels", bss.channels);
  bss_cmd->add_option("--hankel-rows", bss.hankel_rows);
  bss_cmd->add_option("--time-step", bss.time_step);
  bss_cmd->add_option("--snr", bss.snrs, "SNR levels in dB; 'inf' for noise-free")->delimiter(',');
  bss_cmd->add_option("--trials", bss.trials, "Seeded trials per SNR (medians reported)");
  bss_cmd->add_option("--noise-stage", bss.noise_stage, "mixtures or tensor")
      ->check(CLI::IsMember({"mixtures", "tensor"}));
  bss_cmd->callback([&] { action = [&] { return cmd_bss_demo(g, bss); }; });

  RegressDemoOptions reg;
  auto* reg_cmd = app.add_subcommand("regress-demo", "HOPLS against unfolded PLS on planted data");
  reg_cmd->add_option("--seeds", reg.seeds);
  reg_cmd->add_option("--components,-R", reg.components);
  reg_cmd->add_option("--block-rank,-L", reg.block_rank);
  reg_cmd->add_option("--noise", reg.noise);
  reg_cmd->add_option("--train", reg.train);
  reg_cmd->add_option("--test", reg.test);
  reg_cmd->callback([&] { action = [&] { return cmd_regress_demo(g, reg); }; });

  LmwcaDemoOptions lm;
  auto* lm_cmd = app.add_subcommand("lmwca-demo", "Linked common-feature classification on synthetic classes");
  lm_cmd->add_option("--trials", lm.trials);
  lm_cmd->add_option("--common-fraction", lm.common_fraction);
  lm_cmd->add_option("--noise", lm.noise);
  lm_cmd->callback([&] { action = [&] { return cmd_lmwca_demo(g, lm); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const Logger log(g.json_logs);
  try {
    return action();
  } catch (const multiway::io::FormatError& e) {
    log.error(e.what());
  } catch (const std::exception& e) {
    log.error(e.what());
  }
  return kInputError;
}
