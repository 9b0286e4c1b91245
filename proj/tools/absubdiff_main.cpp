#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absubdiff/runcfg.hpp"

using absubdiff::runcfg::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Atangana-Baleanu sub-diffusion toolkit"};
  app.require_subcommand(1);

  // solve
  std::string solve_config;
  CLI::App* solve = app.add_subcommand("solve", "solve a configured problem");
  solve->add_option("-c,--config", solve_config, "run configuration (JSON)")
      ->required();

  // verify lemmas|theorems
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->require_subcommand(1);

  std::uint64_t lemma_seed = 1;
  int lemma_count = 100;
  int lemma_n = 400;
  std::string lemma_out;
  CLI::App* lemmas =
      verify->add_subcommand("lemmas", "extremum lemmas on a seeded corpus");
  lemmas->add_option("--seed", lemma_seed, "corpus seed");
  lemmas->add_option("--count", lemma_count, "number of functions");
  lemmas->add_option("--n", lemma_n, "time steps of the sampling grid");
  lemmas->add_option("-o,--out", lemma_out, "CSV output (default stdout)");

  std::vector<std::string> only;
  std::optional<std::uint64_t> theorem_seed;
  std::string theorem_json;
  CLI::App* theorems =
      verify->add_subcommand("theorems", "maximum-principle theorem suite");
  theorems->add_option("--only", only, "theorem ids to keep (e.g. T3.1,C1)")
      ->delimiter(',');
  theorems
      ->add_option_function<std::uint64_t>(
          "--seed", [&](std::uint64_t s) { theorem_seed = s; },
          "add seeded randomized instances")
      ->expected(1);
  theorems->add_option("--json", theorem_json, "machine-readable report path");

  // mlf eval
  CLI::App* mlf_cmd = app.add_subcommand("mlf", "Mittag-Leffler utilities");
  mlf_cmd->require_subcommand(1);
  double ml_alpha = 0.5, ml_beta = 1.0, ml_z = 0.0;
  CLI::App* mlf_eval = mlf_cmd->add_subcommand("eval", "evaluate E_{a,b}(z)");
  mlf_eval->add_option("--alpha", ml_alpha)->required();
  mlf_eval->add_option("--beta", ml_beta)->required();
  mlf_eval->add_option("--z", ml_z)->required();

  // fracops apply
  CLI::App* fracops_cmd =
      app.add_subcommand("fracops", "discrete fractional operators");
  fracops_cmd->require_subcommand(1);
  std::string op, in_csv, out_csv;
  double op_alpha = 0.5;
  CLI::App* apply = fracops_cmd->add_subcommand(
      "apply", "apply an operator to a sampled function (CSV in, CSV out)");
  apply->add_option("--op", op, "operator name")->required();
  apply->add_option("--alpha", op_alpha)->required();
  apply->add_option("-i,--input", in_csv, "input CSV (t,f)")->required();
  apply->add_option("-o,--output", out_csv, "output CSV")->required();

  // sweep
  std::string sweep_config;
  int jobs = 1;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run several configurations concurrently");
  sweep->add_option("-c,--config", sweep_config, "sweep configuration (JSON)")
      ->required();
  sweep->add_option("-j,--jobs", jobs, "max concurrent runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : absubdiff::runcfg::exit_config_error;
  }

  if (solve->parsed()) {
    try {
      RunConfig cfg = absubdiff::runcfg::load_config(solve_config);
      return absubdiff::runcfg::run_solve(cfg);
    } catch (const absubdiff::runcfg::ConfigError& e) {
      std::fprintf(stderr, "absubdiff: %s\n", e.what());
      return absubdiff::runcfg::exit_config_error;
    }
  }
  if (lemmas->parsed()) {
    return absubdiff::runcfg::run_verify_lemmas(lemma_seed, lemma_count,
                                                lemma_n, lemma_out);
  }
  if (theorems->parsed()) {
    return absubdiff::runcfg::run_verify_theorems(only, theorem_seed,
                                                  theorem_json);
  }
  if (mlf_eval->parsed()) {
    return absubdiff::runcfg::run_mlf_eval(ml_alpha, ml_beta, ml_z);
  }
  if (apply->parsed()) {
    return absubdiff::runcfg::run_fracops_apply(op, op_alpha, in_csv, out_csv);
  }
  if (sweep->parsed()) {
    return absubdiff::runcfg::run_sweep(sweep_config, jobs);
  }
  return absubdiff::runcfg::exit_config_error;
}
