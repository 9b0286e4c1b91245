#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absubdiff/principles.hpp"
#include "absubdiff/solver.hpp"

namespace absubdiff::runcfg {

/// Exit-code contract shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config_error = 2,
  exit_solver_error = 3,
};

/// A malformed or out-of-envelope configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One run: problem data in expression form, solver knobs, output paths.
struct RunConfig {
  double alpha = 0.5;
  double a = 1.0;
  double t_end = 1.0;
  int nx = 40;
  int nt = 160;
  std::string phi = "0";
  std::string lam = "0";
  std::string mu = "0";
  std::string forcing = "0";
  solver::SolverConfig solver_cfg;
  bool strict_compat = false;
  std::string field_csv;    // empty = skip
  std::string report_json;  // empty = skip
  std::string plot_data;    // empty = skip
};

/// Parses the JSON document ({"problem": ..., "solver": ..., "outputs":
/// ...}); throws ConfigError on anything malformed.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);

/// Compiles the expressions and validates the envelope (phi over x only,
/// lam/mu over t only, u only in the forcing). Sets linear_flag from the
/// forcing expression.
solver::ProblemSpec build_problem(const RunConfig& cfg);

/// Subcommand bodies. Each returns an ExitCode and writes any declared
/// outputs; diagnostics go to the streams.
int run_solve(const RunConfig& cfg);
int run_verify_theorems(const std::vector<std::string>& only,
                        std::optional<std::uint64_t> seed,
                        const std::string& json_out);
int run_verify_lemmas(std::uint64_t seed, int count, int n_steps,
                      const std::string& csv_out);
int run_mlf_eval(double alpha, double beta, double z);
int run_fracops_apply(const std::string& op, double alpha,
                      const std::string& input_csv,
                      const std::string& output_csv);
int run_sweep(const std::string& sweep_config_path, int jobs);

}  // namespace absubdiff::runcfg
