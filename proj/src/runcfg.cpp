#include "absubdiff/runcfg.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "absubdiff/csvio.hpp"
#include "absubdiff/expr.hpp"
#include "absubdiff/extremum.hpp"
#include "absubdiff/mlf.hpp"

namespace absubdiff::runcfg {

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& cfg) {
  json j;
  j["problem"] = {{"alpha", cfg.alpha}, {"a", cfg.a},
                  {"t_end", cfg.t_end}, {"nx", cfg.nx},
                  {"nt", cfg.nt},       {"phi", cfg.phi},
                  {"lambda", cfg.lam},  {"mu", cfg.mu},
                  {"forcing", cfg.forcing}};
  j["solver"] = {
      {"picard_tol", cfg.solver_cfg.picard_tol},
      {"picard_max", cfg.solver_cfg.picard_max},
      {"damping", cfg.solver_cfg.damping},
      {"picard_init",
       cfg.solver_cfg.picard_init == solver::SolverConfig::PicardInit::zero
           ? "zero"
           : "previous_row"},
      {"strict_compat", cfg.strict_compat}};
  j["outputs"] = {{"field_csv", cfg.field_csv},
                  {"report_json", cfg.report_json},
                  {"plot_data", cfg.plot_data}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    const json& p = j.at("problem");
    cfg.alpha = p.at("alpha").get<double>();
    cfg.a = p.at("a").get<double>();
    cfg.t_end = p.at("t_end").get<double>();
    cfg.nx = p.at("nx").get<int>();
    cfg.nt = p.at("nt").get<int>();
    cfg.phi = p.value("phi", std::string("0"));
    cfg.lam = p.value("lambda", std::string("0"));
    cfg.mu = p.value("mu", std::string("0"));
    cfg.forcing = p.value("forcing", std::string("0"));
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.solver_cfg.picard_tol = s.value("picard_tol", 1e-10);
      cfg.solver_cfg.picard_max = s.value("picard_max", 100);
      cfg.solver_cfg.damping = s.value("damping", 1.0);
      const std::string init = s.value("picard_init", "previous_row");
      if (init == "zero") {
        cfg.solver_cfg.picard_init = solver::SolverConfig::PicardInit::zero;
      } else if (init == "previous_row") {
        cfg.solver_cfg.picard_init =
            solver::SolverConfig::PicardInit::previous_row;
      } else {
        throw ConfigError("picard_init must be 'previous_row' or 'zero'");
      }
      cfg.strict_compat = s.value("strict_compat", false);
    }
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      cfg.field_csv = o.value("field_csv", "");
      cfg.report_json = o.value("report_json", "");
      cfg.plot_data = o.value("plot_data", "");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.solver_cfg.picard_tol > 0.0)) {
    throw ConfigError("config: picard_tol must be positive");
  }
  if (cfg.solver_cfg.picard_max < 1) {
    throw ConfigError("config: picard_max must be >= 1");
  }
  if (!(cfg.solver_cfg.damping > 0.0) || cfg.solver_cfg.damping > 1.0) {
    throw ConfigError("config: damping must lie in (0,1]");
  }
  return cfg;
}

json report_json_for(const json& config,
                     const std::vector<principles::TheoremReport>& reports) {
  json checks = json::array();
  int passed = 0, failed = 0, na = 0;
  for (const auto& r : reports) {
    json hyps = json::array();
    for (const auto& h : r.hypotheses) {
      hyps.push_back({{"name", h.name},
                      {"satisfied", h.satisfied},
                      {"value", h.measured}});
    }
    checks.push_back({{"theorem_id", principles::to_string(r.theorem_id)},
                      {"instance", r.instance},
                      {"hypotheses", hyps},
                      {"bound", r.claimed_bound},
                      {"measured", r.measured_value},
                      {"slack", r.slack},
                      {"tol", r.tol},
                      {"passed", r.passed},
                      {"applicable", r.applicable}});
    if (!r.applicable) {
      ++na;
    } else if (r.passed) {
      ++passed;
    } else {
      ++failed;
    }
  }
  return json{{"version", 1},
              {"config", config},
              {"checks", checks},
              {"summary",
               {{"total", reports.size()},
                {"passed", passed},
                {"failed", failed},
                {"not_applicable", na}}}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ConfigError("cannot open output '" + path + "'");
  }
  os << text;
}

expr::Expr compile_checked(const std::string& src, const std::string& what,
                           const std::string& allowed) {
  expr::Expr e = [&] {
    try {
      return expr::Expr::parse(src);
    } catch (const expr::ParseError& pe) {
      throw ConfigError(what + ": " + pe.what());
    }
  }();
  for (char v : std::string("xtu")) {
    if (allowed.find(v) == std::string::npos && e.uses(v)) {
      throw ConfigError(what + ": variable '" + std::string(1, v) +
                        "' is not available here (allowed: " + allowed + ")");
    }
  }
  return e;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("cannot open config '" + path + "'");
  }
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_to_json_text(const RunConfig& cfg) {
  return config_to_json(cfg).dump(2);
}

solver::ProblemSpec build_problem(const RunConfig& cfg) {
  expr::Expr phi = compile_checked(cfg.phi, "phi", "x");
  expr::Expr lam = compile_checked(cfg.lam, "lambda", "t");
  expr::Expr mu = compile_checked(cfg.mu, "mu", "t");
  expr::Expr forcing = compile_checked(cfg.forcing, "forcing", "xtu");
  const bool linear = !forcing.uses('u');

  fracops::FracOrder order = [&] {
    try {
      return fracops::FracOrder(cfg.alpha);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }();
  solver::SpaceTimeGrid grid = [&] {
    try {
      return solver::SpaceTimeGrid(cfg.a, cfg.t_end, cfg.nx, cfg.nt);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }();
  if (cfg.alpha < 1e-4 || cfg.alpha > 1.0 - 1e-4) {
    throw ConfigError("config: alpha must lie in [1e-4, 1-1e-4]");
  }

  solver::ProblemSpec p{
      order,
      grid,
      [phi](double x) { return phi.eval(x, 0.0, 0.0); },
      [lam](double t) { return lam.eval(0.0, t, 0.0); },
      [mu](double t) { return mu.eval(0.0, t, 0.0); },
      [forcing](double x, double t, double u) { return forcing.eval(x, t, u); },
      linear};
  p.compat = cfg.strict_compat ? solver::CompatPolicy::strict
                               : solver::CompatPolicy::warn;
  return p;
}

int run_solve(const RunConfig& cfg) {
  std::optional<solver::ProblemSpec> problem;
  try {
    problem = build_problem(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_config_error;
  }
  try {
    solver::Field field = solver::solve(*problem, cfg.solver_cfg);
    const double res = solver::residual(field, *problem);
    const double res_bound = 1e-9;

    if (!cfg.field_csv.empty()) {
      csvio::write_field_csv(field, cfg.field_csv);
    }
    if (!cfg.plot_data.empty()) {
      csvio::write_plot_data(field, cfg.plot_data);
    }
    if (!cfg.report_json.empty()) {
      json check = {{"theorem_id", "consistency"},
                    {"instance", "residual of the assembled scheme"},
                    {"hypotheses", json::array()},
                    {"bound", res_bound},
                    {"measured", res},
                    {"slack", res_bound - res},
                    {"passed", res <= res_bound},
                    {"applicable", true}};
      json rep = {{"version", 1},
                  {"config", config_to_json(cfg)},
                  {"checks", json::array({check})},
                  {"summary",
                   {{"total", 1},
                    {"passed", res <= res_bound ? 1 : 0},
                    {"failed", res <= res_bound ? 0 : 1},
                    {"not_applicable", 0}}}};
      write_text(cfg.report_json, rep.dump(2) + "\n");
    }
    std::printf("solved %dx%d grid, alpha=%g, residual %.3e\n", cfg.nx, cfg.nt,
                cfg.alpha, res);
    return res <= res_bound ? exit_ok : exit_check_failed;
  } catch (const solver::SolverError& e) {
    std::fprintf(stderr, "absubdiff: solver error at step %d: %s\n",
                 e.time_index, e.what());
    return exit_solver_error;
  } catch (const expr::EvalError& e) {
    std::fprintf(stderr, "absubdiff: expression evaluation failed: %s\n",
                 e.what());
    return exit_solver_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_solver_error;
  }
}

int run_verify_theorems(const std::vector<std::string>& only,
                        std::optional<std::uint64_t> seed,
                        const std::string& json_out) {
  std::vector<principles::TheoremReport> reports;
  try {
    reports = principles::canonical_suite();
    if (seed) {
      auto extra = principles::randomized_suite(*seed, 1);
      reports.insert(reports.end(), extra.begin(), extra.end());
    }
  } catch (const solver::SolverError& e) {
    std::fprintf(stderr, "absubdiff: solver error: %s\n", e.what());
    return exit_solver_error;
  }
  if (!only.empty()) {
    std::vector<principles::TheoremReport> kept;
    for (auto& r : reports) {
      if (std::find(only.begin(), only.end(),
                    principles::to_string(r.theorem_id)) != only.end()) {
        kept.push_back(std::move(r));
      }
    }
    reports = std::move(kept);
    if (reports.empty()) {
      std::fprintf(stderr, "absubdiff: --only matched no theorem ids\n");
      return exit_config_error;
    }
  }

  std::printf("%-6s %-40s %12s %12s %10s %s\n", "id", "instance", "bound",
              "measured", "slack", "verdict");
  bool all_pass = true;
  for (const auto& r : reports) {
    const char* verdict =
        !r.applicable ? "not-applicable" : (r.passed ? "pass" : "FAIL");
    std::printf("%-6s %-40s %12.4e %12.4e %10.2e %s\n",
                principles::to_string(r.theorem_id).c_str(),
                r.instance.c_str(), r.claimed_bound, r.measured_value, r.slack,
                verdict);
    if (!r.passed) {
      all_pass = false;
    }
  }

  if (!json_out.empty()) {
    json config = {{"kind", "verify_theorems"},
                   {"grid", {{"a", 1.0}, {"t_end", 1.0}, {"nx", 40}, {"nt", 160}}},
                   {"alpha", 0.5},
                   {"seed", seed ? json(*seed) : json(nullptr)},
                   {"only", only}};
    write_text(json_out, report_json_for(config, reports).dump(2) + "\n");
  }
  return all_pass ? exit_ok : exit_check_failed;
}

int run_verify_lemmas(std::uint64_t seed, int count, int n_steps,
                      const std::string& csv_out) {
  if (count < 1 || n_steps < 8) {
    std::fprintf(stderr, "absubdiff: need count >= 1 and n >= 8\n");
    return exit_config_error;
  }
  const TimeGrid grid(1.0, n_steps);
  const auto family = extremum::random_c1_family(seed, count, 4, grid, true);
  static const double alphas[3] = {0.25, 0.5, 0.75};

  // checks are independent across the corpus
  std::vector<std::array<extremum::ExtremumReport, 3>> checks(count);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    const fracops::FracOrder order(alphas[k % 3]);
    checks[k] = {extremum::rl_extremum_check(family[k], order),
                 extremum::ab_extremum_check(family[k], order,
                                             extremum::Kind::maximum),
                 extremum::ab_extremum_check(family[k], order,
                                             extremum::Kind::minimum)};
  }

  std::ostringstream os;
  os << "function_id,alpha,kind,lhs,rhs,slack,passed\n";
  bool all_pass = true;
  char buf[160];
  static const char* kinds[3] = {"rl_max", "ab_max", "ab_min"};
  for (int k = 0; k < count; ++k) {
    for (int r = 0; r < 3; ++r) {
      const extremum::ExtremumReport& rep = checks[k][r];
      std::snprintf(buf, sizeof buf, "%d,%.17g,%s,%.17g,%.17g,%.17g,%d\n", k,
                    alphas[k % 3], kinds[r], rep.lhs, rep.rhs, rep.slack,
                    rep.passed ? 1 : 0);
      os << buf;
      all_pass = all_pass && rep.passed;
    }
  }
  if (csv_out.empty()) {
    std::fputs(os.str().c_str(), stdout);
  } else {
    write_text(csv_out, os.str());
  }
  return all_pass ? exit_ok : exit_check_failed;
}

int run_mlf_eval(double alpha, double beta, double z) {
  try {
    const double v = mlf::ml_eval(mlf::MlParams(alpha, beta), z);
    std::printf("%.17g\n", v);
    return exit_ok;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_config_error;
  } catch (const std::overflow_error& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_solver_error;
  }
}

int run_fracops_apply(const std::string& op, double alpha,
                      const std::string& input_csv,
                      const std::string& output_csv) {
  try {
    SampledFunction f = csvio::read_sampled_csv(input_csv);
    SampledFunction out = [&] {
      if (op == "rl_integral") {
        if (!(alpha > 0.0)) {
          throw ConfigError("rl_integral needs alpha > 0");
        }
        return fracops::rl_integral(f, alpha);
      }
      const fracops::FracOrder order = [&] {
        try {
          return fracops::FracOrder(alpha);
        } catch (const std::domain_error& e) {
          throw ConfigError(e.what());
        }
      }();
      if (op == "rl_derivative") {
        return fracops::rl_derivative(f, order);
      }
      if (op == "ab_derivative") {
        return fracops::ab_derivative(f, order);
      }
      if (op == "ab_derivative_alt") {
        return fracops::ab_derivative_alt(f, order);
      }
      if (op == "ab_integral") {
        return fracops::ab_integral(f, order);
      }
      throw ConfigError("unknown op '" + op +
                        "' (rl_integral, rl_derivative, ab_derivative, "
                        "ab_derivative_alt, ab_integral)");
    }();
    csvio::write_sampled_csv(out, output_csv, op);
    return exit_ok;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_config_error;
  }
}

int run_sweep(const std::string& sweep_config_path, int jobs) {
  json j;
  std::vector<RunConfig> runs;
  try {
    std::ifstream is(sweep_config_path);
    if (!is) {
      throw ConfigError("cannot open sweep config '" + sweep_config_path +
                        "'");
    }
    j = json::parse(is);
    if (!j.contains("runs") || !j["runs"].is_array() || j["runs"].empty()) {
      throw ConfigError("sweep config needs a non-empty 'runs' array");
    }
    for (const json& rj : j["runs"]) {
      runs.push_back(config_from_json(rj));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "absubdiff: %s\n", e.what());
    return exit_config_error;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "absubdiff: sweep config: %s\n", e.what());
    return exit_config_error;
  }
  if (jobs < 1) {
    jobs = 1;
  }

  std::atomic<std::size_t> next{0};
  std::vector<int> status(runs.size(), 0);
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= runs.size()) {
        return;
      }
      status[k] = run_solve(runs[k]);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(jobs, static_cast<int>(runs.size()));
  pool.reserve(n_threads);
  for (int k = 0; k < n_threads; ++k) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
  int worst = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::printf("sweep run %zu: exit %d\n", k, status[k]);
    worst = std::max(worst, status[k]);
  }
  return worst;
}

}  // namespace absubdiff::runcfg
