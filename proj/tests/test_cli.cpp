#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "absubdiff/csvio.hpp"
#include "absubdiff/fracops.hpp"
#include "absubdiff/runcfg.hpp"

using namespace absubdiff;
using namespace absubdiff::runcfg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path temp_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("absubdiff_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

int run_binary(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string(ABSUBDIFF_BIN) + " " + args + " > " +
                          stdout_file.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WEXITSTATUS(raw);
}

std::string canonical_config(const fs::path& dir, const std::string& tag) {
  json j = {
      {"problem",
       {{"alpha", 0.5},
        {"a", 1.0},
        {"t_end", 1.0},
        {"nx", 12},
        {"nt", 16},
        {"phi", "4*x*(1-x)"},
        {"lambda", "0"},
        {"mu", "0"},
        {"forcing", "sin(pi*x)*(1+t)"}}},
      {"solver", {{"picard_tol", 1e-10}, {"picard_max", 50}, {"damping", 1.0}}},
      {"outputs",
       {{"field_csv", (dir / (tag + "_field.csv")).string()},
        {"report_json", (dir / (tag + "_report.json")).string()},
        {"plot_data", (dir / (tag + "_plot.dat")).string()}}}};
  return j.dump(2);
}

}  // namespace

TEST_CASE("config parsing") {
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{}"), ConfigError);
  RunConfig cfg = parse_config_text(canonical_config(temp_dir(), "parse"));
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.nx == 12);
  CHECK(cfg.phi == "4*x*(1-x)");

  json bad = json::parse(canonical_config(temp_dir(), "parse"));
  bad["solver"]["damping"] = 1.5;
  CHECK_THROWS_AS(parse_config_text(bad.dump()), ConfigError);
}

TEST_CASE("build_problem validation") {
  RunConfig cfg = parse_config_text(canonical_config(temp_dir(), "bp"));
  CHECK_NOTHROW(build_problem(cfg));

  RunConfig bad_alpha = cfg;
  bad_alpha.alpha = 1.5;
  CHECK_THROWS_AS(build_problem(bad_alpha), ConfigError);

  RunConfig u_in_phi = cfg;
  u_in_phi.phi = "u+1";
  CHECK_THROWS_AS(build_problem(u_in_phi), ConfigError);

  RunConfig t_in_phi = cfg;
  t_in_phi.phi = "x*t";
  CHECK_THROWS_AS(build_problem(t_in_phi), ConfigError);

  RunConfig nonlinear = cfg;
  nonlinear.forcing = "-u^3";
  CHECK(!build_problem(nonlinear).linear_flag);
  CHECK(build_problem(cfg).linear_flag);
}

TEST_CASE("run_solve writes the declared outputs and reports consistency") {
  const fs::path dir = temp_dir();
  RunConfig cfg = parse_config_text(canonical_config(dir, "solve"));
  CHECK(run_solve(cfg) == exit_ok);
  CHECK(fs::exists(cfg.field_csv));
  CHECK(fs::exists(cfg.report_json));
  CHECK(fs::exists(cfg.plot_data));

  // (nx+1)(nt+1) data rows plus the header
  std::istringstream is(slurp(cfg.field_csv));
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++lines;
  }
  CHECK(lines == 13 * 17 + 1);

  const json rep = json::parse(slurp(cfg.report_json));
  CHECK(rep.at("version") == 1);
  CHECK(rep.contains("config"));
  CHECK(rep.at("checks").size() == 1);
  CHECK(rep.at("checks")[0].at("passed") == true);
  CHECK(rep.at("summary").at("failed") == 0);
}

TEST_CASE("invalid alpha: exit 2 and no outputs") {
  const fs::path dir = temp_dir();
  json j = json::parse(canonical_config(dir, "badalpha"));
  j["problem"]["alpha"] = 1.5;
  RunConfig cfg = parse_config_text(j.dump());
  CHECK(run_solve(cfg) == exit_config_error);
  CHECK(!fs::exists(cfg.field_csv));
  CHECK(!fs::exists(cfg.report_json));
}

TEST_CASE("report's embedded config re-runs bitwise") {
  const fs::path dir = temp_dir();
  RunConfig cfg = parse_config_text(canonical_config(dir, "rt1"));
  REQUIRE(run_solve(cfg) == exit_ok);
  const json rep = json::parse(slurp(cfg.report_json));

  RunConfig again = parse_config_text(rep.at("config").dump());
  again.field_csv = (dir / "rt2_field.csv").string();
  again.report_json.clear();
  again.plot_data.clear();
  REQUIRE(run_solve(again) == exit_ok);
  CHECK(slurp(cfg.field_csv).substr(slurp(cfg.field_csv).find('\n')) ==
        slurp(again.field_csv).substr(slurp(again.field_csv).find('\n')));
}

TEST_CASE("field CSV round trip is lossless") {
  solver::SpaceTimeGrid g(0.7, 1.3, 5, 4);
  solver::Field f(g);
  std::uint64_t s = 7;
  for (double& v : f.values) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v = (s >> 11) * 0x1.0p-53 - 0.5;
  }
  const fs::path p = temp_dir() / "roundtrip.csv";
  csvio::write_field_csv(f, p.string());
  solver::Field g2 = csvio::read_field_csv(p.string());
  CHECK(g2.values == f.values);
  CHECK(g2.grid.n_x == 5);
  CHECK(g2.grid.n_t == 4);
}

TEST_CASE("malformed CSV inputs are rejected") {
  const fs::path dir = temp_dir();
  const fs::path p = dir / "bad.csv";
  spit(p, "wrong,header\n0,1\n");
  CHECK_THROWS_AS(csvio::read_sampled_csv(p.string()), std::runtime_error);
  spit(p, "t,f\n0,1\n0.5\n1,3\n");  // ragged row
  CHECK_THROWS_AS(csvio::read_sampled_csv(p.string()), std::runtime_error);
  spit(p, "t,f\n0,1\n0.1,2\n0.9,3\n1,4\n");  // non-uniform spacing
  CHECK_THROWS_AS(csvio::read_sampled_csv(p.string()), std::runtime_error);
  spit(p, "t,f\n0.5,1\n1,2\n1.5,3\n");  // does not start at zero
  CHECK_THROWS_AS(csvio::read_sampled_csv(p.string()), std::runtime_error);
  CHECK_THROWS_AS(csvio::read_field_csv((dir / "missing.csv").string()),
                  std::runtime_error);
  spit(p, "x,t,u\n0,0,1\n");  // too few rows
  CHECK_THROWS_AS(csvio::read_field_csv(p.string()), std::runtime_error);
}

TEST_CASE("verify lemmas emits one CSV row per check") {
  const fs::path out = temp_dir() / "lemmas.csv";
  CHECK(run_verify_lemmas(1, 6, 200, out.string()) == exit_ok);
  std::istringstream is(slurp(out));
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "function_id,alpha,kind,lhs,rhs,slack,passed");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.back() == '1');  // all pass
  }
  CHECK(rows == 18);  // 6 functions x {rl_max, ab_max, ab_min}
}

TEST_CASE("fracops apply round trip") {
  const fs::path in = temp_dir() / "apply_in.csv";
  const fs::path out = temp_dir() / "apply_out.csv";
  auto f = SampledFunction::sample(TimeGrid(1.0, 64),
                                   [](double t) { return std::sin(t); });
  csvio::write_sampled_csv(f, in.string());
  CHECK(run_fracops_apply("ab_derivative", 0.5, in.string(), out.string()) ==
        exit_ok);
  SampledFunction got = csvio::read_sampled_csv(out.string());
  SampledFunction want = fracops::ab_derivative(f, fracops::FracOrder(0.5));
  for (int j = 0; j < got.size(); ++j) {
    CHECK(got.values[j] == want.values[j]);  // %.17g round trip is exact
  }
  CHECK(run_fracops_apply("nope", 0.5, in.string(), out.string()) ==
        exit_config_error);
  CHECK(run_fracops_apply("ab_derivative", 1.5, in.string(), out.string()) ==
        exit_config_error);
}

TEST_CASE("binary: mlf eval") {
  const fs::path out = temp_dir() / "mlf_out.txt";
  CHECK(run_binary("mlf eval --alpha 1 --beta 1 --z 1", out) == 0);
  CHECK(std::stod(slurp(out)) == doctest::Approx(2.718281828459045));
  CHECK(run_binary("mlf eval --alpha 3 --beta 1 --z 1", out) == 2);
  CHECK(run_binary("mlf eval --alpha 1 --beta 1 --z 10000", out) == 3);
  CHECK(run_binary("bogus", out) == 2);
}

TEST_CASE("binary: solve exit codes") {
  const fs::path dir = temp_dir();
  const fs::path cfgfile = dir / "bin_solve.json";
  spit(cfgfile, canonical_config(dir, "bin"));
  const fs::path out = dir / "bin_out.txt";
  CHECK(run_binary("solve -c " + cfgfile.string(), out) == 0);

  json diverge = json::parse(canonical_config(dir, "bin_div"));
  diverge["problem"]["forcing"] = "1000000*u";
  diverge["solver"]["picard_max"] = 20;
  const fs::path divfile = dir / "bin_div.json";
  spit(divfile, diverge.dump());
  CHECK(run_binary("solve -c " + divfile.string(), out) == 3);

  CHECK(run_binary("solve -c /nonexistent.json", out) == 2);
}

TEST_CASE("exit 1 when a declared check fails (fault injection)") {
  // a sloppy picard_tol leaves a residual far above the 1e-9 gate
  const fs::path dir = temp_dir();
  json j = json::parse(canonical_config(dir, "sloppy"));
  j["problem"]["forcing"] = "-u^3-10*u";
  j["solver"]["picard_tol"] = 0.05;
  j["solver"]["damping"] = 0.4;
  RunConfig cfg = parse_config_text(j.dump());
  CHECK(run_solve(cfg) == exit_check_failed);
  const json rep = json::parse(slurp(cfg.report_json));
  CHECK(rep.at("checks")[0].at("passed") == false);
  CHECK(rep.at("summary").at("failed") == 1);
}

TEST_CASE("binary: full canonical theorem report lists 8 passed checks") {
  const fs::path dir = temp_dir();
  const fs::path rep = dir / "theorems_full.json";
  const fs::path out = dir / "theorems_full_stdout.txt";
  CHECK(run_binary("verify theorems --json " + rep.string(), out) == 0);
  const json j = json::parse(slurp(rep));
  CHECK(j.at("checks").size() == 8);
  CHECK(j.at("summary").at("passed") == 8);
  CHECK(j.at("summary").at("failed") == 0);
}

TEST_CASE("binary: verify theorems writes the report") {
  const fs::path dir = temp_dir();
  const fs::path rep = dir / "theorems.json";
  const fs::path out = dir / "theorems_stdout.txt";
  CHECK(run_binary("verify theorems --only T3.1,T3.2,C1 --json " +
                       rep.string(),
                   out) == 0);
  const json j = json::parse(slurp(rep));
  CHECK(j.at("version") == 1);
  CHECK(j.at("checks").size() == 3);
  CHECK(j.at("summary").at("passed") == 3);
  for (const auto& c : j.at("checks")) {
    CHECK(c.at("passed") == true);
    CHECK(c.contains("hypotheses"));
    CHECK(c.contains("slack"));
  }
  CHECK(run_binary("verify theorems --only NOPE", out) == 2);
  CHECK(run_binary("verify theorems --only T3.1 --seed 7 --json " +
                       rep.string(),
                   out) == 0);
  const json with_seed = json::parse(slurp(rep));
  CHECK(with_seed.at("checks").size() == 2);  // canonical + randomized T3.1
  CHECK(with_seed.at("config").at("seed") == 7);
}

TEST_CASE("binary: sweep aggregates the worst status") {
  const fs::path dir = temp_dir();
  json good = json::parse(canonical_config(dir, "sw_good"));
  json bad = json::parse(canonical_config(dir, "sw_bad"));
  bad["problem"]["alpha"] = 1.7;
  json sweep = {{"runs", {good, bad}}};
  const fs::path sweepfile = dir / "sweep.json";
  spit(sweepfile, sweep.dump());
  const fs::path out = dir / "sweep_out.txt";
  CHECK(run_binary("sweep -c " + sweepfile.string() + " --jobs 2", out) == 2);

  json sweep_ok = {{"runs", {good}}};
  spit(sweepfile, sweep_ok.dump());
  CHECK(run_binary("sweep -c " + sweepfile.string() + " --jobs 1", out) == 0);
}
