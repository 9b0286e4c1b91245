// Timings of the OpenMP kernels against the serial reference path.
// Both paths run the per-node arithmetic in the same order, so they must
// agree bitwise; what this measures is the parallel speedup alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "absubdiff/fracops.hpp"
#include "absubdiff/mlf.hpp"
#include "absubdiff/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace absubdiff;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) {
    fn();
  }
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double omp_ms, bool bitwise) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms,
              omp_ms, serial_ms / omp_ms, bitwise ? "bitwise-equal" : "DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp",
              "speedup");

  {
    const TimeGrid g(1.0, 4096);
    const auto f = SampledFunction::sample(
        g, [](double t) { return std::sin(3.0 * t) + t * t; });
    const fracops::FracOrder a(0.5);

    auto ds = fracops::ab_derivative(f, a, Exec::serial);
    auto dp = fracops::ab_derivative(f, a, Exec::openmp);
    report("ab_derivative N=4096",
           time_ms([&] { fracops::ab_derivative(f, a, Exec::serial); }, 3),
           time_ms([&] { fracops::ab_derivative(f, a, Exec::openmp); }, 3),
           ds.values == dp.values);

    auto is = fracops::rl_integral(f, 0.5, Exec::serial);
    auto ip = fracops::rl_integral(f, 0.5, Exec::openmp);
    report("rl_integral N=4096",
           time_ms([&] { fracops::rl_integral(f, 0.5, Exec::serial); }, 3),
           time_ms([&] { fracops::rl_integral(f, 0.5, Exec::openmp); }, 3),
           is.values == ip.values);

    auto as = fracops::ab_derivative_alt(f, a, Exec::serial);
    auto ap = fracops::ab_derivative_alt(f, a, Exec::openmp);
    report("ab_derivative_alt N=4096",
           time_ms([&] { fracops::ab_derivative_alt(f, a, Exec::serial); }, 3),
           time_ms([&] { fracops::ab_derivative_alt(f, a, Exec::openmp); }, 3),
           as.values == ap.values);
  }

  {
    const solver::SpaceTimeGrid g(1.0, 1.0, 96, 768);
    const solver::ProblemSpec p{
        fracops::FracOrder(0.5),
        g,
        [](double x) { return 4.0 * x * (1.0 - x); },
        [](double) { return 0.0; },
        [](double) { return 0.0; },
        [](double x, double t, double) { return std::sin(pi * x) * (1.0 + t); },
        true};
    auto fs = solver::solve(p, {}, Exec::serial);
    auto fp = solver::solve(p, {}, Exec::openmp);
    report("solve 96x768",
           time_ms([&] { solver::solve(p, {}, Exec::serial); }, 1),
           time_ms([&] { solver::solve(p, {}, Exec::openmp); }, 1),
           fs.values == fp.values);

    const double rs = solver::residual(fs, p, Exec::serial);
    const double rp = solver::residual(fs, p, Exec::openmp);
    report("residual 96x768",
           time_ms([&] { solver::residual(fs, p, Exec::serial); }, 1),
           time_ms([&] { solver::residual(fs, p, Exec::openmp); }, 1),
           rs == rp);
  }

  {
    std::vector<double> grid(2000);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = 1e-3 * std::pow(50.0 / 1e-3, (i + 1.0) / grid.size());
    }
    auto rs = mlf::ml_complete_monotone_probe(0.8, grid, Exec::serial);
    auto rp = mlf::ml_complete_monotone_probe(0.8, grid, Exec::openmp);
    report("ml monotone probe 2000 pts",
           time_ms([&] { mlf::ml_complete_monotone_probe(0.8, grid,
                                                         Exec::serial); }, 1),
           time_ms([&] { mlf::ml_complete_monotone_probe(0.8, grid,
                                                         Exec::openmp); }, 1),
           rs.slack == rp.slack);
  }
  return 0;
}
