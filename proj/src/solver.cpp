#include "absubdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "absubdiff/mlf.hpp"

namespace absubdiff::solver {

namespace {

constexpr double kAlphaMin = 1e-4;  // both lambda and 1/alpha blow up past this

void validate_alpha(double alpha) {
  if (alpha < kAlphaMin || alpha > 1.0 - kAlphaMin) {
    throw std::domain_error(
        "solver: alpha must lie in [1e-4, 1-1e-4]; got " +
        std::to_string(alpha));
  }
}

void check_compatibility(const ProblemSpec& p) {
  const double left = std::fabs(p.phi(0.0) - p.lam(0.0));
  const double right = std::fabs(p.phi(p.grid.a) - p.mu(0.0));
  if (left > p.compat_tol || right > p.compat_tol) {
    if (p.compat == CompatPolicy::strict) {
      throw std::invalid_argument(
          "solver: initial/boundary data incompatible at the corners "
          "(|phi(0)-lam(0)|=" +
          std::to_string(left) + ", |phi(a)-mu(0)|=" + std::to_string(right) +
          ")");
    }
    std::fprintf(stderr,
                 "absubdiff: warning: corner compatibility gap %.3e / %.3e "
                 "exceeds %.3e; proceeding\n",
                 left, right, p.compat_tol);
  }
}

// One implicit time step with precomputed history weights. Returns the
// number of Picard iterations used (0 on the linear path).
int step_impl(const ProblemSpec& problem, const SolverConfig& config,
              const HistoryWeights& hw, Field& state, int n, Exec ex) {
  const SpaceTimeGrid& g = problem.grid;
  const int nx = g.n_x;
  const double dt = g.dt();
  const double dx = g.dx();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double alpha = problem.alpha.alpha;
  const double inv_alpha = 1.0 / alpha;
  const double c = hw.c;

  if (n < 1 || n > g.n_t) {
    throw std::invalid_argument("step: time index out of range");
  }

  // Known part of the discrete D_*^{1-alpha}u at t_n. Interior nodes get
  // the history sum h with the unknown-row contribution split off
  // (g_i = c u_i^n + h_i); boundary nodes get the full derivative of the
  // stored lam/mu traces, current increment included.
  std::vector<double> h(nx + 1);
#pragma omp parallel for if (ex == Exec::openmp)
  for (int i = 1; i < nx; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= n - 2; ++j) {
      acc += (state.at(i, j + 1) - state.at(i, j)) * hw.w[n - j];
    }
    h[i] = inv_alpha * acc - c * state.at(i, n - 1);
  }
  for (int i : {0, nx}) {
    const double bval = (i == 0) ? problem.lam(g.t(n)) : problem.mu(g.t(n));
    double acc = (bval - state.at(i, n - 1)) * hw.w[1];
    for (int j = 0; j <= n - 2; ++j) {
      acc += (state.at(i, j + 1) - state.at(i, j)) * hw.w[n - j];
    }
    h[i] = inv_alpha * acc;  // fully known: this is g at the boundary
  }

  // System matrix: positive diagonal, nonpositive off-diagonals,
  // strictly dominant by 1/dt (M-matrix).
  const int m = nx - 1;
  std::vector<double> lower(m - 1, -c * inv_dx2);
  std::vector<double> diag(m, 1.0 / dt + 2.0 * c * inv_dx2);
  std::vector<double> upper(m - 1, -c * inv_dx2);

  const double t_n = g.t(n);
  auto assemble_rhs = [&](const std::vector<double>& u_arg) {
    std::vector<double> rhs(m);
    for (int i = 1; i < nx; ++i) {
      double d2h = (h[i - 1] - 2.0 * h[i] + h[i + 1]) * inv_dx2;
      rhs[i - 1] = state.at(i, n - 1) / dt + d2h +
                   problem.forcing(g.x(i), t_n, u_arg[i - 1]);
    }
    return rhs;
  };

  std::vector<double> interior(m);
  for (int i = 1; i < nx; ++i) {
    interior[i - 1] = (config.picard_init == SolverConfig::PicardInit::zero)
                          ? 0.0
                          : state.at(i, n - 1);
  }

  int iterations = 0;
  if (problem.linear_flag) {
    interior = tridiagonal_solve(lower, diag, upper, assemble_rhs(interior));
  } else {
    // Damped Picard on F's u-argument. Once successive solutions agree to
    // picard_tol, one final undamped solve pins the returned row to the
    // linear system with its own F-argument, so the assembled-equation
    // residual stays at the roundoff level whatever the damping was.
    std::vector<double> f_arg = interior;
    std::vector<double> prev = interior;
    bool converged = false;
    double diff = 0.0;
    for (int it = 0; it < config.picard_max; ++it) {
      iterations = it + 1;
      std::vector<double> next =
          tridiagonal_solve(lower, diag, upper, assemble_rhs(f_arg));
      diff = 0.0;
      for (int k = 0; k < m; ++k) {
        diff = std::max(diff, std::fabs(next[k] - prev[k]));
      }
      if (it > 0 && diff <= config.picard_tol) {
        interior = tridiagonal_solve(lower, diag, upper, assemble_rhs(next));
        converged = true;
        break;
      }
      for (int k = 0; k < m; ++k) {
        f_arg[k] = config.damping * next[k] + (1.0 - config.damping) * f_arg[k];
      }
      prev = std::move(next);
      interior = prev;
    }
    if (!converged) {
      throw SolverError("solver: Picard iteration exhausted picard_max=" +
                            std::to_string(config.picard_max) +
                            " (last residual " + std::to_string(diff) + ")",
                        n, diff);
    }
  }

  state.at(0, n) = problem.lam(t_n);
  state.at(nx, n) = problem.mu(t_n);
  for (int i = 1; i < nx; ++i) {
    state.at(i, n) = interior[i - 1];
  }
  return iterations;
}

}  // namespace

SpaceTimeGrid::SpaceTimeGrid(double a_, double t_end_, int n_x_, int n_t_)
    : a(a_), t_end(t_end_), n_x(n_x_), n_t(n_t_) {
  if (!(a > 0.0) || !(t_end > 0.0)) {
    throw std::domain_error("SpaceTimeGrid: a and t_end must be positive");
  }
  if (n_x < 3) {
    throw std::domain_error("SpaceTimeGrid: need n_x >= 3 (interior nodes)");
  }
  if (n_t < 2) {
    throw std::domain_error("SpaceTimeGrid: need n_t >= 2");
  }
}

SampledFunction Field::time_trace(int i) const {
  std::vector<double> v(grid.n_t + 1);
  for (int n = 0; n <= grid.n_t; ++n) {
    v[n] = at(i, n);
  }
  return SampledFunction(TimeGrid(grid.t_end, grid.n_t), std::move(v));
}

double Field::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double Field::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

HistoryWeights history_weights(fracops::FracOrder alpha, int n_t, double dt) {
  validate_alpha(alpha.alpha);
  const double beta = 1.0 - alpha.alpha;
  HistoryWeights hw;
  hw.order_beta = beta;
  hw.lambda = beta / (1.0 - beta);
  hw.w = fracops::ab_weight_table(fracops::FracOrder(beta), n_t, dt);
  hw.c = hw.w[1] / alpha.alpha;
  return hw;
}

std::vector<double> tridiagonal_solve(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || rhs.size() != n || lower.size() != n - 1 ||
      upper.size() != n - 1) {
    throw std::invalid_argument("tridiagonal_solve: inconsistent sizes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    if (i > 0) {
      off += std::fabs(lower[i - 1]);
    }
    if (i + 1 < n) {
      off += std::fabs(upper[i]);
    }
    if (!(std::fabs(diag[i]) > off)) {
      throw std::invalid_argument(
          "tridiagonal_solve: diagonal dominance violated at row " +
          std::to_string(i));
    }
  }
  std::vector<double> cp(n - 1 > 0 ? n - 1 : 0), dp(n), x(n);
  double denom = diag[0];
  if (n > 1) {
    cp[0] = upper[0] / denom;
  }
  dp[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i - 1] * cp[i - 1];
    if (i + 1 < n) {
      cp[i] = upper[i] / denom;
    }
    dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / denom;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = dp[i] - cp[i] * x[i + 1];
  }
  return x;
}

void step(const ProblemSpec& problem, const SolverConfig& config, Field& state,
          int n, Exec ex) {
  validate_alpha(problem.alpha.alpha);
  HistoryWeights hw =
      history_weights(problem.alpha, problem.grid.n_t, problem.grid.dt());
  step_impl(problem, config, hw, state, n, ex);
}

Field solve(const ProblemSpec& problem, const SolverConfig& config, Exec ex,
            SolveStats* stats) {
  validate_alpha(problem.alpha.alpha);
  check_compatibility(problem);
  const SpaceTimeGrid& g = problem.grid;

  Field state(g);
  // Row 0 is phi everywhere, including the corners; boundary columns take
  // lam/mu from n = 1 on. For compatible data the corners agree anyway.
  for (int i = 0; i <= g.n_x; ++i) {
    state.at(i, 0) = problem.phi(g.x(i));
  }

  HistoryWeights hw = history_weights(problem.alpha, g.n_t, g.dt());
  int worst_iterations = 0;
  for (int n = 1; n <= g.n_t; ++n) {
    worst_iterations =
        std::max(worst_iterations, step_impl(problem, config, hw, state, n, ex));
  }
  if (stats != nullptr) {
    stats->max_picard_iterations = worst_iterations;
  }
  for (double v : state.values) {
    if (!std::isfinite(v)) {
      throw SolverError("solver: non-finite value in computed field", g.n_t,
                        0.0);
    }
  }
  return state;
}

double residual(const Field& field, const ProblemSpec& problem, Exec ex) {
  if (!(field.grid == problem.grid)) {
    throw std::invalid_argument("residual: field/problem grid mismatch");
  }
  const SpaceTimeGrid& g = field.grid;
  const double dt = g.dt();
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const fracops::FracOrder beta(1.0 - problem.alpha.alpha);

  // D_*^{1-alpha}u, recomputed column by column via fracops.
  Field dfield(g);
  const int nx = g.n_x;
#pragma omp parallel for if (ex == Exec::openmp)
  for (int i = 0; i <= nx; ++i) {
    SampledFunction d =
        fracops::ab_derivative(field.time_trace(i), beta, Exec::serial);
    for (int n = 0; n <= g.n_t; ++n) {
      dfield.at(i, n) = d.values[n];
    }
  }

  double worst = 0.0;
#pragma omp parallel for if (ex == Exec::openmp) reduction(max : worst)
  for (int n = 2; n <= g.n_t; ++n) {
    for (int i = 1; i < nx; ++i) {
      const double ut = (field.at(i, n) - field.at(i, n - 1)) / dt;
      const double d2 = (dfield.at(i - 1, n) - 2.0 * dfield.at(i, n) +
                         dfield.at(i + 1, n)) *
                        inv_dx2;
      const double r = ut - d2 - problem.forcing(g.x(i), g.t(n), field.at(i, n));
      worst = std::max(worst, std::fabs(r));
    }
  }
  return worst;
}

Field compute_w(const Field& field, fracops::FracOrder alpha, Exec ex) {
  validate_alpha(alpha.alpha);
  const SpaceTimeGrid& g = field.grid;
  const fracops::FracOrder beta(1.0 - alpha.alpha);
  Field w(g);
  const int nx = g.n_x;
#pragma omp parallel for if (ex == Exec::openmp)
  for (int i = 0; i <= nx; ++i) {
    SampledFunction d =
        fracops::ab_derivative(field.time_trace(i), beta, Exec::serial);
    for (int n = 0; n <= g.n_t; ++n) {
      w.at(i, n) = d.values[n];
    }
  }
  return w;
}

double pr_w_residual(const Field& u, const Field& w, fracops::FracOrder alpha,
                     const std::function<double(double, double)>& forcing,
                     Exec ex) {
  if (!(u.grid == w.grid)) {
    throw std::invalid_argument("pr_w_residual: grid mismatch");
  }
  const SpaceTimeGrid& g = u.grid;
  const double a = alpha.alpha;
  const double dt = g.dt();
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const int nx = g.n_x;

  // Discrete RL derivative of order alpha of each w-column.
  Field dw(g);
#pragma omp parallel for if (ex == Exec::openmp)
  for (int i = 0; i <= nx; ++i) {
    SampledFunction d =
        fracops::rl_derivative(w.time_trace(i), alpha, Exec::serial);
    for (int n = 0; n <= g.n_t; ++n) {
      dw.at(i, n) = d.values[n];
    }
  }

  double worst = 0.0;
#pragma omp parallel for if (ex == Exec::openmp) reduction(max : worst)
  for (int n = 2; n <= g.n_t; ++n) {
    for (int i = 1; i < nx; ++i) {
      const double wt = (w.at(i, n) - w.at(i, n - 1)) / dt;
      const double wxx =
          (w.at(i - 1, n) - 2.0 * w.at(i, n) + w.at(i + 1, n)) * inv_dx2;
      const double r =
          a * wt + (1.0 - a) * dw.at(i, n) - wxx - forcing(g.x(i), g.t(n));
      worst = std::max(worst, std::fabs(r));
    }
  }
  return worst;
}

}  // namespace absubdiff::solver
