#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "absubdiff/core.hpp"
#include "absubdiff/fracops.hpp"

namespace absubdiff::solver {

/// Uniform grid on [0,a] x [0,T].
struct SpaceTimeGrid {
  double a;
  double t_end;
  int n_x;
  int n_t;

  SpaceTimeGrid(double a_, double t_end_, int n_x_, int n_t_);

  double dx() const { return a / n_x; }
  double dt() const { return t_end / n_t; }
  double x(int i) const { return (i * a) / n_x; }
  double t(int n) const { return (n * t_end) / n_t; }
  bool operator==(const SpaceTimeGrid&) const = default;
};

/// u(x_i, t_n) on a SpaceTimeGrid, time-major storage.
struct Field {
  SpaceTimeGrid grid;
  std::vector<double> values;  // (n_t+1) rows of (n_x+1) values

  explicit Field(SpaceTimeGrid g)
      : grid(g),
        values(static_cast<std::size_t>(g.n_t + 1) * (g.n_x + 1), 0.0) {}

  double& at(int i, int n) {
    return values[static_cast<std::size_t>(n) * (grid.n_x + 1) + i];
  }
  double at(int i, int n) const {
    return values[static_cast<std::size_t>(n) * (grid.n_x + 1) + i];
  }

  /// Time trace at a fixed spatial node, as a SampledFunction.
  SampledFunction time_trace(int i) const;

  double min_value() const;
  double max_value() const;
};

enum class CompatPolicy { warn, strict };

/// Problem data of the sub-diffusion equation
///   u_t = (D_*^{1-alpha} u)_xx + F(x,t,u)  on (0,a) x (0,T],
///   u(x,0) = phi(x), u(0,t) = lam(t), u(a,t) = mu(t).
struct ProblemSpec {
  fracops::FracOrder alpha;
  SpaceTimeGrid grid;
  std::function<double(double)> phi;
  std::function<double(double)> lam;
  std::function<double(double)> mu;
  std::function<double(double, double, double)> forcing;  // (x, t, u)
  bool linear_flag = true;  // true when forcing ignores u
  CompatPolicy compat = CompatPolicy::warn;
  double compat_tol = 1e-9;
};

struct SolverConfig {
  double picard_tol = 1e-10;
  int picard_max = 100;
  double damping = 1.0;  // applied to the F-argument sequence, in (0,1]
  enum class PicardInit { previous_row, zero };
  PicardInit picard_init = PicardInit::previous_row;
};

/// Nonlinear iteration did not converge (or a guarded invariant failed);
/// carries the failing time index.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int time_index, double last_residual)
      : std::runtime_error(what),
        time_index(time_index),
        last_residual(last_residual) {}
  int time_index;
  double last_residual;
};

/// Convolution weights of the discrete D_*^{beta} with beta = 1-alpha (the
/// order appearing in the equation), plus the current-step coefficient
/// c = P_beta(dt)/(alpha dt) that multiplies the unknown row.
struct HistoryWeights {
  double order_beta;
  double lambda;          // beta/(1-beta) = (1-alpha)/alpha
  double c;               // = w[1]/alpha, constant in n
  std::vector<double> w;  // w[m], m = 1..n_t (w[0] unused)
};

HistoryWeights history_weights(fracops::FracOrder alpha, int n_t, double dt);

/// Thomas elimination. diag has n entries, lower/upper n-1. Requires
/// strict diagonal dominance (throws std::invalid_argument otherwise).
std::vector<double> tridiagonal_solve(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

struct SolveStats {
  int max_picard_iterations = 0;  // worst step; 0 on the linear path
};

/// Fills time-row n of state (rows 0..n-1 must already be computed).
/// Implicit in both the diffusion term and F's u-argument; the linear
/// path is a single tridiagonal solve, the nonlinear path damped Picard.
void step(const ProblemSpec& problem, const SolverConfig& config, Field& state,
          int n, Exec ex = Exec::openmp);

/// Marches the full field. Row 0 and the boundary columns are assigned
/// from phi, lam, mu exactly; solve is deterministic for fixed inputs.
Field solve(const ProblemSpec& problem, const SolverConfig& config = {},
            Exec ex = Exec::openmp, SolveStats* stats = nullptr);

/// Consistency diagnostic: sup over interior nodes (n >= 2) of
/// |u_t - d2x D_*^{1-alpha} u - F|, with the nonlocal term recomputed
/// independently through fracops::ab_derivative column by column.
double residual(const Field& field, const ProblemSpec& problem,
                Exec ex = Exec::openmp);

/// w = D_*^{1-alpha} u columnwise; w(.,0) = 0 by construction.
Field compute_w(const Field& field, fracops::FracOrder alpha,
                Exec ex = Exec::openmp);

/// Loose diagnostic for the auxiliary problem satisfied by w:
///   alpha w_t + (1-alpha) D^alpha w = w_xx + F.
/// (The derivation chain via the AB integral fixes the +(1-alpha) sign.)
/// Returns the sup-residual over interior nodes with n >= 2.
double pr_w_residual(const Field& u, const Field& w, fracops::FracOrder alpha,
                     const std::function<double(double, double)>& forcing,
                     Exec ex = Exec::openmp);

}  // namespace absubdiff::solver
