#pragma once

#include "absubdiff/core.hpp"
#include "absubdiff/grid.hpp"

namespace absubdiff::fracops {

/// Fractional order strictly inside (0,1); the endpoints are rejected.
/// Normalization M(alpha) is fixed to 1 throughout.
struct FracOrder {
  double alpha;
  explicit FracOrder(double a);
};

/// Riemann-Liouville integral I^alpha f, alpha > 0, base point 0.
/// Product-trapezoidal: the kernel (t-s)^{alpha-1} is integrated exactly
/// against the piecewise-linear interpolant of f, so the result is exact
/// for affine f. Node 0 maps to 0.
SampledFunction rl_integral(const SampledFunction& f, double alpha,
                            Exec ex = Exec::openmp);

/// Riemann-Liouville derivative D^alpha f = d/dt I^{1-alpha} f, by exact
/// differentiation of the product-integration weights (L1 type). Node 0
/// is the not_a_value sentinel: the continuous object is singular there
/// whenever f(0) != 0.
SampledFunction rl_derivative(const SampledFunction& f, FracOrder a,
                              Exec ex = Exec::openmp);

/// Atangana-Baleanu derivative, product-integration discretization with
/// lambda = alpha/(1-alpha):
///   D f(t_n) = 1/(1-alpha) * sum_j (f_{j+1}-f_j) w_{n,j},
///   w_{n,j}  = [P(t_n-t_j) - P(t_n-t_{j+1})]/dt,  P = ml_primitive.
/// Exact for piecewise-linear f; annihilates constants bitwise. Node 0
/// maps to 0.
SampledFunction ab_derivative(const SampledFunction& f, FracOrder a,
                              Exec ex = Exec::openmp);

/// The integration-by-parts representation of the same operator:
///   1/(1-alpha) (f(t) - E_{a,1}[-lambda t^a] f(0))
///   - alpha/(1-alpha)^2 * integral of f(tau) (t-tau)^{a-1}
///     E_{a,a}[-lambda (t-tau)^a] dtau,
/// with the singular kernel integrated exactly against the linear
/// interpolant of f (kernel moments come from E_{a,1} and P).
SampledFunction ab_derivative_alt(const SampledFunction& f, FracOrder a,
                                  Exec ex = Exec::openmp);

/// Atangana-Baleanu integral (1-alpha) f + alpha I^alpha f, nodewise.
SampledFunction ab_integral(const SampledFunction& f, FracOrder a,
                            Exec ex = Exec::openmp);

/// Inversion identity check: r = sup_n |I_* D_* f - (f - f(0))|.
/// Passes iff r <= tol.
CheckReport check_inversion(const SampledFunction& f, FracOrder a, double tol,
                            Exec ex = Exec::openmp);

/// Convolution weights W[m] = [P(m dt) - P((m-1) dt)]/dt, m = 1..n, for
/// the AB kernel of the given order. Shared by ab_derivative and the
/// solver; positive and decreasing in m.
std::vector<double> ab_weight_table(FracOrder a, int n, double dt);

}  // namespace absubdiff::fracops
