#pragma once

#include <cstdint>
#include <vector>

#include "absubdiff/core.hpp"
#include "absubdiff/fracops.hpp"
#include "absubdiff/grid.hpp"

namespace absubdiff::extremum {

enum class Kind { maximum, minimum };

/// One extremum-lemma verification. slack folds every inequality the
/// lemma asserts, so passed <=> slack >= -tol.
struct ExtremumReport {
  int location_index = 0;  // first-occurrence argext on the grid
  double lhs = 0.0;        // fractional derivative at the extremum
  double rhs = 0.0;        // the lemma's bound
  double slack = 0.0;
  double tol = 0.0;
  bool passed = false;
};

/// Riemann-Liouville lemma at the discrete maximum t0:
///   D^alpha f(t0) >= t0^{-alpha} f(t0) / Gamma(1-alpha),
/// and D^alpha f(t0) >= 0 whenever f(t0) >= 0. The maximum must be
/// interior (throws std::invalid_argument otherwise). Default tol is
/// 10*dt: the scheme is first order next to the singular kernel.
ExtremumReport rl_extremum_check(const SampledFunction& f,
                                 fracops::FracOrder alpha, double tol = -1.0);

/// Atangana-Baleanu lemma at the discrete extremum t0 (boundary nodes
/// allowed). For a maximum,
///   D_* f(t0) >= E_{a,1}[-a t0^a/(1-a)] (f(t0)-f(0)) / (1-a) >= 0,
/// reversed for a minimum. Default tol 5*dt^2 + 1e-9: the discretization
/// is exact on linears, and the Abel-summation structure of the positive
/// decreasing weights makes the discrete inequality hold up to roundoff.
ExtremumReport ab_extremum_check(const SampledFunction& f,
                                 fracops::FracOrder alpha, Kind kind,
                                 double tol = -1.0);

/// Deterministic-by-seed family of trigonometric polynomials of the given
/// degree with coefficients in [-1,1], sampled on grid. When
/// interior_max_only is set, draws whose discrete maximum falls on a
/// boundary node are regenerated (still deterministically).
std::vector<SampledFunction> random_c1_family(std::uint64_t seed, int count,
                                              int degree, const TimeGrid& grid,
                                              bool interior_max_only = true);

}  // namespace absubdiff::extremum
