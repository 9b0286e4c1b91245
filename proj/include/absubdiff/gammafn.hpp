#pragma once

namespace absubdiff {

/// log|Gamma(x)|, Lanczos approximation, any non-pole real x.
double lgamma_fn(double x);

/// Gamma(x) for real x (reflection formula for x < 0.5).
/// Returns +-inf at the poles (x = 0, -1, -2, ...).
double gamma_fn(double x);

/// 1/Gamma(x); exactly 0 at the poles. Well behaved on the negative
/// axis, where it grows instead of overflowing early.
double rgamma_fn(double x);

/// Decomposition of 1/Gamma(x) as sign * exp(log_abs).
/// is_pole is true (and sign 0) when x is a non-positive integer.
struct LogRGamma {
  double log_abs;
  int sign;
  bool is_pole;
};
LogRGamma lrgamma_fn(double x);

}  // namespace absubdiff
