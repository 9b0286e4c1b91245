#pragma once

// Extended-precision scalar used by the Mittag-Leffler series when the
// alternating sum cancels too many digits for double. On GCC this is
// __float128; elsewhere it degrades to long double.

#include <cmath>

#if defined(ABSUBDIFF_HAVE_FLOAT128)
#include <quadmath.h>
#endif

namespace absubdiff {

#if defined(ABSUBDIFF_HAVE_FLOAT128)

using qreal = __float128;

inline qreal q_exp(qreal x) { return expq(x); }
inline qreal q_log(qreal x) { return logq(x); }
inline qreal q_fabs(qreal x) { return fabsq(x); }
inline double q_to_double(qreal x) { return static_cast<double>(x); }
inline qreal q_pi() { return acosq(qreal(-1)); }

inline constexpr double q_epsilon = 1.93e-34;

#else

using qreal = long double;

inline qreal q_exp(qreal x) { return std::exp(x); }
inline qreal q_log(qreal x) { return std::log(x); }
inline qreal q_fabs(qreal x) { return std::fabs(x); }
inline double q_to_double(qreal x) { return static_cast<double>(x); }
inline qreal q_pi() { return 3.141592653589793238462643383279502884L; }

inline constexpr double q_epsilon = 1.1e-19;

#endif

/// log Gamma(x) in extended precision, x > 0 only. Stirling series with
/// upward recurrence below x = 30; ~1e-34 relative with __float128.
inline qreal q_lgamma(qreal x) {
  // B_{2j} / (2j (2j-1)), j = 1..16, as exact fractions.
  struct Frac {
    long long num;
    long long den;
  };
  static constexpr Frac kCoef[16] = {
      {1, 12},
      {-1, 360},
      {1, 1260},
      {-1, 1680},
      {1, 1188},
      {-691, 360360},
      {1, 156},
      {-3617, 122400},
      {43867, 244188},
      {-174611, 125400},
      {854513, 63756},
      {-236364091, 1506960},
      {8553103, 3900},
      {-23749461029LL, 657720},
      {8615841276005LL, 12460020},
      {-7709321041217LL, 505920},
  };

  qreal shift_prod = 1;
  while (x < 30) {
    shift_prod *= x;
    x += 1;
  }
  const qreal shift = -q_log(shift_prod);
  const qreal half_log_two_pi = q_log(2 * q_pi()) / 2;
  qreal inv2 = 1 / (x * x);
  qreal series = 0;
  qreal p = 1 / x;  // x^{-(2j-1)}
  for (int j = 0; j < 16; ++j) {
    series += (qreal(kCoef[j].num) / qreal(kCoef[j].den)) * p;
    p *= inv2;
  }
  return shift + (x - qreal(0.5)) * q_log(x) - x + half_log_two_pi + series;
}

}  // namespace absubdiff
