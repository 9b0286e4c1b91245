#pragma once

#include <span>

#include "absubdiff/core.hpp"

namespace absubdiff::mlf {

/// Order pair (alpha, beta) of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
/// Construction rejects parameters outside the supported envelope
/// alpha in (0,2], beta in (0,4].
struct MlParams {
  double alpha;
  double beta;
  MlParams(double a, double b);
};

/// E_{alpha,beta}(z) on the real line.
///
/// Evaluation strategy: power series while the largest series term is
/// small enough for double; __float128 accumulation when the alternating
/// sum (z < 0) cancels more digits than double carries; smallest-term
/// truncated asymptotic expansion -sum_k z^{-k}/Gamma(beta - alpha k) far
/// out on the negative axis. alpha = 1 and alpha = 2 with beta in {1,2}
/// reduce to exp/expm1 and cosh/cos closed forms.
///
/// Throws std::domain_error on envelope violations or non-finite z, and
/// std::overflow_error when the value exceeds the double range.
double ml_eval(const MlParams& p, double z);

/// The antiderivative P(tau) = tau * E_{alpha,2}(-lambda tau^alpha) of the
/// kernel E_{alpha,1}(-lambda tau^alpha); P(0) = 0, P' > 0.
/// alpha in (0,1] (alpha = 1 is the exponential limit), lambda > 0,
/// tau >= 0 (negative tau throws std::domain_error).
double ml_primitive(double alpha, double lambda, double tau);

/// Convenience: the AB kernel E_{alpha,1}(-lambda * tau^alpha).
double ab_kernel(double alpha, double lambda, double tau);

/// Checks the two kernel-positivity facts behind the extremum lemma:
/// E_{alpha,1}(-tau) positive and nonincreasing on the grid, and
/// E_{alpha,alpha}(-tau) > 0 at every grid point. The grid must be
/// strictly increasing and positive.
CheckReport ml_complete_monotone_probe(double alpha,
                                       std::span<const double> grid,
                                       Exec ex = Exec::openmp);

}  // namespace absubdiff::mlf
