#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "absubdiff/gammafn.hpp"

using namespace absubdiff;

TEST_CASE("gamma matches the standard library on the positive axis") {
  for (int k = 1; k <= 1690; ++k) {
    const double x = 0.1 + k * 0.1;
    const double got = gamma_fn(x);
    const double want = std::tgamma(x);
    CHECK(std::fabs(got - want) <= 5e-13 * std::fabs(want));
  }
}

TEST_CASE("log gamma matches the standard library") {
  for (double x : {0.05, 0.37, 1.0, 2.5, 11.0, 40.5, 123.4, 1234.5}) {
    CHECK(std::fabs(lgamma_fn(x) - std::lgamma(x)) <=
          1e-12 * std::max(1.0, std::fabs(std::lgamma(x))));
  }
}

TEST_CASE("small integers are exact") {
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    CHECK(gamma_fn(static_cast<double>(n)) == fact);
    CHECK(rgamma_fn(static_cast<double>(n)) == 1.0 / fact);
    fact *= n;
  }
}

TEST_CASE("negative axis goes through reflection") {
  for (double x : {-0.5, -1.5, -2.3, -5.7, -9.1, -19.3}) {
    const double got = gamma_fn(x);
    const double want = std::tgamma(x);
    CHECK(std::fabs(got - want) <= 2e-12 * std::fabs(want));
  }
}

TEST_CASE("poles") {
  for (double x : {0.0, -1.0, -2.0, -7.0}) {
    CHECK(rgamma_fn(x) == 0.0);
    CHECK(std::isinf(gamma_fn(x)));
    CHECK(lrgamma_fn(x).is_pole);
    CHECK(lrgamma_fn(x).sign == 0);
  }
}

TEST_CASE("lrgamma decomposition is consistent with rgamma") {
  for (double x : {0.3, 2.7, -0.7, -3.3, -12.6, 31.0}) {
    const LogRGamma lr = lrgamma_fn(x);
    const double rebuilt = lr.sign * std::exp(lr.log_abs);
    CHECK(rebuilt == doctest::Approx(rgamma_fn(x)).epsilon(1e-12));
  }
}

TEST_CASE("rgamma grows but stays finite far down the negative axis") {
  const LogRGamma lr = lrgamma_fn(-171.5);
  CHECK(!lr.is_pole);
  CHECK(std::isfinite(lr.log_abs));
}
