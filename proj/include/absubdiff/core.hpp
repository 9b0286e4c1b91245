#pragma once

#include <limits>
#include <string>

namespace absubdiff {

inline constexpr double pi = 3.14159265358979323846;

/// Pick between the serial reference path and the OpenMP kernel.
/// Both paths run the per-node arithmetic in the same order, so the
/// results are bitwise identical; the serial path exists as the
/// reference for tests and benchmarks.
enum class Exec { serial, openmp };

inline constexpr double not_a_value = std::numeric_limits<double>::quiet_NaN();

/// Outcome of one verification run (a lemma, property, or probe).
struct CheckReport {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // the quantity the check bounds
  double bound = 0.0;     // the bound it is compared against
  double slack = 0.0;     // distance from violation; negative means failed
  std::string details;
};

}  // namespace absubdiff
