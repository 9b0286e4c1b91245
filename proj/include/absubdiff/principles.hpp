#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "absubdiff/core.hpp"
#include "absubdiff/solver.hpp"

namespace absubdiff::principles {

enum class TheoremId { T3_1, T3_2, C1, C2, T3_3, T3_4, T4_1, T4_2 };

std::string to_string(TheoremId id);

struct HypothesisAudit {
  std::string name;
  bool satisfied = false;
  double measured = 0.0;
};

/// One theorem experiment. passed implies every hypothesis satisfied; a
/// hypothesis violation makes the report not-applicable instead of failed.
struct TheoremReport {
  TheoremId theorem_id = TheoremId::T3_1;
  std::string instance;
  std::vector<HypothesisAudit> hypotheses;
  double claimed_bound = 0.0;
  double measured_value = 0.0;
  double slack = 0.0;  // >= -tol on pass
  double tol = 0.0;
  bool passed = false;
  bool applicable = true;
};

/// Minimum principle (Theorem 3.1): with F >= 0 and nondecreasing lam, mu,
///   u >= min{lam, mu, phi} everywhere. Audits the hypotheses on the grid
/// data before asserting the conclusion.
TheoremReport min_bound_check(const solver::ProblemSpec& problem,
                              const solver::Field& field, double tol);

/// Maximum principle (Theorem 3.2): with F <= 0,
///   u <= max{lam, mu, phi} everywhere.
TheoremReport max_bound_check(const solver::ProblemSpec& problem,
                              const solver::Field& field, double tol);

enum class SignKind { nonneg, nonpos };

/// Corollaries: zero data and signed forcing give a signed solution.
TheoremReport sign_preservation_check(const solver::ProblemSpec& problem,
                                      const solver::Field& field,
                                      SignKind sign, double tol);

/// Theorems 3.3 / 4.1: two solves under different nonlinear-iteration
/// settings must agree to 10 * max(picard_tol); bitwise for linear
/// problems. Audits F nonincreasing in u (sampled along the computed
/// trajectories) in the nonlinear case.
TheoremReport uniqueness_experiment(const solver::ProblemSpec& problem,
                                    const solver::SolverConfig& config_a,
                                    const solver::SolverConfig& config_b);

/// Theorems 3.4 / 4.2: perturbing the initial data by at most delta moves
/// the solution by at most delta (homogeneous boundaries).
TheoremReport stability_experiment(
    const solver::ProblemSpec& problem,
    const std::function<double(double)>& phi_alt, double tol);

/// The registered canonical instance of every theorem (8 reports), run on
/// the canonical 40x160 grid at alpha = 1/2.
std::vector<TheoremReport> canonical_suite(Exec ex = Exec::openmp);

/// The canonical maximum-principle instances (Theorems 3.1/3.2 and both
/// corollaries, two instances each where the examples give two).
std::vector<TheoremReport> canonical_max_principle_suite(
    Exec ex = Exec::openmp);

/// Seeded randomized instances (count per theorem), hypotheses enforced
/// by construction and still audited.
std::vector<TheoremReport> randomized_suite(std::uint64_t seed, int count,
                                            Exec ex = Exec::openmp);

}  // namespace absubdiff::principles
