#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace absubdiff {

/// Uniform grid on [0, t_end] with n_steps intervals (n_steps + 1 nodes).
struct TimeGrid {
  double t_end;
  int n_steps;

  TimeGrid(double t_end_, int n_steps_) : t_end(t_end_), n_steps(n_steps_) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
      throw std::domain_error("TimeGrid: t_end must be positive and finite");
    }
    if (n_steps < 2) {
      throw std::domain_error("TimeGrid: need at least 2 steps");
    }
  }

  double dt() const { return t_end / n_steps; }
  int node_count() const { return n_steps + 1; }
  double node(int j) const { return (j * t_end) / n_steps; }
  bool operator==(const TimeGrid&) const = default;
};

/// Real values of a scalar function on the nodes of a TimeGrid.
/// Values must be finite; the one sanctioned exception is a quiet-NaN
/// sentinel at node 0, which rl_derivative uses to mark the singular
/// origin.
struct SampledFunction {
  TimeGrid grid;
  std::vector<double> values;

  SampledFunction(TimeGrid g, std::vector<double> v)
      : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.node_count()) {
      throw std::invalid_argument(
          "SampledFunction: value count " + std::to_string(values.size()) +
          " does not match grid node count " +
          std::to_string(grid.node_count()));
    }
    for (std::size_t j = 1; j < values.size(); ++j) {
      if (!std::isfinite(values[j])) {
        throw std::invalid_argument(
            "SampledFunction: non-finite value at node " + std::to_string(j));
      }
    }
  }

  /// Samples fn on the grid nodes.
  static SampledFunction sample(TimeGrid g,
                                const std::function<double(double)>& fn) {
    std::vector<double> v(g.node_count());
    for (int j = 0; j < g.node_count(); ++j) {
      v[j] = fn(g.node(j));
    }
    return SampledFunction(g, std::move(v));
  }

  int size() const { return static_cast<int>(values.size()); }
};

}  // namespace absubdiff
