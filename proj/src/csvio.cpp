#include "absubdiff/csvio.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace absubdiff::csvio {

namespace {

void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error("csv: " + path + ": " + why);
}

std::vector<double> parse_row(const std::string& line, std::size_t want,
                              const std::string& path) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    out.push_back(std::strtod(cell.c_str(), &end));
  }
  if (out.size() != want) {
    fail(path, "expected " + std::to_string(want) + " columns, got row '" +
                   line + "'");
  }
  return out;
}

}  // namespace

void write_field_csv(const solver::Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    fail(path, "cannot open for writing");
  }
  os << "x,t,u\n";
  char buf[96];
  for (int n = 0; n <= f.grid.n_t; ++n) {
    for (int i = 0; i <= f.grid.n_x; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid.x(i),
                    f.grid.t(n), f.at(i, n));
      os << buf;
    }
  }
  if (!os) {
    fail(path, "write failed");
  }
}

solver::Field read_field_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    fail(path, "cannot open");
  }
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,t,u", 0) != 0) {
    fail(path, "missing 'x,t,u' header");
  }
  std::vector<std::array<double, 3>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    auto r = parse_row(line, 3, path);
    rows.push_back({r[0], r[1], r[2]});
  }
  if (rows.size() < 2) {
    fail(path, "too few rows");
  }
  // Count the first time block to get n_x.
  std::size_t nx1 = 1;
  while (nx1 < rows.size() && rows[nx1][1] == rows[0][1]) {
    ++nx1;
  }
  if (rows.size() % nx1 != 0) {
    fail(path, "row count is not a multiple of the space block");
  }
  const std::size_t nt1 = rows.size() / nx1;
  const int n_x = static_cast<int>(nx1) - 1;
  const int n_t = static_cast<int>(nt1) - 1;
  const double a = rows[nx1 - 1][0];
  const double t_end = rows.back()[1];
  solver::SpaceTimeGrid g(a, t_end, n_x, n_t);
  solver::Field f(g);
  for (int n = 0; n <= n_t; ++n) {
    for (int i = 0; i <= n_x; ++i) {
      const auto& r = rows[static_cast<std::size_t>(n) * nx1 + i];
      if (std::fabs(r[0] - g.x(i)) > 1e-12 * (1.0 + a) ||
          std::fabs(r[1] - g.t(n)) > 1e-12 * (1.0 + t_end)) {
        fail(path, "nodes are not a uniform grid in row-major time order");
      }
      f.at(i, n) = r[2];
    }
  }
  return f;
}

void write_sampled_csv(const SampledFunction& f, const std::string& path,
                       const std::string& value_column) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    fail(path, "cannot open for writing");
  }
  os << "t," << value_column << "\n";
  char buf[64];
  for (int j = 0; j < f.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid.node(j),
                  f.values[j]);
    os << buf;
  }
  if (!os) {
    fail(path, "write failed");
  }
}

SampledFunction read_sampled_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    fail(path, "cannot open");
  }
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,", 0) != 0) {
    fail(path, "missing 't,<name>' header");
  }
  std::vector<double> ts, vs;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    auto r = parse_row(line, 2, path);
    ts.push_back(r[0]);
    vs.push_back(r[1]);
  }
  if (ts.size() < 3) {
    fail(path, "need at least 3 nodes");
  }
  if (ts.front() != 0.0) {
    fail(path, "grid must start at t = 0");
  }
  const int n = static_cast<int>(ts.size()) - 1;
  TimeGrid g(ts.back(), n);
  for (int j = 0; j <= n; ++j) {
    if (std::fabs(ts[j] - g.node(j)) > 1e-12 * (1.0 + g.t_end)) {
      fail(path, "non-uniform time grid at row " + std::to_string(j));
    }
  }
  return SampledFunction(g, std::move(vs));
}

void write_plot_data(const solver::Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    fail(path, "cannot open for writing");
  }
  char buf[96];
  for (int n = 0; n <= f.grid.n_t; ++n) {
    for (int i = 0; i <= f.grid.n_x; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", f.grid.x(i),
                    f.grid.t(n), f.at(i, n));
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace absubdiff::csvio
