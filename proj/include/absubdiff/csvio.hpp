#pragma once

#include <string>

#include "absubdiff/grid.hpp"
#include "absubdiff/solver.hpp"

namespace absubdiff::csvio {

/// Field CSV: header "x,t,u", one row per node, row-major by time then
/// space, 17 significant digits, LF line endings. Lossless for doubles.
void write_field_csv(const solver::Field& f, const std::string& path);

/// Reads a field CSV back, reconstructing the uniform grid; throws
/// std::runtime_error on malformed files or non-uniform node spacing.
solver::Field read_field_csv(const std::string& path);

/// Sampled-function CSV: header "t,f" (any second column name accepted on
/// read); not_a_value is written as "nan".
void write_sampled_csv(const SampledFunction& f, const std::string& path,
                       const std::string& value_column = "f");
SampledFunction read_sampled_csv(const std::string& path);

/// Plot-ready whitespace-separated data: "x t u" triplets with a blank
/// line between time blocks.
void write_plot_data(const solver::Field& f, const std::string& path);

}  // namespace absubdiff::csvio
