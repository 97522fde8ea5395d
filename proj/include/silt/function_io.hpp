#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "silt/grid_function.hpp"

namespace silt {

/// Builds a GridFunction from a name:
///   const1 | zero | indicator:a:b | sin:m | hat:c:w | e | aux:j | file:<path.csv>
/// `sin:m` is sin(m pi s / T) scaled to unit norm, `hat:c:w` the unit-height
/// tent on [c - w, c + w], `e` the first auxiliary direction. A bare path
/// ending in .csv is read as a file.
GridFunction parse_function(const std::string& spec, const Grid& grid, std::size_t aux_dim = 0);

/// CSV: header `node,value`, one row per cell (cell averages), then when
/// aux_dim > 0 a block with header `aux,value` and rows `j,value`.
void write_function_csv(std::ostream& out, const GridFunction& f);
GridFunction read_function_csv(std::istream& in, const Grid& grid, std::size_t aux_dim,
                               const std::string& source = "<stream>");

/// Comma-separated reals; errors name the offending token.
std::vector<double> parse_real_list(const std::string& text);

/// Comma-separated 1-based indices, returned 0-based.
std::vector<std::size_t> parse_index_list(const std::string& text);

}  // namespace silt
