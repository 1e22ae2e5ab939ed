#pragma once

// Plain-text complex files and SQL export.
//
//   DIM n d
//   VERTEX name x1 ... xd
//   CELL k name            (1 <= k <= n)
//   BND cell boundary sigma
//
// '#' starts a comment. Names are unique across all dimensions.

#include <string>

#include "polyoverlay/complex_core.hpp"

namespace polyoverlay {

/// Throws ParseError carrying the offending line number.
RelationalComplex parse_complex(const std::string& text);
RelationalComplex read_complex_file(const std::string& path);

/// Normalized form: dimensions ascending, names in lexicographic order,
/// coordinates in shortest round-trip decimal.
std::string write_complex(const RelationalComplex& complex);
void write_complex_file(const RelationalComplex& complex, const std::string& path);

/// Shortest round-trip decimal for a double.
std::string format_number(double value);

/// Table M(cell, boundary, sigma) with one row per boundary entry, followed by
/// the M_squared product view.
std::string export_sql(const RelationalComplex& complex);

} // namespace polyoverlay
