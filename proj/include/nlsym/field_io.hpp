#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "nlsym/grid.hpp"

namespace nlsym {

/// Shortest decimal that round-trips to the same double; locale independent.
std::string format_double(double value);
/// Parses a decimal produced by format_double (or any plain decimal); throws InvalidArgument.
double parse_double(std::string_view text);

/// Writes a field as a comma-separated table.
///
///   # grid dim=2 cells=5 half_extent=1
///   i0,i1,x0,x1,value
///   0,2,-0.8,0,0.25
///
/// One row per mask cell, in cell order. Values round-trip bit-exactly.
void write_field_table(std::ostream& out, const GridField& field);

/// Reads a table written by write_field_table. The grid comes from the
/// `# grid` preamble unless `grid` is supplied.
GridField read_field_table(std::istream& in, const std::optional<GridSpec>& grid = std::nullopt);

void save_field(const std::string& path, const GridField& field);
GridField load_field(const std::string& path, const std::optional<GridSpec>& grid = std::nullopt);

}  // namespace nlsym
