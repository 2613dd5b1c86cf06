#include "nlsym/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "nlsym/error.hpp"

namespace nlsym {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc()) throw InvalidArgument("cannot format value");
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size())
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  return value;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    parts.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

GridSpec parse_grid_preamble(const std::string& line) {
  // "# grid dim=<N> cells=<n> half_extent=<L>"
  std::istringstream in(line.substr(1));
  std::string word;
  int dim = 0;
  int cells = 0;
  double half_extent = 0.0;
  in >> word;
  while (in >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = word.substr(0, eq);
    const std::string val = word.substr(eq + 1);
    if (key == "dim") dim = static_cast<int>(parse_double(val));
    else if (key == "cells") cells = static_cast<int>(parse_double(val));
    else if (key == "half_extent") half_extent = parse_double(val);
  }
  return GridSpec(dim, half_extent, cells);
}

}  // namespace

void write_field_table(std::ostream& out, const GridField& field) {
  const GridSpec& grid = field.grid();
  const int dim = grid.dimension();
  out << "# grid dim=" << dim << " cells=" << grid.cells_per_axis()
      << " half_extent=" << format_double(grid.half_extent()) << '\n';
  for (int a = 0; a < dim; ++a) out << 'i' << a << ',';
  for (int a = 0; a < dim; ++a) out << 'x' << a << ',';
  out << "value\n";
  for (CellIndex c : field.mask().cells()) {
    const AxisIndex idx = grid.axis_index(c);
    const Point x = grid.center(c);
    for (int a = 0; a < dim; ++a) out << idx[a] << ',';
    for (int a = 0; a < dim; ++a) out << format_double(x[a]) << ',';
    out << format_double(field.value(c)) << '\n';
  }
}

GridField read_field_table(std::istream& in, const std::optional<GridSpec>& grid_override) {
  std::optional<GridSpec> grid = grid_override;
  std::string line;
  bool header_seen = false;
  std::vector<CellIndex> cells;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!grid && line.rfind("# grid", 0) == 0) grid = parse_grid_preamble(line);
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (!grid) throw InvalidArgument("field table has no grid preamble and no grid was given");
    const int dim = grid->dimension();
    const auto parts = split_commas(line);
    if (parts.size() != static_cast<std::size_t>(2 * dim + 1))
      throw InvalidArgument("field table row has " + std::to_string(parts.size()) + " columns");
    AxisIndex idx{0, 0};
    for (int a = 0; a < dim; ++a) idx[a] = static_cast<int>(parse_double(parts[a]));
    if (!grid->in_box(idx)) throw InvalidArgument("field table cell outside the grid box");
    cells.push_back(grid->flat_index(idx));
    values.push_back(parse_double(parts[2 * dim]));
  }
  if (!grid) throw InvalidArgument("field table is empty");
  DomainMask mask(*grid, cells);
  GridField field(mask);
  for (std::size_t k = 0; k < cells.size(); ++k) field.set(cells[k], values[k]);
  return field;
}

void save_field(const std::string& path, const GridField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  write_field_table(out, field);
  if (!out) throw std::ios_base::failure("write to " + path + " failed");
}

GridField load_field(const std::string& path, const std::optional<GridSpec>& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_field_table(in, grid);
}

}  // namespace nlsym
