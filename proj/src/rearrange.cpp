#include "nlsym/rearrange.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "nlsym/convolution.hpp"
#include "nlsym/error.hpp"

namespace nlsym {

std::vector<CellIndex> radial_order(const GridSpec& grid) {
  std::vector<CellIndex> order(grid.cell_count());
  std::iota(order.begin(), order.end(), CellIndex{0});
  std::sort(order.begin(), order.end(), [&](CellIndex a, CellIndex b) {
    const auto ra = grid.doubled_radius2(a);
    const auto rb = grid.doubled_radius2(b);
    if (ra != rb) return ra < rb;
    return grid.doubled_offset(a) < grid.doubled_offset(b);
  });
  return order;
}

DomainMask radial_ball(const GridSpec& grid, std::size_t cell_count) {
  if (cell_count == 0) throw InvalidArgument("radial ball needs at least one cell");
  if (cell_count > grid.cell_count()) throw DomainTooSmall("radial ball larger than the grid box");
  std::vector<CellIndex> order = radial_order(grid);
  order.resize(cell_count);
  return DomainMask(grid, std::move(order));
}

std::vector<std::size_t> shell_sizes(const GridSpec& grid, std::size_t cell_count) {
  const std::vector<CellIndex> order = radial_order(grid);
  cell_count = std::min(cell_count, order.size());
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < cell_count; ++k) {
    if (k == 0 || grid.doubled_radius2(order[k]) != grid.doubled_radius2(order[k - 1]))
      sizes.push_back(0);
    ++sizes.back();
  }
  return sizes;
}

std::vector<std::size_t> complete_shell_counts(const GridSpec& grid, std::size_t max_count) {
  const std::vector<CellIndex> order = radial_order(grid);
  std::vector<std::size_t> counts;
  // A shell touching the box boundary may be clipped by the box, so only
  // shells strictly inside the inscribed ball are reported.
  const std::int64_t inscribed =
      static_cast<std::int64_t>(grid.cells_per_axis() - 1) * (grid.cells_per_axis() - 1);
  for (std::size_t k = 1; k <= order.size() && k <= max_count; ++k) {
    const bool shell_ends =
        k == order.size() || grid.doubled_radius2(order[k]) != grid.doubled_radius2(order[k - 1]);
    if (shell_ends && grid.doubled_radius2(order[k - 1]) <= inscribed) counts.push_back(k);
  }
  return counts;
}

GridField schwarz_rearrange(const GridField& f) {
  std::vector<double> values = f.member_values();
  for (double v : values)
    if (v < 0.0) throw InvalidArgument("Schwarz symmetrization needs a non-negative field");
  std::sort(values.begin(), values.end(), std::greater<>());
  const GridSpec& grid = f.grid();
  std::vector<CellIndex> order = radial_order(grid);
  order.resize(values.size());
  GridField out(DomainMask(grid, order));
  for (std::size_t k = 0; k < values.size(); ++k) out.set(order[k], values[k]);
  return out;
}

bool check_equimeasurable(const GridField& f, const GridField& g) {
  if (f.mask().count() != g.mask().count()) return false;
  std::vector<double> a = f.member_values();
  std::vector<double> b = g.member_values();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

double hardy_littlewood_gap(const GridField& f1, const GridField& f2) {
  if (!(f1.grid() == f2.grid())) throw InvalidArgument("hardy_littlewood_gap: grids differ");
  const double lhs = inner_product(f1, f2);
  const double rhs = inner_product(schwarz_rearrange(f1), schwarz_rearrange(f2));
  return rhs - lhs;
}

double riesz_gap(const GridField& f1, const GridField& f2, const GridField& f3) {
  if (!(f1.grid() == f2.grid()) || !(f1.grid() == f3.grid()))
    throw InvalidArgument("riesz_gap: grids differ");
  const double lhs = inner_product(f1, convolve(f2, f3));
  const double rhs =
      inner_product(schwarz_rearrange(f1), convolve(schwarz_rearrange(f2), schwarz_rearrange(f3)));
  return rhs - lhs;
}

double radial_monotonicity_violation(const GridField& f) {
  const GridSpec& grid = f.grid();
  std::vector<CellIndex> cells(f.mask().cells().begin(), f.mask().cells().end());
  std::sort(cells.begin(), cells.end(), [&](CellIndex a, CellIndex b) {
    return grid.doubled_radius2(a) < grid.doubled_radius2(b);
  });
  // For each shell: its largest value against the smallest value at any
  // radius up to and including its own.
  double violation = 0.0;
  double prefix_min = kInfinity;
  std::size_t k = 0;
  while (k < cells.size()) {
    const auto r2 = grid.doubled_radius2(cells[k]);
    double shell_min = kInfinity;
    double shell_max = -kInfinity;
    std::size_t j = k;
    for (; j < cells.size() && grid.doubled_radius2(cells[j]) == r2; ++j) {
      shell_min = std::min(shell_min, f.value(cells[j]));
      shell_max = std::max(shell_max, f.value(cells[j]));
    }
    prefix_min = std::min(prefix_min, shell_min);
    violation = std::max(violation, shell_max - prefix_min);
    k = j;
  }
  return violation;
}

bool is_radially_nonincreasing(const GridField& f, double tol) {
  return radial_monotonicity_violation(f) <= tol;
}

}  // namespace nlsym
