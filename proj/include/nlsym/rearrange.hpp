#pragma once

#include <cstddef>
#include <vector>

#include "nlsym/grid.hpp"

namespace nlsym {

/// All cells of the grid sorted by center distance from the origin, ties
/// broken by the lexicographically smaller center coordinate tuple.
///
/// Any prefix of this order is the discrete ball used for symmetrized
/// domains: it has exactly the requested cell count.
std::vector<CellIndex> radial_order(const GridSpec& grid);

/// The first `cell_count` cells of radial_order(grid).
DomainMask radial_ball(const GridSpec& grid, std::size_t cell_count);

/// Cell counts at which radial_ball ends on a complete equal-radius shell
/// (1, 3, 5, ... in N = 1; 1, 5, 9, 13, 21, ... in N = 2), up to `max_count`.
std::vector<std::size_t> complete_shell_counts(const GridSpec& grid, std::size_t max_count);

/// Sizes of the equal-radius shells that make up radial_ball(grid, cell_count),
/// innermost first. The last shell may be partial.
std::vector<std::size_t> shell_sizes(const GridSpec& grid, std::size_t cell_count);

/// Discrete Schwarz symmetrization: the multiset of f's cell values sorted
/// non-increasingly and placed along radial_order on radial_ball(grid, |mask|).
///
/// Throws InvalidArgument for negative values.
GridField schwarz_rearrange(const GridField& f);

/// True iff both fields carry the same multiset of cell values (and counts).
bool check_equimeasurable(const GridField& f, const GridField& g);

/// h^N sum f1* f2*  -  h^N sum f1 f2. Non-negative up to rounding.
double hardy_littlewood_gap(const GridField& f1, const GridField& f2);

/// RHS - LHS of  h^N sum f1 (f2 * f3)  <=  h^N sum f1* (f2* * f3*),
/// with the full discrete convolution of convolution.hpp.
double riesz_gap(const GridField& f1, const GridField& f2, const GridField& f3);

/// Smallest tol for which is_radially_nonincreasing(f, tol) holds:
/// max over cell pairs with |a| >= |b| of value(a) - value(b), clamped at 0.
double radial_monotonicity_violation(const GridField& f);

/// True iff value(a) <= value(b) + tol for all mask cells with |a| >= |b|.
/// Equal radii therefore force near-equal values.
bool is_radially_nonincreasing(const GridField& f, double tol);

}  // namespace nlsym
