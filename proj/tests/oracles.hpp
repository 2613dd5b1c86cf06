// Brute-force reference computations for the unit and acceptance tests.
// Everything here is written independently of the library's fast paths:
// plain pair loops over cells and dense Gaussian elimination.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nlsym/grid.hpp"

namespace oracle {

using nlsym::AxisIndex;
using nlsym::CellIndex;
using nlsym::DomainMask;
using nlsym::GridField;
using nlsym::GridSpec;

using Matrix = std::vector<std::vector<double>>;

/// Value of f at the cell whose index offset from the origin cell is `offset`; 0 outside the box.
inline double value_at_offset(const GridField& f, const AxisIndex& offset) {
  const GridSpec& grid = f.grid();
  const int center = (grid.cells_per_axis() - 1) / 2;
  AxisIndex idx{0, 0};
  for (int a = 0; a < grid.dimension(); ++a) idx[a] = offset[a] + center;
  if (!grid.in_box(idx)) return 0.0;
  return f.value(grid.flat_index(idx));
}

inline AxisIndex offset_of(const GridSpec& grid, CellIndex c) {
  const int center = (grid.cells_per_axis() - 1) / 2;
  AxisIndex idx = grid.axis_index(c);
  for (int a = 0; a < grid.dimension(); ++a) idx[a] -= center;
  return idx;
}

/// (f * g)(x) = h^N sum_y f(x - y) g(y), y over all cells or only over `region`.
/// One value per grid cell.
inline std::vector<double> convolve(const GridField& f, const GridField& g, const DomainMask* region = nullptr) {
  const GridSpec& grid = f.grid();
  std::vector<double> out(grid.cell_count(), 0.0);
  for (CellIndex x = 0; x < grid.cell_count(); ++x) {
    const AxisIndex ox = offset_of(grid, x);
    double s = 0.0;
    for (CellIndex y = 0; y < grid.cell_count(); ++y) {
      if (region != nullptr && !region->contains(y)) continue;
      const AxisIndex oy = offset_of(grid, y);
      s += value_at_offset(f, {ox[0] - oy[0], ox[1] - oy[1]}) * g.value(y);
    }
    out[x] = s * grid.cell_volume();
  }
  return out;
}

/// P_ij = h^N rho(x_i - x_j) for i, j in the domain (cell order of the mask).
inline Matrix restricted_convolution_matrix(const GridField& rho, const DomainMask& domain) {
  const GridSpec& grid = domain.grid();
  const auto cells = domain.cells();
  Matrix p(cells.size(), std::vector<double>(cells.size(), 0.0));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const AxisIndex oi = offset_of(grid, cells[i]);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const AxisIndex oj = offset_of(grid, cells[j]);
      p[i][j] = grid.cell_volume() * value_at_offset(rho, {oi[0] - oj[0], oi[1] - oj[1]});
    }
  }
  return p;
}

/// A = D (-Lap_h) + c with zero Dirichlet data on every cell outside the domain.
inline Matrix dirichlet_laplacian(const DomainMask& domain, double c, double diffusivity) {
  const GridSpec& grid = domain.grid();
  const auto cells = domain.cells();
  const double w = diffusivity / (grid.h() * grid.h());
  Matrix a(cells.size(), std::vector<double>(cells.size(), 0.0));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    a[i][i] = 2.0 * grid.dimension() * w + c;
    const AxisIndex oi = grid.axis_index(cells[i]);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const AxisIndex oj = grid.axis_index(cells[j]);
      int dist = 0;
      for (int d = 0; d < grid.dimension(); ++d) dist += std::abs(oi[d] - oj[d]);
      if (dist == 1) a[i][j] = -w;
    }
  }
  return a;
}

inline std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) throw std::runtime_error("singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// Values of f on the domain's cells, in mask order.
inline std::vector<double> on(const GridField& f, const DomainMask& domain) {
  std::vector<double> v;
  for (CellIndex c : domain.cells()) v.push_back(f.value(c));
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Fixed point of w = alpha P w + xi by direct solve of (I - alpha P) w = xi.
inline std::vector<double> stationary_fixed_point(const Matrix& p, double alpha, const std::vector<double>& xi) {
  Matrix a = p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (double& v : a[i]) v *= -alpha;
    a[i][i] += 1.0;
  }
  return solve(a, xi);
}

}  // namespace oracle
