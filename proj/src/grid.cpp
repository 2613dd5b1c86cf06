#include "nlsym/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlsym/error.hpp"

namespace nlsym {

namespace {

// Relative slack used when a center sits on a ball boundary up to rounding.
constexpr double kBoundaryRelTol = 1e-12;

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw InvalidArgument(std::string(what) + ": fields live on different grids");
}

}  // namespace

GridSpec::GridSpec(int dimension, double half_extent, int cells_per_axis)
    : dimension_(dimension), cells_per_axis_(cells_per_axis), half_extent_(half_extent) {
  if (dimension < 1 || dimension > kMaxDimension)
    throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dimension));
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw InvalidArgument("grid half extent must be positive and finite");
  if (cells_per_axis < 3) throw InvalidArgument("grid needs at least 3 cells per axis");
  h_ = 2.0 * half_extent / cells_per_axis;
  cell_volume_ = dimension == 1 ? h_ : h_ * h_;
  cell_count_ = dimension == 1 ? static_cast<std::size_t>(cells_per_axis)
                               : static_cast<std::size_t>(cells_per_axis) * cells_per_axis;
}

AxisIndex GridSpec::axis_index(CellIndex cell) const noexcept {
  if (dimension_ == 1) return {static_cast<int>(cell), 0};
  const auto n = static_cast<CellIndex>(cells_per_axis_);
  return {static_cast<int>(cell / n), static_cast<int>(cell % n)};
}

CellIndex GridSpec::flat_index(const AxisIndex& index) const noexcept {
  if (dimension_ == 1) return static_cast<CellIndex>(index[0]);
  return static_cast<CellIndex>(index[0]) * static_cast<CellIndex>(cells_per_axis_) +
         static_cast<CellIndex>(index[1]);
}

bool GridSpec::in_box(const AxisIndex& index) const noexcept {
  for (int a = 0; a < dimension_; ++a)
    if (index[a] < 0 || index[a] >= cells_per_axis_) return false;
  return true;
}

DoubledOffset GridSpec::doubled_offset(CellIndex cell) const noexcept {
  const AxisIndex idx = axis_index(cell);
  DoubledOffset q{0, 0};
  for (int a = 0; a < dimension_; ++a) q[a] = 2 * static_cast<std::int64_t>(idx[a]) - (cells_per_axis_ - 1);
  return q;
}

std::int64_t GridSpec::doubled_radius2(CellIndex cell) const noexcept {
  const DoubledOffset q = doubled_offset(cell);
  return q[0] * q[0] + q[1] * q[1];
}

Point GridSpec::center(CellIndex cell) const noexcept {
  const DoubledOffset q = doubled_offset(cell);
  return {0.5 * h_ * static_cast<double>(q[0]), 0.5 * h_ * static_cast<double>(q[1])};
}

double GridSpec::radius(CellIndex cell) const noexcept {
  return 0.5 * h_ * std::sqrt(static_cast<double>(doubled_radius2(cell)));
}

GridSpec make_grid(int dimension, double half_extent, int cells_per_axis) {
  return GridSpec(dimension, half_extent, cells_per_axis);
}

double unit_ball_volume(int dimension) {
  switch (dimension) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: throw InvalidArgument("unit ball volume only tabulated for N = 1, 2");
  }
}

double ball_radius_for_volume(int dimension, double volume) {
  if (!(volume > 0.0)) throw InvalidArgument("ball volume must be positive");
  return std::pow(volume / unit_ball_volume(dimension), 1.0 / dimension);
}

DomainMask::DomainMask(const GridSpec& grid, std::vector<CellIndex> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.empty()) throw InvalidArgument("domain mask must contain at least one cell");
  if (cells.back() >= grid.cell_count()) throw InvalidArgument("domain mask cell outside the grid box");
  auto data = std::make_shared<Data>(Data{grid, std::move(cells), {}, {}});
  data->member.assign(grid.cell_count(), 0);
  data->position.assign(grid.cell_count(), 0);
  for (std::size_t k = 0; k < data->cells.size(); ++k) {
    data->member[data->cells[k]] = 1;
    data->position[data->cells[k]] = k;
  }
  data_ = std::move(data);
}

DomainMask DomainMask::full(const GridSpec& grid) {
  std::vector<CellIndex> cells(grid.cell_count());
  for (CellIndex c = 0; c < cells.size(); ++c) cells[c] = c;
  return DomainMask(grid, std::move(cells));
}

DomainMask DomainMask::from_predicate(const GridSpec& grid,
                                      const std::function<bool(const Point&)>& inside) {
  std::vector<CellIndex> cells;
  for (CellIndex c = 0; c < grid.cell_count(); ++c)
    if (inside(grid.center(c))) cells.push_back(c);
  return DomainMask(grid, std::move(cells));
}

bool DomainMask::is_subset_of(const DomainMask& other) const {
  if (!(grid() == other.grid())) return false;
  return std::all_of(cells().begin(), cells().end(), [&](CellIndex c) { return other.contains(c); });
}

bool DomainMask::operator==(const DomainMask& other) const {
  if (data_ == other.data_) return true;
  return grid() == other.grid() && std::equal(cells().begin(), cells().end(), other.cells().begin(),
                                              other.cells().end());
}

DomainMask ball_mask(const GridSpec& grid, double target_volume) {
  return ball_mask_radius(grid, ball_radius_for_volume(grid.dimension(), target_volume));
}

DomainMask ball_mask_radius(const GridSpec& grid, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (radius > grid.half_extent() * (1.0 + kBoundaryRelTol))
    throw DomainTooSmall("ball of radius " + std::to_string(radius) + " exceeds the grid box");
  // Compare in exact doubled units: |q|^2 < (2r/h)^2, boundary centers excluded.
  const double limit = std::pow(2.0 * radius / grid.h(), 2) * (1.0 - kBoundaryRelTol);
  std::vector<CellIndex> cells;
  for (CellIndex c = 0; c < grid.cell_count(); ++c)
    if (static_cast<double>(grid.doubled_radius2(c)) < limit) cells.push_back(c);
  if (cells.empty()) throw InvalidArgument("ball contains no cell center");
  return DomainMask(grid, std::move(cells));
}

DomainMask box_mask(const GridSpec& grid, const Point& lo, const Point& hi) {
  const double slack = kBoundaryRelTol * grid.h();
  std::vector<CellIndex> cells;
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    const Point x = grid.center(c);
    bool inside = true;
    for (int a = 0; a < grid.dimension(); ++a)
      inside = inside && x[a] > lo[a] + slack && x[a] < hi[a] - slack;
    if (inside) cells.push_back(c);
  }
  if (cells.empty()) throw InvalidArgument("box contains no cell center");
  return DomainMask(grid, std::move(cells));
}

DomainMask mask_union(const DomainMask& a, const DomainMask& b) {
  require_same_grid(a.grid(), b.grid(), "mask_union");
  std::vector<CellIndex> cells(a.cells().begin(), a.cells().end());
  cells.insert(cells.end(), b.cells().begin(), b.cells().end());
  return DomainMask(a.grid(), std::move(cells));
}

GridField::GridField(DomainMask mask) : mask_(std::move(mask)), storage_(mask_.grid().cell_count(), 0.0) {}

GridField::GridField(DomainMask mask, std::span<const double> member_values) : GridField(std::move(mask)) {
  if (member_values.size() != mask_.count())
    throw InvalidArgument("field needs exactly one value per mask cell");
  const auto cells = mask_.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) set(cells[k], member_values[k]);
}

GridField GridField::from_function(const DomainMask& mask, const std::function<double(const Point&)>& fn) {
  GridField f(mask);
  for (CellIndex c : mask.cells()) f.set(c, fn(mask.grid().center(c)));
  return f;
}

void GridField::set(CellIndex cell, double value) {
  if (!mask_.contains(cell)) throw InvalidArgument("cannot store a value outside the field mask");
  if (!std::isfinite(value)) throw InvalidArgument("field values must be finite");
  storage_[cell] = value;
}

std::vector<double> GridField::member_values() const {
  std::vector<double> out;
  out.reserve(mask_.count());
  for (CellIndex c : mask_.cells()) out.push_back(storage_[c]);
  return out;
}

double GridField::max_value() const {
  double m = -kInfinity;
  for (CellIndex c : mask_.cells()) m = std::max(m, storage_[c]);
  return m;
}

double GridField::min_value() const {
  double m = kInfinity;
  for (CellIndex c : mask_.cells()) m = std::min(m, storage_[c]);
  return m;
}

GridField GridField::extended_to(const DomainMask& superset) const {
  if (!mask_.is_subset_of(superset)) throw InvalidArgument("extended_to needs a superset mask");
  GridField out(superset);
  for (CellIndex c : mask_.cells()) out.storage_[c] = storage_[c];
  return out;
}

GridField GridField::restricted_to(const DomainMask& subset) const {
  require_same_grid(grid(), subset.grid(), "restricted_to");
  GridField out(subset);
  for (CellIndex c : subset.cells()) out.storage_[c] = value(c);
  return out;
}

GridField GridField::scaled(double factor) const {
  GridField out(mask_);
  for (CellIndex c : mask_.cells()) out.set(c, factor * storage_[c]);
  return out;
}

double accurate_sum(std::span<const double> terms) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t))
      compensation += (sum - next) + t;
    else
      compensation += (t - next) + sum;
    sum = next;
  }
  return sum + compensation;
}

double lp_norm(const GridField& f, double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("L^p norm needs p >= 1");
  const auto cells = f.mask().cells();
  if (std::isinf(p)) {
    double m = 0.0;
    for (CellIndex c : cells) m = std::max(m, std::abs(f.value(c)));
    return m;
  }
  std::vector<double> terms;
  terms.reserve(cells.size());
  for (CellIndex c : cells) {
    const double a = std::abs(f.value(c));
    terms.push_back(p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p)));
  }
  const double s = accurate_sum(terms) * f.grid().cell_volume();
  return p == 1.0 ? s : (p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p));
}

double inner_product(const GridField& f, const GridField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  std::vector<double> terms;
  for (CellIndex c : f.mask().cells())
    if (g.mask().contains(c)) terms.push_back(f.value(c) * g.value(c));
  return accurate_sum(terms) * f.grid().cell_volume();
}

double integral(const GridField& f) {
  const std::vector<double> values = f.member_values();
  return accurate_sum(values) * f.grid().cell_volume();
}

}  // namespace nlsym
