#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace nlsym {

using CellIndex = std::size_t;

inline constexpr int kMaxDimension = 2;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using Point = std::array<double, kMaxDimension>;
using AxisIndex = std::array<int, kMaxDimension>;
/// Cell-center offset from the origin in half-cell units, 2*i - (n-1) per axis.
using DoubledOffset = std::array<std::int64_t, kMaxDimension>;

/// Uniform Cartesian grid on the origin-centered box [-L, L]^N.
///
/// Cells are indexed row-major with axis 0 slowest. Cell centers sit at
/// -L + (i + 1/2) h per axis, so the box is symmetric about the origin and
/// the origin is a cell center exactly when the cell count is odd. Unused
/// axes (N = 1) carry index and coordinate 0.
class GridSpec {
 public:
  GridSpec(int dimension, double half_extent, int cells_per_axis);

  int dimension() const noexcept { return dimension_; }
  int cells_per_axis() const noexcept { return cells_per_axis_; }
  double half_extent() const noexcept { return half_extent_; }
  double h() const noexcept { return h_; }
  double cell_volume() const noexcept { return cell_volume_; }
  std::size_t cell_count() const noexcept { return cell_count_; }
  bool origin_is_cell_center() const noexcept { return cells_per_axis_ % 2 == 1; }

  AxisIndex axis_index(CellIndex cell) const noexcept;
  CellIndex flat_index(const AxisIndex& index) const noexcept;
  bool in_box(const AxisIndex& index) const noexcept;

  DoubledOffset doubled_offset(CellIndex cell) const noexcept;
  /// Squared center distance in (h/2)^2 units; exact, so equal radii compare equal.
  std::int64_t doubled_radius2(CellIndex cell) const noexcept;
  Point center(CellIndex cell) const noexcept;
  double radius(CellIndex cell) const noexcept;

  bool operator==(const GridSpec& other) const noexcept = default;

 private:
  int dimension_;
  int cells_per_axis_;
  double half_extent_;
  double h_;
  double cell_volume_;
  std::size_t cell_count_;
};

GridSpec make_grid(int dimension, double half_extent, int cells_per_axis);

/// Volume of the unit ball in dimension N (2 for N = 1, pi for N = 2).
double unit_ball_volume(int dimension);
/// Radius (|E| / omega_N)^(1/N) of the origin-centered ball with the given volume.
double ball_radius_for_volume(int dimension, double volume);

/// Set of grid cells standing in for a bounded open set.
///
/// Cheap to copy: the cell list is shared and immutable.
class DomainMask {
 public:
  /// Cells are sorted and deduplicated; an empty or out-of-range list throws.
  DomainMask(const GridSpec& grid, std::vector<CellIndex> cells);

  static DomainMask full(const GridSpec& grid);
  static DomainMask from_predicate(const GridSpec& grid,
                                   const std::function<bool(const Point&)>& inside);

  const GridSpec& grid() const noexcept { return data_->grid; }
  std::span<const CellIndex> cells() const noexcept { return data_->cells; }
  std::size_t count() const noexcept { return data_->cells.size(); }
  double volume() const noexcept { return static_cast<double>(count()) * grid().cell_volume(); }
  bool contains(CellIndex cell) const noexcept {
    return cell < data_->member.size() && data_->member[cell] != 0;
  }
  /// Position of a member cell within cells(); only valid for members.
  std::size_t position(CellIndex cell) const noexcept { return data_->position[cell]; }

  bool is_subset_of(const DomainMask& other) const;
  bool operator==(const DomainMask& other) const;

 private:
  struct Data {
    GridSpec grid;
    std::vector<CellIndex> cells;
    std::vector<std::uint8_t> member;
    std::vector<std::size_t> position;
  };
  std::shared_ptr<const Data> data_;
};

/// Cells whose centers lie in the open ball of volume `target_volume` about the origin.
DomainMask ball_mask(const GridSpec& grid, double target_volume);
/// Cells whose centers lie in the open ball |x| < radius.
DomainMask ball_mask_radius(const GridSpec& grid, double radius);
/// Cells whose centers lie in the open box lo < x < hi (per axis).
DomainMask box_mask(const GridSpec& grid, const Point& lo, const Point& hi);
DomainMask mask_union(const DomainMask& a, const DomainMask& b);

/// Cell-center samples of a function extended by zero outside its mask.
///
/// Storage is dense over the whole grid. Entries outside the mask are never
/// read by any operation; value() reports 0 there regardless of what the
/// storage holds.
class GridField {
 public:
  explicit GridField(DomainMask mask);
  /// One value per member cell, in mask().cells() order.
  GridField(DomainMask mask, std::span<const double> member_values);

  static GridField from_function(const DomainMask& mask,
                                 const std::function<double(const Point&)>& fn);

  const GridSpec& grid() const noexcept { return mask_.grid(); }
  const DomainMask& mask() const noexcept { return mask_; }

  double value(CellIndex cell) const noexcept { return mask_.contains(cell) ? storage_[cell] : 0.0; }
  void set(CellIndex cell, double value);

  std::vector<double> member_values() const;
  double max_value() const;
  double min_value() const;

  /// Same values viewed on a superset mask (new cells are zero).
  GridField extended_to(const DomainMask& superset) const;
  /// Values on `subset`; cells of `subset` outside this mask read as zero.
  GridField restricted_to(const DomainMask& subset) const;
  GridField scaled(double factor) const;

  /// Dense backing store; out-of-mask entries are scratch.
  std::span<double> raw_storage() noexcept { return storage_; }
  std::span<const double> raw_storage() const noexcept { return storage_; }

 private:
  DomainMask mask_;
  std::vector<double> storage_;
};

/// Discrete L^p norm (sum |f|^p h^N)^(1/p), or max |f| for p = infinity.
double lp_norm(const GridField& f, double p);

/// Discrete integral h^N sum f g over the intersection of the two masks.
double inner_product(const GridField& f, const GridField& g);
double integral(const GridField& f);

/// Compensated (Neumaier) sum in the given order.
double accurate_sum(std::span<const double> terms);

}  // namespace nlsym
