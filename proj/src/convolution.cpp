#include "nlsym/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdlib>
#include <memory>
#include <mutex>

#include "nlsym/error.hpp"

namespace nlsym {

namespace {

struct SparseEntry {
  AxisIndex offset;  // cell-center offset from the origin, in cells
  double value;
};

struct Extent {
  AxisIndex lo{0, 0};
  AxisIndex hi{-1, -1};
  bool empty() const { return hi[0] < lo[0]; }
};

void require_convolvable(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw InvalidArgument("convolution operands live on different grids");
  if (!a.origin_is_cell_center())
    throw InvalidArgument("convolution needs an odd cell count so the origin is a cell center");
}

AxisIndex cell_offset(const GridSpec& grid, CellIndex cell) {
  const int center = (grid.cells_per_axis() - 1) / 2;
  AxisIndex idx = grid.axis_index(cell);
  for (int a = 0; a < grid.dimension(); ++a) idx[a] -= center;
  return idx;
}

// Nonzero entries of f on its mask, optionally intersected with a region.
std::vector<SparseEntry> nonzero_entries(const GridField& f, const DomainMask* region) {
  std::vector<SparseEntry> out;
  for (CellIndex c : f.mask().cells()) {
    if (region != nullptr && !region->contains(c)) continue;
    const double v = f.value(c);
    if (v != 0.0) out.push_back({cell_offset(f.grid(), c), v});
  }
  return out;
}

Extent extent_of(const std::vector<SparseEntry>& entries, int dim) {
  Extent e;
  if (entries.empty()) return e;
  e.lo = entries.front().offset;
  e.hi = entries.front().offset;
  for (const auto& s : entries)
    for (int a = 0; a < dim; ++a) {
      e.lo[a] = std::min(e.lo[a], s.offset[a]);
      e.hi[a] = std::max(e.hi[a], s.offset[a]);
    }
  if (dim == 1) e.lo[1] = e.hi[1] = 0;
  return e;
}

GridField convolve_direct(const GridSpec& grid, const std::vector<SparseEntry>& dense_entries,
                          const std::vector<SparseEntry>& sparse_entries) {
  const int dim = grid.dimension();
  const int n = grid.cells_per_axis();
  const int center = (n - 1) / 2;
  GridField out(DomainMask::full(grid));
  if (dense_entries.empty() || sparse_entries.empty()) return out;

  const Extent ds = extent_of(dense_entries, dim);
  const Extent ss = extent_of(sparse_entries, dim);

  // Dense operand on a box padded by the sparse operand's reach, so every
  // read x - s for x in the grid box is in range.
  int pad = 0;
  for (int a = 0; a < dim; ++a) pad = std::max({pad, std::abs(ss.lo[a]), std::abs(ss.hi[a])});
  const int width = n + 2 * pad;
  const std::size_t stride1 = dim == 1 ? 0 : 1;
  const std::size_t stride0 = dim == 1 ? 1 : static_cast<std::size_t>(width);
  std::vector<double> dense(dim == 1 ? width : static_cast<std::size_t>(width) * width, 0.0);
  auto padded = [&](const AxisIndex& off) {
    std::size_t p = static_cast<std::size_t>(off[0] + center + pad) * stride0;
    if (dim == 2) p += static_cast<std::size_t>(off[1] + center + pad) * stride1;
    return p;
  };
  for (const auto& d : dense_entries) dense[padded(d.offset)] = d.value;

  std::vector<std::ptrdiff_t> shift;
  std::vector<double> weight;
  shift.reserve(sparse_entries.size());
  weight.reserve(sparse_entries.size());
  for (const auto& s : sparse_entries) {
    std::ptrdiff_t off = static_cast<std::ptrdiff_t>(s.offset[0]) * static_cast<std::ptrdiff_t>(stride0);
    if (dim == 2) off += static_cast<std::ptrdiff_t>(s.offset[1]);
    shift.push_back(off);
    weight.push_back(s.value);
  }

  AxisIndex lo{0, 0};
  AxisIndex hi{0, 0};
  for (int a = 0; a < dim; ++a) {
    lo[a] = std::max(-center, ds.lo[a] + ss.lo[a]);
    hi[a] = std::min(center, ds.hi[a] + ss.hi[a]);
  }
  const double cell_volume = grid.cell_volume();
  auto raw = out.raw_storage();
  const std::size_t count = shift.size();
  for (int x0 = lo[0]; x0 <= hi[0]; ++x0) {
    for (int x1 = lo[1]; x1 <= hi[1]; ++x1) {
      const AxisIndex x{x0, x1};
      const auto base = static_cast<std::ptrdiff_t>(padded(x));
      double acc = 0.0;
      for (std::size_t k = 0; k < count; ++k) acc += weight[k] * dense[base - shift[k]];
      AxisIndex idx{x0 + center, dim == 2 ? x1 + center : 0};
      raw[grid.flat_index(idx)] = acc * cell_volume;
    }
  }
  return out;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

GridField convolve_fft(const GridSpec& grid, const std::vector<SparseEntry>& a_entries,
                       const std::vector<SparseEntry>& b_entries) {
  const int dim = grid.dimension();
  const int n = grid.cells_per_axis();
  const int center = (n - 1) / 2;
  GridField out(DomainMask::full(grid));
  if (a_entries.empty() || b_entries.empty()) return out;

  const int m = static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * n - 1)));
  const std::size_t real_size = dim == 1 ? m : static_cast<std::size_t>(m) * m;
  const int last = m / 2 + 1;
  const std::size_t complex_size = dim == 1 ? last : static_cast<std::size_t>(m) * last;

  std::unique_ptr<double, FftwFree> ra(fftw_alloc_real(real_size));
  std::unique_ptr<double, FftwFree> rb(fftw_alloc_real(real_size));
  std::unique_ptr<fftw_complex, FftwFree> ca(fftw_alloc_complex(complex_size));
  std::unique_ptr<fftw_complex, FftwFree> cb(fftw_alloc_complex(complex_size));
  std::fill(ra.get(), ra.get() + real_size, 0.0);
  std::fill(rb.get(), rb.get() + real_size, 0.0);

  // Operand cell i sits at array index i (offset + center); the linear
  // convolution of indices i + j maps back to cell i + j - center.
  auto place = [&](double* buffer, const std::vector<SparseEntry>& entries) {
    for (const auto& e : entries) {
      const std::size_t i0 = static_cast<std::size_t>(e.offset[0] + center);
      const std::size_t i1 = dim == 2 ? static_cast<std::size_t>(e.offset[1] + center) : 0;
      buffer[dim == 1 ? i0 : i0 * m + i1] = e.value;
    }
  };
  place(ra.get(), a_entries);
  place(rb.get(), b_entries);

  fftw_plan fa;
  fftw_plan fb;
  fftw_plan inv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    if (dim == 1) {
      fa = fftw_plan_dft_r2c_1d(m, ra.get(), ca.get(), FFTW_ESTIMATE);
      fb = fftw_plan_dft_r2c_1d(m, rb.get(), cb.get(), FFTW_ESTIMATE);
      inv = fftw_plan_dft_c2r_1d(m, ca.get(), ra.get(), FFTW_ESTIMATE);
    } else {
      fa = fftw_plan_dft_r2c_2d(m, m, ra.get(), ca.get(), FFTW_ESTIMATE);
      fb = fftw_plan_dft_r2c_2d(m, m, rb.get(), cb.get(), FFTW_ESTIMATE);
      inv = fftw_plan_dft_c2r_2d(m, m, ca.get(), ra.get(), FFTW_ESTIMATE);
    }
  }
  fftw_execute(fa);
  fftw_execute(fb);
  for (std::size_t k = 0; k < complex_size; ++k) {
    const double re = ca.get()[k][0] * cb.get()[k][0] - ca.get()[k][1] * cb.get()[k][1];
    const double im = ca.get()[k][0] * cb.get()[k][1] + ca.get()[k][1] * cb.get()[k][0];
    ca.get()[k][0] = re;
    ca.get()[k][1] = im;
  }
  fftw_execute(inv);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fa);
    fftw_destroy_plan(fb);
    fftw_destroy_plan(inv);
  }

  const double scale = grid.cell_volume() / static_cast<double>(real_size);
  auto raw = out.raw_storage();
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    const AxisIndex idx = grid.axis_index(c);
    const std::size_t i0 = static_cast<std::size_t>(idx[0] + center);
    const std::size_t i1 = dim == 2 ? static_cast<std::size_t>(idx[1] + center) : 0;
    raw[c] = ra.get()[dim == 1 ? i0 : i0 * m + i1] * scale;
  }
  return out;
}

}  // namespace

GridField convolve(const GridField& f, const GridField& g, const ConvolutionMode& mode,
                   ConvolutionMethod method) {
  require_convolvable(f.grid(), g.grid());
  const DomainMask* region = nullptr;
  if (const auto* restricted = std::get_if<RestrictedConvolution>(&mode)) {
    if (!(restricted->region.grid() == g.grid()))
      throw InvalidArgument("restricted convolution region lives on a different grid");
    region = &restricted->region;
  }
  const std::vector<SparseEntry> fe = nonzero_entries(f, nullptr);
  const std::vector<SparseEntry> ge = nonzero_entries(g, region);
  if (method == ConvolutionMethod::Fft) return convolve_fft(f.grid(), fe, ge);
  // f * g = g * f; iterate the operand with fewer nonzeros in the inner loop.
  return fe.size() <= ge.size() ? convolve_direct(f.grid(), ge, fe) : convolve_direct(f.grid(), fe, ge);
}

MaskedConvolution::MaskedConvolution(const GridField& kernel, const DomainMask& region) : region_(region) {
  const GridSpec& grid = region.grid();
  require_convolvable(kernel.grid(), grid);
  const int dim = grid.dimension();
  const int n = grid.cells_per_axis();
  const int center = (n - 1) / 2;
  const std::vector<SparseEntry> stencil = nonzero_entries(kernel, nullptr);
  for (const auto& s : stencil)
    for (int a = 0; a < dim; ++a) pad_ = std::max(pad_, std::abs(s.offset[a]));
  padded_extent_ = n + 2 * pad_;
  const std::ptrdiff_t stride0 = dim == 1 ? 1 : padded_extent_;
  for (const auto& s : stencil) {
    std::ptrdiff_t off = static_cast<std::ptrdiff_t>(s.offset[0]) * stride0;
    if (dim == 2) off += s.offset[1];
    stencil_offsets_.push_back(off);
    stencil_weights_.push_back(s.value * grid.cell_volume());
  }
  for (CellIndex c : region.cells()) {
    const AxisIndex idx = grid.axis_index(c);
    std::size_t p = static_cast<std::size_t>(idx[0] + pad_) * static_cast<std::size_t>(stride0);
    if (dim == 2) p += static_cast<std::size_t>(idx[1] + pad_);
    padded_position_.push_back(p);
  }
  (void)center;
  scratch_.assign(dim == 1 ? padded_extent_ : static_cast<std::size_t>(padded_extent_) * padded_extent_, 0.0);
}

void MaskedConvolution::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size() || out.size() != size())
    throw InvalidArgument("MaskedConvolution::apply: vector size does not match the region");
  for (std::size_t k = 0; k < in.size(); ++k) scratch_[padded_position_[k]] = in[k];
  const std::size_t count = stencil_offsets_.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto base = static_cast<std::ptrdiff_t>(padded_position_[k]);
    double acc = 0.0;
    for (std::size_t s = 0; s < count; ++s) acc += stencil_weights_[s] * scratch_[base - stencil_offsets_[s]];
    out[k] = acc;
  }
}

}  // namespace nlsym
