#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "nlsym/grid.hpp"

namespace nlsym {

/// (f * g)(x) = h^N sum_y f(x - y) g(y) over all cells.
struct FullConvolution {};

/// (f (*)_E g)(x) = h^N sum_{y in E} f(x - y) g(y).
struct RestrictedConvolution {
  DomainMask region;
};

using ConvolutionMode = std::variant<FullConvolution, RestrictedConvolution>;

enum class ConvolutionMethod {
  Direct,  ///< dense per-cell summation; the reference path
  Fft,     ///< zero-padded real FFT; agrees with Direct to ~1e-15 relative
};

/// Discrete convolution of two fields on the same grid.
///
/// Both inputs are read only on their masks (zero extension). The result
/// lives on the full grid box; cells whose value would fall outside the box
/// are clipped. The grid must have an odd cell count so that differences of
/// cell centers are again cell centers.
GridField convolve(const GridField& f, const GridField& g, const ConvolutionMode& mode = FullConvolution{},
                   ConvolutionMethod method = ConvolutionMethod::Direct);

/// Restricted convolution y = h^N sum_{z in region} kernel(x - z) w(z) for
/// x in region, acting on compact member-value vectors of `region`.
///
/// Precomputes the kernel stencil and a padded scratch buffer so repeated
/// application inside fixed-point and time-stepping loops needs no bounds
/// checks. Each output cell sums its stencil in a fixed order.
class MaskedConvolution {
 public:
  MaskedConvolution(const GridField& kernel, const DomainMask& region);

  const DomainMask& region() const noexcept { return region_; }
  std::size_t size() const noexcept { return region_.count(); }

  /// out[k] = h^N sum_j kernel(x_k - x_j) in[j]; `in` and `out` must not alias.
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  DomainMask region_;
  int padded_extent_ = 0;
  int pad_ = 0;
  std::vector<std::ptrdiff_t> stencil_offsets_;
  std::vector<double> stencil_weights_;
  std::vector<std::size_t> padded_position_;
  mutable std::vector<double> scratch_;
};

}  // namespace nlsym
