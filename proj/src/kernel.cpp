#include "nlsym/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlsym/error.hpp"

namespace nlsym {

namespace {

constexpr double kBoundaryRelTol = 1e-12;
constexpr double kGaussianWidths = 3.0;  // support radius in standard deviations

GridField sample_profile(KernelProfile profile, double support_radius, const GridSpec& grid) {
  // Boundary of the support in the exact doubled-radius units of the grid.
  const double scaled = 2.0 * support_radius / grid.h();
  const double boundary = scaled * scaled;
  std::vector<CellIndex> cells;
  std::vector<double> values;
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    const double q = static_cast<double>(grid.doubled_radius2(c));
    double v = 0.0;
    if (std::abs(q - boundary) <= kBoundaryRelTol * boundary)
      v = kernel_shape(profile, 1.0);
    else if (q < boundary)
      v = kernel_shape(profile, std::sqrt(q / boundary));
    if (v > 0.0) {
      cells.push_back(c);
      values.push_back(v);
    }
  }
  if (cells.empty()) throw ResolutionError("kernel support holds no cell with positive weight");
  return GridField(DomainMask(grid, std::move(cells)), values);
}

double second_moment(const GridField& f) {
  const GridSpec& grid = f.grid();
  std::vector<double> terms;
  terms.reserve(f.mask().count());
  for (CellIndex c : f.mask().cells()) {
    const double r = grid.radius(c);
    terms.push_back(r * r * f.value(c));
  }
  return accurate_sum(terms) * grid.cell_volume();
}

void require_kernel_grid(double support_radius, const GridSpec& grid) {
  if (!(support_radius > 0.0) || !std::isfinite(support_radius))
    throw InvalidArgument("kernel support radius must be positive and finite");
  if (!grid.origin_is_cell_center()) throw InvalidArgument("kernel grids need an odd cell count");
  if (support_radius < 2.0 * grid.h() * (1.0 - kBoundaryRelTol))
    throw ResolutionError("kernel support radius " + std::to_string(support_radius) + " is below 2h = " +
                          std::to_string(2.0 * grid.h()));
  if (support_radius > grid.half_extent() * (1.0 + kBoundaryRelTol))
    throw DomainTooSmall("kernel support radius exceeds the grid half-extent");
}

double gaussian_density(int dim, double r2) {
  return std::exp(-0.5 * r2) / std::pow(2.0 * std::numbers::pi, 0.5 * dim);
}

double deviation_of(const GridField& power, double sigma2, int k) {
  const GridSpec& grid = power.grid();
  const int dim = grid.dimension();
  const double s = std::sqrt(static_cast<double>(k) * sigma2 / dim);
  const double sn = std::pow(s, dim);
  double worst = 0.0;
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    const double y = grid.radius(c) / s;
    worst = std::max(worst, std::abs(sn * power.value(c) - gaussian_density(dim, y * y)));
  }
  return worst;
}

}  // namespace

KernelProfile parse_kernel_profile(std::string_view name) {
  if (name == "uniform-ball") return KernelProfile::UniformBall;
  if (name == "tent") return KernelProfile::Tent;
  if (name == "truncated-gaussian") return KernelProfile::TruncatedGaussian;
  throw InvalidArgument("unknown kernel profile '" + std::string(name) +
                        "' (expected uniform-ball, tent or truncated-gaussian)");
}

std::string_view to_string(KernelProfile profile) {
  switch (profile) {
    case KernelProfile::UniformBall: return "uniform-ball";
    case KernelProfile::Tent: return "tent";
    case KernelProfile::TruncatedGaussian: return "truncated-gaussian";
  }
  return "?";
}

double kernel_shape(KernelProfile profile, double t) {
  if (t > 1.0) return 0.0;
  const bool edge = t == 1.0;
  switch (profile) {
    case KernelProfile::UniformBall:
      return edge ? 0.5 : 1.0;
    case KernelProfile::Tent:
      return 1.0 - t;
    case KernelProfile::TruncatedGaussian: {
      const double v = std::exp(-0.5 * kGaussianWidths * kGaussianWidths * t * t);
      return edge ? 0.5 * v : v;
    }
  }
  return 0.0;
}

Kernel make_kernel(KernelProfile profile, double support_radius, const GridSpec& grid) {
  require_kernel_grid(support_radius, grid);
  GridField raw = sample_profile(profile, support_radius, grid);
  const double raw_mass = integral(raw);
  GridField values = raw.scaled(1.0 / raw_mass);
  const double mass = integral(values);
  const double sigma2 = second_moment(values);
  return Kernel{grid, profile, support_radius, std::move(values), mass, sigma2, 2.0 / sigma2};
}

RescaledKernel rescale(const Kernel& kernel, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
  const double support = epsilon * kernel.support_radius;
  Kernel scaled = make_kernel(kernel.profile, support, kernel.grid);
  return RescaledKernel{kernel, epsilon, std::move(scaled.values), kernel.c1 / (epsilon * epsilon), support,
                        scaled.sigma2};
}

GridField convolution_power(const RescaledKernel& rho, int k, const ConvolutionMode& mode,
                            ConvolutionMethod method) {
  if (k < 1) throw InvalidArgument("convolution power needs k >= 1");
  const GridSpec& grid = rho.rho.grid();
  if (std::holds_alternative<FullConvolution>(mode) &&
      static_cast<double>(k) * rho.support_radius > grid.half_extent() * (1.0 + kBoundaryRelTol))
    throw DomainTooSmall("support of the " + std::to_string(k) + "-fold power exceeds the grid box");
  GridField power = rho.rho;
  for (int j = 2; j <= k; ++j) power = convolve(rho.rho, power, mode, method);
  return power;
}

std::vector<double> ball_mass_decay(const RescaledKernel& rho, double radius, int k_max,
                                    ConvolutionMethod method) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (k_max < 2) throw InvalidArgument("ball_mass_decay needs k_max >= 2");
  const GridSpec& grid = rho.rho.grid();
  if (static_cast<double>(k_max) * rho.support_radius > grid.half_extent() * (1.0 + kBoundaryRelTol))
    throw DomainTooSmall("support of the " + std::to_string(k_max) + "-fold power exceeds the grid box");
  const DomainMask ball = ball_mask_radius(grid, radius);
  std::vector<double> masses;
  masses.reserve(static_cast<std::size_t>(k_max));
  GridField power = rho.rho;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) power = convolve(rho.rho, power, FullConvolution{}, method);
    masses.push_back(integral(power.restricted_to(ball)));
  }
  return masses;
}

double gaussian_deviation(const RescaledKernel& rho, int k, ConvolutionMethod method) {
  return deviation_of(convolution_power(rho, k, FullConvolution{}, method), rho.sigma2, k);
}

std::vector<double> gaussian_deviations(const RescaledKernel& rho, const std::vector<int>& ks,
                                        ConvolutionMethod method) {
  if (ks.empty()) return {};
  if (!std::is_sorted(ks.begin(), ks.end()) || ks.front() < 1)
    throw InvalidArgument("gaussian_deviations needs an increasing list of positive k");
  const GridSpec& grid = rho.rho.grid();
  if (static_cast<double>(ks.back()) * rho.support_radius > grid.half_extent() * (1.0 + kBoundaryRelTol))
    throw DomainTooSmall("support of the " + std::to_string(ks.back()) + "-fold power exceeds the grid box");
  std::vector<double> out;
  GridField power = rho.rho;
  int k = 1;
  for (int target : ks) {
    for (; k < target; ++k) power = convolve(rho.rho, power, FullConvolution{}, method);
    out.push_back(deviation_of(power, rho.sigma2, target));
  }
  return out;
}

int cells_for_convolution_power(double support_radius, int k, double h) {
  // Half-extent L = (n h) / 2 must reach k R; keep n odd.
  int n = static_cast<int>(std::ceil(2.0 * k * support_radius / h));
  if (n % 2 == 0) ++n;
  return std::max(n, 3);
}

}  // namespace nlsym
