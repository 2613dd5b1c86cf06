#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlsym/convolution.hpp"
#include "nlsym/grid.hpp"

namespace nlsym {

enum class KernelProfile {
  UniformBall,        ///< J = const on B_R
  Tent,               ///< J proportional to 1 - |x|/R on B_R
  TruncatedGaussian,  ///< exp(-|x|^2 / (2 s^2)), s = R/3, clipped at R
};

/// Accepts "uniform-ball", "tent", "truncated-gaussian"; throws InvalidArgument otherwise.
KernelProfile parse_kernel_profile(std::string_view name);
std::string_view to_string(KernelProfile profile);

/// Unnormalized profile shape at relative radius t = |x|/R. Zero for t > 1.
/// At t = 1 returns the mean of the one-sided limits.
double kernel_shape(KernelProfile profile, double t);

/// A radially non-increasing kernel sampled on the grid with unit discrete mass.
struct Kernel {
  GridSpec grid;
  KernelProfile profile;
  double support_radius;
  GridField values;
  double mass;    ///< h^N sum J after renormalization
  double sigma2;  ///< h^N sum |x|^2 J
  double c1;      ///< 2 / sigma2
};

/// Samples the profile at cell centers and renormalizes to unit mass.
///
/// Throws ResolutionError if support_radius < 2h, DomainTooSmall if the
/// support does not fit in the box, InvalidArgument for an even cell count.
Kernel make_kernel(KernelProfile profile, double support_radius, const GridSpec& grid);

/// rho = eps^-N J(x/eps) resampled and renormalized; J_eps = jeps_scale * rho.
struct RescaledKernel {
  Kernel base;
  double epsilon;
  GridField rho;
  double jeps_scale;      ///< base.c1 / eps^2
  double support_radius;  ///< eps * base.support_radius
  double sigma2;          ///< discrete second moment of rho
};

RescaledKernel rescale(const Kernel& kernel, double epsilon);

/// k-fold convolution power of rho. Full mode requires k * support to fit in
/// the box (DomainTooSmall otherwise). k = 1 returns rho.
GridField convolution_power(const RescaledKernel& rho, int k, const ConvolutionMode& mode = FullConvolution{},
                            ConvolutionMethod method = ConvolutionMethod::Direct);

/// m_k = h^N sum_{|x| < R} (rho*)^k(x) for k = 1..k_max.
std::vector<double> ball_mass_decay(const RescaledKernel& rho, double radius, int k_max,
                                    ConvolutionMethod method = ConvolutionMethod::Direct);

/// max over cells of | s^N (rho*)^k(x) - phi_N(x / s) |, s^2 = k sigma2 / N,
/// phi_N the standard Gaussian density. Evaluating at cell x is nearest-cell
/// sampling of the rescaled power at y = x / s.
double gaussian_deviation(const RescaledKernel& rho, int k,
                          ConvolutionMethod method = ConvolutionMethod::Direct);

/// gaussian_deviation for each k of an increasing list, sharing one power sequence.
std::vector<double> gaussian_deviations(const RescaledKernel& rho, const std::vector<int>& ks,
                                        ConvolutionMethod method = ConvolutionMethod::Direct);

/// Number of cells per axis (odd) for a box holding the k-fold support of a
/// kernel with the given support radius at resolution h.
int cells_for_convolution_power(double support_radius, int k, double h);

}  // namespace nlsym
