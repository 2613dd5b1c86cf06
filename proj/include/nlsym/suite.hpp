#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "nlsym/analysis.hpp"
#include "nlsym/grid.hpp"

namespace nlsym {

/// Platform-independent uniform draws on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// Seed of instance `index` in a suite seeded with `base` (splitmix64 of both).
std::uint64_t instance_seed(std::uint64_t base, std::size_t index);

struct SuiteOptions {
  int cells_1d = 257;
  double half_extent_1d = 2.0;
  int cells_2d = 65;
  double half_extent_2d = 1.5;
  /// Shell-constant data transplanted onto Omega, so that F* is exactly
  /// radial on the lattice; otherwise independent random cell values.
  bool realizable = true;
  std::vector<double> epsilons{0.25, 0.5, 1.0};
  std::vector<double> absorptions{0.0, 1.0};
  std::vector<double> exponents{1.0, 2.0, kInfinity};
  KernelChoice kernel{};
};

GridSpec suite_grid(int dimension, const SuiteOptions& options);

/// Union of one to three random intervals, rectangles or discs inside the
/// box, trimmed by a random potential to a count at which the radial ball
/// ends on a complete shell.
DomainMask random_domain(const GridSpec& grid, Rng& rng);

/// Non-negative data on the domain. Realizable data assigns a random
/// non-increasing shell profile of radial_ball(grid, |domain|) to the domain
/// cells in decreasing order of a random smooth potential.
GridField random_data(const DomainMask& domain, Rng& rng, bool realizable);

struct StationaryInstance {
  std::size_t index;
  std::uint64_t seed;
  DomainMask domain;
  GridField forcing;
  double epsilon;
  double c;
  double p;
  KernelChoice kernel;
};

struct EvolutionInstance {
  std::size_t index;
  std::uint64_t seed;
  DomainMask domain;
  std::vector<GridField> forcing;  ///< h_n for n = 0..steps-1
  GridField initial;
  double epsilon;
  double c;
  double p;
  double horizon;
  double tau;
  KernelChoice kernel;
};

/// Instance `index` of a suite: (epsilon, c, p) cycle through all
/// combinations of the option lists by index, geometry and data come from
/// instance_seed(base_seed, index).
StationaryInstance make_stationary_instance(int dimension, std::uint64_t base_seed, std::size_t index,
                                            const SuiteOptions& options = {});

/// N = 1 evolution instance with 8 to 16 steps at tau = tau_fraction * tau_max.
EvolutionInstance make_evolution_instance(std::uint64_t base_seed, std::size_t index,
                                          const SuiteOptions& options = {}, double tau_fraction = 0.9);

}  // namespace nlsym
