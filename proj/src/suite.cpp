#include "nlsym/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlsym/error.hpp"
#include "nlsym/rearrange.hpp"

namespace nlsym {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sum of a few Gaussian bumps with random centers, widths and weights.
struct Potential {
  std::vector<Point> centers;
  std::vector<double> widths;
  std::vector<double> weights;
  int dimension;

  Potential(const GridSpec& grid, Rng& rng) : dimension(grid.dimension()) {
    const double L = grid.half_extent();
    const std::size_t bumps = 2 + rng.index(3);
    for (std::size_t b = 0; b < bumps; ++b) {
      Point c{0.0, 0.0};
      for (int a = 0; a < dimension; ++a) c[a] = rng.uniform(-0.8 * L, 0.8 * L);
      centers.push_back(c);
      widths.push_back(rng.uniform(0.15 * L, 0.6 * L));
      weights.push_back(rng.uniform(0.2, 1.0));
    }
  }

  double operator()(const Point& x) const {
    double s = 0.0;
    for (std::size_t b = 0; b < centers.size(); ++b) {
      double r2 = 0.0;
      for (int a = 0; a < dimension; ++a) r2 += (x[a] - centers[b][a]) * (x[a] - centers[b][a]);
      s += weights[b] * std::exp(-r2 / (2.0 * widths[b] * widths[b]));
    }
    return s;
  }
};

// Domain cells sorted by decreasing potential, ties by cell index.
std::vector<CellIndex> cells_by_potential(const DomainMask& domain, const Potential& phi) {
  const GridSpec& grid = domain.grid();
  std::vector<std::pair<double, CellIndex>> keyed;
  keyed.reserve(domain.count());
  for (CellIndex c : domain.cells()) keyed.emplace_back(phi(grid.center(c)), c);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<CellIndex> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

DomainMask random_shape(const GridSpec& grid, Rng& rng) {
  const double L = grid.half_extent();
  const int dim = grid.dimension();
  Point center{0.0, 0.0};
  for (int a = 0; a < dim; ++a) center[a] = rng.uniform(-0.45 * L, 0.45 * L);
  if (dim == 2 && rng.uniform() < 0.4) {
    const double radius = rng.uniform(0.15 * L, 0.4 * L);
    return DomainMask::from_predicate(grid, [=](const Point& x) {
      const double dx = x[0] - center[0];
      const double dy = x[1] - center[1];
      return dx * dx + dy * dy < radius * radius;
    });
  }
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const double half = rng.uniform(0.1 * L, 0.35 * L);
    lo[a] = center[a] - half;
    hi[a] = center[a] + half;
  }
  return box_mask(grid, lo, hi);
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t index) {
  return splitmix64(splitmix64(base) ^ static_cast<std::uint64_t>(index));
}

GridSpec suite_grid(int dimension, const SuiteOptions& options) {
  if (dimension == 1) return GridSpec(1, options.half_extent_1d, options.cells_1d);
  if (dimension == 2) return GridSpec(2, options.half_extent_2d, options.cells_2d);
  throw InvalidArgument("suite dimension must be 1 or 2");
}

DomainMask random_domain(const GridSpec& grid, Rng& rng) {
  DomainMask domain = random_shape(grid, rng);
  const std::size_t pieces = 1 + rng.index(3);
  for (std::size_t k = 1; k < pieces; ++k) domain = mask_union(domain, random_shape(grid, rng));

  const std::vector<std::size_t> counts = complete_shell_counts(grid, domain.count());
  if (counts.empty()) throw DomainTooSmall("random domain too small for a complete shell");
  const std::size_t target = counts.back();
  if (target == domain.count()) return domain;
  const Potential phi(grid, rng);
  std::vector<CellIndex> kept = cells_by_potential(domain, phi);
  kept.resize(target);
  return DomainMask(grid, std::move(kept));
}

GridField random_data(const DomainMask& domain, Rng& rng, bool realizable) {
  const GridSpec& grid = domain.grid();
  const std::size_t m = domain.count();
  std::vector<double> values(m);
  if (!realizable) {
    for (double& v : values) v = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.0, 2.0);
    return GridField(domain, values);
  }

  const std::vector<std::size_t> shells = shell_sizes(grid, m);
  std::vector<double> levels(shells.size());
  double level = rng.uniform(0.5, 2.0);
  for (double& l : levels) {
    l = level;
    level *= 1.0 - 0.3 * rng.uniform();
  }
  if (rng.uniform() < 0.3) {
    const std::size_t cut = shells.size() / 2 + rng.index(shells.size() - shells.size() / 2 + 1);
    for (std::size_t s = cut; s < levels.size(); ++s) levels[s] = 0.0;
  }
  std::vector<double> sorted;
  sorted.reserve(m);
  for (std::size_t s = 0; s < shells.size(); ++s) sorted.insert(sorted.end(), shells[s], levels[s]);

  const Potential phi(grid, rng);
  const std::vector<CellIndex> order = cells_by_potential(domain, phi);
  GridField field(domain);
  for (std::size_t k = 0; k < m; ++k) field.set(order[k], sorted[k]);
  return field;
}

namespace {

struct Parameters {
  double epsilon;
  double c;
  double p;
};

Parameters parameters_for(std::size_t index, const SuiteOptions& options) {
  const std::size_t ne = options.epsilons.size();
  const std::size_t nc = options.absorptions.size();
  const std::size_t np = options.exponents.size();
  if (ne == 0 || nc == 0 || np == 0) throw InvalidArgument("suite parameter lists must be non-empty");
  return {options.epsilons[index % ne], options.absorptions[(index / ne) % nc],
          options.exponents[(index / (ne * nc)) % np]};
}

}  // namespace

StationaryInstance make_stationary_instance(int dimension, std::uint64_t base_seed, std::size_t index,
                                            const SuiteOptions& options) {
  const GridSpec grid = suite_grid(dimension, options);
  const std::uint64_t seed = instance_seed(base_seed, index);
  Rng rng(seed);
  DomainMask domain = random_domain(grid, rng);
  GridField forcing = random_data(domain, rng, options.realizable);
  const Parameters prm = parameters_for(index, options);
  return StationaryInstance{index, seed, std::move(domain), std::move(forcing), prm.epsilon, prm.c, prm.p,
                            options.kernel};
}

EvolutionInstance make_evolution_instance(std::uint64_t base_seed, std::size_t index, const SuiteOptions& options,
                                          double tau_fraction) {
  if (!(tau_fraction > 0.0 && tau_fraction < 1.0)) throw InvalidArgument("tau_fraction must lie in (0, 1)");
  const GridSpec grid = suite_grid(1, options);
  const std::uint64_t seed = instance_seed(base_seed, index);
  Rng rng(seed);
  DomainMask domain = random_domain(grid, rng);
  const Parameters prm = parameters_for(index, options);
  const std::size_t steps = 8 + rng.index(9);
  std::vector<GridField> forcing;
  forcing.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) forcing.push_back(random_data(domain, rng, options.realizable));
  GridField initial = random_data(domain, rng, options.realizable);

  const RescaledKernel rk =
      rescale(make_kernel(options.kernel.profile, options.kernel.support_radius, grid), prm.epsilon);
  const double tau = tau_fraction * stability_max_tau(prm.c, rk);
  return EvolutionInstance{index,   seed,        std::move(domain), std::move(forcing), std::move(initial),
                           prm.epsilon, prm.c, prm.p, tau * static_cast<double>(steps), tau, options.kernel};
}

}  // namespace nlsym
