// Acceptance checks: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails. Each check prints the measured quantities it judged.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nlsym/analysis.hpp"
#include "nlsym/config.hpp"
#include "nlsym/convolution.hpp"
#include "nlsym/kernel.hpp"
#include "nlsym/local_solver.hpp"
#include "nlsym/nonlocal_solver.hpp"
#include "nlsym/rearrange.hpp"
#include "nlsym/runner.hpp"
#include "nlsym/suite.hpp"
#include "oracles.hpp"

using namespace nlsym;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

constexpr std::uint64_t kSeed = 20240501;
constexpr double kTol = 1e-10;

// Largest shortfall below the slack, as a fraction of the slack (<= 0 means the inequality holds).
double normalized_shortfall(const ComparisonReport& r) { return -(r.gap + r.slack) / r.slack; }

// 1. Stationary comparison, 50 instances N = 1 and 10 instances N = 2.
// 2. Radial monotonicity of every symmetrized solution in the same suite.
struct StationarySuite {
  std::size_t held[2] = {0, 0};
  std::size_t radial[2] = {0, 0};
  std::size_t total[2] = {0, 0};
  double worst_shortfall = -kInfinity;
  double worst_radial_ratio = 0.0;
  double runtime = 0.0;
};

StationarySuite run_stationary_suite() {
  StationarySuite s;
  const auto t0 = Clock::now();
  for (int dim : {1, 2}) {
    const std::size_t count = dim == 1 ? 50 : 10;
    for (std::size_t i = 0; i < count; ++i) {
      const StationaryInstance in = make_stationary_instance(dim, kSeed + dim, i);
      const ComparisonReport r =
          compare_stationary(in.domain, in.forcing, in.epsilon, in.c, in.p, in.kernel, {kTol, 0});
      const int d = dim - 1;
      ++s.total[d];
      if (r.gap >= -r.slack) ++s.held[d];
      if (r.radial_verdict) ++s.radial[d];
      s.worst_shortfall = std::max(s.worst_shortfall, normalized_shortfall(r));
      if (r.radial_tol > 0.0) s.worst_radial_ratio = std::max(s.worst_radial_ratio, r.radial_violation / r.radial_tol);
    }
  }
  s.runtime = seconds_since(t0);
  return s;
}

Verdict criterion1(const StationarySuite& s) {
  const bool pass = s.held[0] == s.total[0] && s.held[1] == s.total[1] && s.runtime < 120.0;
  return {pass, "N=1 " + std::to_string(s.held[0]) + "/" + std::to_string(s.total[0]) + ", N=2 " +
                    std::to_string(s.held[1]) + "/" + std::to_string(s.total[1]) +
                    ", worst (gap+slack)/slack shortfall " + num(s.worst_shortfall) + ", " + num(s.runtime) + " s"};
}

Verdict criterion2(const StationarySuite& s) {
  const bool pass = s.radial[0] == s.total[0] && s.radial[1] == s.total[1];
  return {pass, "radial N=1 " + std::to_string(s.radial[0]) + "/" + std::to_string(s.total[0]) + ", N=2 " +
                    std::to_string(s.radial[1]) + "/" + std::to_string(s.total[1]) +
                    ", worst violation/tol " + num(s.worst_radial_ratio)};
}

Verdict criterion3() {
  const auto t0 = Clock::now();
  std::size_t held = 0;
  std::size_t radial = 0;
  std::size_t min_steps = 1000;
  double worst = -kInfinity;
  constexpr std::size_t count = 25;
  for (std::size_t i = 0; i < count; ++i) {
    const EvolutionInstance in = make_evolution_instance(kSeed + 3, i, {}, 0.9);
    min_steps = std::min(min_steps, in.forcing.size());
    const ComparisonReport r = compare_evolution(in.domain, in.forcing, in.initial, in.epsilon, in.c, in.horizon,
                                                 in.tau, in.p, in.kernel);
    if (r.gap >= -r.slack && r.failing_steps == 0) ++held;
    if (r.radial_verdict) ++radial;
    worst = std::max(worst, normalized_shortfall(r));
  }
  const double t = seconds_since(t0);
  const bool pass = held == count && radial == count && min_steps >= 8 && t < 120.0;
  return {pass, "inequalities " + std::to_string(held) + "/" + std::to_string(count) + ", radial every step " +
                    std::to_string(radial) + "/" + std::to_string(count) + ", min steps " + std::to_string(min_steps) +
                    ", worst shortfall " + num(worst) + ", " + num(t) + " s"};
}

RescaledKernel clt_kernel(int k_reach, double h) {
  const int n = cells_for_convolution_power(1.0, k_reach, h);
  const GridSpec grid(1, 0.5 * n * h, n);
  return rescale(make_kernel(KernelProfile::UniformBall, 1.0, grid), 1.0);
}

Verdict criterion4() {
  const auto t0 = Clock::now();
  const std::vector<double> m = ball_mass_decay(clt_kernel(256, 1.0 / 64.0), 1.0, 256);
  const double t = seconds_since(t0);
  bool monotone = true;
  for (std::size_t k = 4; k < m.size(); ++k)  // m[k] is m_{k+1}
    if (m[k] > m[k - 1]) monotone = false;
  const double ratio = m[63] / m[15];
  const bool ratio_ok = std::abs(ratio - 0.5) <= 0.25 * 0.5;
  const bool small = m[255] < 0.05;
  return {monotone && ratio_ok && small && t < 30.0,
          std::string("non-increasing from k=4: ") + (monotone ? "yes" : "no") + ", m64/m16 = " + num(ratio, 4) +
              " (target 0.5 +- 25%), m256 = " + num(m[255], 4) + " (needs < 0.05), " + num(t) + " s"};
}

Verdict criterion5() {
  const std::vector<int> ks{4, 16, 64, 256};
  const std::vector<double> d = gaussian_deviations(clt_kernel(256, 1.0 / 64.0), ks);
  bool decreasing = true;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (!(d[i] < d[i - 1])) decreasing = false;
  std::string detail = "deviations";
  for (std::size_t i = 0; i < d.size(); ++i) detail += " k=" + std::to_string(ks[i]) + ":" + num(d[i]);
  return {decreasing && d.back() < 0.02, detail + " (h = 1/64)"};
}

GridField random_radial(const GridSpec& grid, Rng& rng) {
  const double max_radius = 0.5 * grid.half_extent();
  const std::size_t reach = ball_mask_radius(grid, max_radius).count();
  const std::vector<std::size_t> counts = complete_shell_counts(grid, reach);
  const std::size_t m = counts[rng.index(counts.size())];
  return schwarz_rearrange(nlsym::random_data(radial_ball(grid, m), rng, true));
}

Verdict criterion6() {
  Rng rng(kSeed + 6);
  std::size_t ok[2] = {0, 0};
  std::size_t total[2] = {0, 0};
  double worst[2] = {0.0, 0.0};
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = trial < 100 ? 1 : 2;
    const GridSpec grid = dim == 1 ? GridSpec(1, 2.0, 129) : GridSpec(2, 2.0, 41);
    const GridField a = random_radial(grid, rng);
    const GridField b = random_radial(grid, rng);
    const GridField c = convolve(a, b, FullConvolution{});
    const double tol = 1e-12 * c.max_value();
    ++total[dim - 1];
    if (is_radially_nonincreasing(c, tol)) ++ok[dim - 1];
    worst[dim - 1] = std::max(worst[dim - 1], radial_monotonicity_violation(c) / c.max_value());
  }
  return {ok[0] == total[0] && ok[1] == total[1],
          "N=1 " + std::to_string(ok[0]) + "/" + std::to_string(total[0]) + " (worst rel. violation " +
              num(worst[0]) + "), N=2 " + std::to_string(ok[1]) + "/" + std::to_string(total[1]) +
              " (worst rel. violation " + num(worst[1]) + ")"};
}

GridField random_field(const GridSpec& grid, Rng& rng) {
  const double density = rng.uniform(0.2, 1.0);
  const bool quantized = rng.uniform() < 0.3;
  std::vector<CellIndex> cells;
  std::vector<double> values;
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    if (rng.uniform() >= density) continue;
    double v = rng.uniform();
    if (quantized) v = std::floor(8.0 * v) / 8.0;
    cells.push_back(c);
    values.push_back(v);
  }
  if (cells.empty()) {
    cells.push_back(rng.index(grid.cell_count()));
    values.push_back(1.0);
  }
  return GridField(DomainMask(grid, std::move(cells)), values);
}

GridField gaussian_field(const GridSpec& grid, const Point& center, double width) {
  return GridField::from_function(DomainMask::full(grid), [&](const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    return std::exp(-r2 / (2.0 * width * width));
  });
}

Verdict criterion7() {
  Rng rng(kSeed + 7);
  std::size_t equi = 0;
  std::size_t norms = 0;
  std::size_t hl = 0;
  std::size_t riesz = 0;
  std::size_t riesz_total = 0;
  std::size_t riesz_kernel_form = 0;
  double worst_riesz = 0.0;
  constexpr int fields = 1000;
  for (int trial = 0; trial < fields; ++trial) {
    const int dim = trial % 2 == 0 ? 1 : 2;
    const GridSpec grid = dim == 1 ? GridSpec(1, 1.0, 33) : GridSpec(2, 1.0, 11);
    const GridField f1 = random_field(grid, rng);
    const GridField f2 = random_field(grid, rng);
    const GridField s1 = schwarz_rearrange(f1);
    if (check_equimeasurable(f1, s1)) ++equi;
    bool norm_ok = true;
    for (double p : {1.0, 2.0, 3.5, kInfinity})
      if (std::abs(lp_norm(s1, p) - lp_norm(f1, p)) > 1e-12 * lp_norm(f1, p)) norm_ok = false;
    if (norm_ok) ++norms;
    const double hl_scale = inner_product(s1, schwarz_rearrange(f2));
    if (hardy_littlewood_gap(f1, f2) >= -1e-12 * hl_scale) ++hl;
    if (dim == 1) {
      const GridField f3 = random_field(grid, rng);
      const double scale = lp_norm(f1, 1.0) * lp_norm(f2, 1.0) * lp_norm(f3, kInfinity);
      ++riesz_total;
      const double gap = riesz_gap(f1, f2, f3);
      if (gap >= -1e-12 * scale) ++riesz;
      worst_riesz = std::min(worst_riesz, gap / scale);
      if (riesz_gap(f1, schwarz_rearrange(f2), f3) >= -1e-12 * scale) ++riesz_kernel_form;
    }
  }

  // N = 2 smooth triples at h and h/2: negative Riesz excursions must at least halve.
  Rng smooth(kSeed + 70);
  std::size_t shrinking = 0;
  double worst_excursion = 0.0;
  for (int t = 0; t < 10; ++t) {
    Point centers[3];
    double widths[3];
    for (int i = 0; i < 3; ++i) {
      centers[i] = {smooth.uniform(-0.5, 0.5), smooth.uniform(-0.5, 0.5)};
      widths[i] = smooth.uniform(0.15, 0.35);
    }
    double excursion[2];
    for (int level = 0; level < 2; ++level) {
      const double h = level == 0 ? 1.0 / 8.0 : 1.0 / 16.0;
      const int n = level == 0 ? 33 : 67;
      const GridSpec grid(2, 0.5 * n * h, n);
      const GridField a = gaussian_field(grid, centers[0], widths[0]);
      const GridField b = gaussian_field(grid, centers[1], widths[1]);
      const GridField c = gaussian_field(grid, centers[2], widths[2]);
      excursion[level] = std::max(0.0, -riesz_gap(a, b, c));
    }
    worst_excursion = std::max(worst_excursion, excursion[1]);
    if (excursion[1] <= 0.5 * excursion[0] || excursion[1] == 0.0) ++shrinking;
  }

  const int half = fields / 2;
  const bool pass = equi == fields && norms == fields && hl == fields && riesz == riesz_total && shrinking == 10;
  return {pass, "equimeasurable " + std::to_string(equi) + "/" + std::to_string(fields) + ", norm identity " +
                    std::to_string(norms) + "/" + std::to_string(fields) + ", Hardy-Littlewood " +
                    std::to_string(hl) + "/" + std::to_string(fields) + ", N=1 Riesz " + std::to_string(riesz) + "/" +
                    std::to_string(half) + " (worst gap/scale " + num(worst_riesz) +
                    "; with symmetric-decreasing middle factor " + std::to_string(riesz_kernel_form) + "/" +
                    std::to_string(half) + "), N=2 smooth excursions shrinking " + std::to_string(shrinking) +
                    "/10 (worst at h/2 " + num(worst_excursion) + ")"};
}

struct RefinedGap {
  double gap[2];
  double slack[2];
};

// gap at h and h/2 for the local problems; domain and data given in physical coordinates.
RefinedGap refined_corollary(int dim, const std::function<DomainMask(const GridSpec&)>& domain,
                             const std::function<double(const Point&)>& forcing, double h0, int n0) {
  RefinedGap out{};
  for (int level = 0; level < 2; ++level) {
    const double h = level == 0 ? h0 : 0.5 * h0;
    const int n = level == 0 ? n0 : 2 * n0 + 1;
    const GridSpec grid(dim, 0.5 * n * h, n);
    const DomainMask omega = domain(grid);
    const ComparisonReport r = corollary_check(omega, GridField::from_function(omega, forcing), 0.0, 2.0);
    out.gap[level] = r.gap;
    out.slack[level] = r.slack;
  }
  return out;
}

Verdict criterion8() {
  bool pass = true;
  std::ostringstream detail;
  const auto judge = [&](const RefinedGap& g) {
    const double need0 = std::max(0.0, -g.gap[0]);
    const double need1 = std::max(0.0, -g.gap[1]);
    const bool holds = g.gap[0] >= -g.slack[0] && g.gap[1] >= -g.slack[1];
    const bool shrinking = need1 <= 0.6 * need0 || need1 <= g.slack[1];
    return holds && shrinking;
  };

  struct Case1d {
    Point lo1, hi1, lo2, hi2;
    double center, width;
  };
  const Case1d cases[] = {
      {{-1.0, 0}, {1.0, 0}, {-1.0, 0}, {1.0, 0}, 0.45, 0.2},
      {{-1.2, 0}, {-0.3, 0}, {0.1, 0}, {0.9, 0}, 0.5, 0.3},
      {{-0.9, 0}, {0.6, 0}, {-0.9, 0}, {0.6, 0}, -0.5, 0.15},
      {{-1.3, 0}, {-0.8, 0}, {-0.5, 0}, {1.2, 0}, 0.7, 0.4},
  };
  std::size_t ok1 = 0;
  double min_gap = kInfinity;
  for (const Case1d& c : cases) {
    const RefinedGap g = refined_corollary(
        1, [&](const GridSpec& grid) { return mask_union(box_mask(grid, c.lo1, c.hi1), box_mask(grid, c.lo2, c.hi2)); },
        [&](const Point& x) { return std::exp(-(x[0] - c.center) * (x[0] - c.center) / (2 * c.width * c.width)); },
        1.0 / 32.0, 97);
    if (judge(g)) ++ok1;
    min_gap = std::min({min_gap, g.gap[0], g.gap[1]});
  }
  pass = pass && ok1 == std::size(cases);
  detail << "N=1 asymmetric " << ok1 << "/" << std::size(cases) << " (min gap " << num(min_gap) << ")";

  const RefinedGap sq = refined_corollary(
      2, [](const GridSpec& grid) { return box_mask(grid, {-0.8, -0.8}, {0.8, 0.8}); },
      [](const Point&) { return 1.0; }, 1.0 / 32.0, 81);
  const bool sq_ok = judge(sq) && sq.gap[0] > 0.0 && sq.gap[1] > 0.0;
  pass = pass && sq_ok;
  detail << ", N=2 square vs disc gap " << num(sq.gap[0], 4) << " (h=1/32), " << num(sq.gap[1], 4) << " (h=1/64)";
  return {pass, detail.str()};
}

Verdict criterion9() {
  const int n = 769;
  const GridSpec grid(1, 0.5 * n / 256.0, n);  // h = 1/256
  const DomainMask omega = box_mask(grid, {-1.0, 0.0}, {1.0, 0.0});
  const GridField one = GridField::from_function(omega, [](const Point&) { return 1.0; });
  const std::vector<SweepRow> rows = convergence_sweep(omega, one, 0.0, 2.0, {}, {0.4, 0.2, 0.1}, {kTol, 0});
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].error_original < rows[i - 1].error_original) ||
        !(rows[i].error_symmetrized < rows[i - 1].error_symmetrized))
      decreasing = false;
  const GridField V = solve_poisson({omega, one, 0.0, nonlocal_limit_diffusivity(1)});
  double oracle_error = 0.0;
  for (CellIndex c : omega.cells()) {
    const double x = grid.center(c)[0];
    oracle_error = std::max(oracle_error, std::abs(V.value(c) - 0.5 * (1.0 - x * x)));
  }
  std::string detail = "errors";
  for (const SweepRow& r : rows)
    detail += " eps=" + num(r.epsilon) + ":(" + num(r.error_original) + ", " + num(r.error_symmetrized) + ")";
  return {decreasing && oracle_error <= 5e-4, detail + ", |V - (1-x^2)/2|_max = " + num(oracle_error)};
}

std::vector<double> dense_stationary(const GridField& forcing, const DomainMask& domain, const RescaledKernel& k,
                                     double c) {
  const double eps2 = k.epsilon * k.epsilon;
  const double alpha = k.base.c1 / (k.base.c1 + c * eps2);
  std::vector<double> xi = oracle::on(forcing.extended_to(domain), domain);
  for (double& x : xi) x *= eps2 / (k.base.c1 + c * eps2);
  return oracle::stationary_fixed_point(oracle::restricted_convolution_matrix(k.rho, domain), alpha, xi);
}

double dense_evolution_error(const std::vector<GridField>& forcing, const GridField& initial,
                             const DomainMask& domain, const RescaledKernel& k, double c, double tau) {
  const EvolutionSolution s = solve_evolution({domain, forcing, initial, tau * forcing.size(), tau, c, k});
  oracle::Matrix m = oracle::restricted_convolution_matrix(k.rho, domain);
  const double beta = 1.0 - tau * (c + k.jeps_scale);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (double& x : m[i]) x *= tau * k.jeps_scale;
    m[i][i] += beta;
  }
  std::vector<double> w = oracle::on(initial.extended_to(domain), domain);
  double worst = oracle::max_abs_diff(oracle::on(s.trajectory[0], domain), w);
  for (std::size_t n = 0; n < forcing.size(); ++n) {
    w = oracle::multiply(m, w);
    const std::vector<double> h = oracle::on(forcing[n].extended_to(domain), domain);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += tau * h[i];
    worst = std::max(worst, oracle::max_abs_diff(oracle::on(s.trajectory[n + 1], domain), w));
  }
  return worst;
}

Verdict criterion10() {
  SuiteOptions small;
  small.cells_1d = 33;
  small.half_extent_1d = 1.0;
  small.cells_2d = 15;
  small.half_extent_2d = 1.0;
  small.epsilons = {0.5, 1.0};

  std::size_t stationary = 0;
  std::size_t stationary_ok = 0;
  double stationary_worst = 0.0;
  for (int dim : {1, 2}) {
    for (std::size_t i = 0; stationary < (dim == 1 ? 20u : 30u) && i < 200; ++i) {
      const StationaryInstance in = make_stationary_instance(dim, kSeed + 10, i, small);
      if (in.domain.count() > 32) continue;
      const SolverSettings settings{kTol, 0};
      const ComparisonReport r =
          compare_stationary(in.domain, in.forcing, in.epsilon, in.c, in.p, in.kernel, settings);
      const RescaledKernel k = rescale(make_kernel(in.kernel.profile, in.kernel.support_radius, in.domain.grid()),
                                       in.epsilon);
      const DomainMask star = symmetrized_domain(in.domain);
      const double ev = oracle::max_abs_diff(oracle::on(*r.original_solution, in.domain),
                                             dense_stationary(in.forcing, in.domain, k, in.c));
      const double eu = oracle::max_abs_diff(oracle::on(*r.symmetrized_solution, star),
                                             dense_stationary(symmetrized_data(in.forcing, in.domain), star, k, in.c));
      const double e = std::max(ev, eu);
      stationary_worst = std::max(stationary_worst, e);
      ++stationary;
      if (e <= 10.0 * kTol) ++stationary_ok;
    }
  }

  std::size_t evolution = 0;
  std::size_t evolution_ok = 0;
  double evolution_worst = 0.0;
  for (std::size_t i = 0; evolution < 20 && i < 200; ++i) {
    const EvolutionInstance in = make_evolution_instance(kSeed + 11, i, small);
    if (in.domain.count() > 32) continue;
    const RescaledKernel k =
        rescale(make_kernel(in.kernel.profile, in.kernel.support_radius, in.domain.grid()), in.epsilon);
    const DomainMask star = symmetrized_domain(in.domain);
    std::vector<GridField> forcing_star;
    for (const GridField& g : in.forcing) forcing_star.push_back(symmetrized_data(g, in.domain));
    const double e = std::max(dense_evolution_error(in.forcing, in.initial, in.domain, k, in.c, in.tau),
                              dense_evolution_error(forcing_star, symmetrized_data(in.initial, in.domain), star, k,
                                                    in.c, in.tau));
    evolution_worst = std::max(evolution_worst, e);
    ++evolution;
    if (e <= 1e-12) ++evolution_ok;
  }
  const bool pass = stationary > 0 && evolution > 0 && stationary_ok == stationary && evolution_ok == evolution;
  return {pass, "stationary " + std::to_string(stationary_ok) + "/" + std::to_string(stationary) + " (worst " +
                    num(stationary_worst) + " vs 10 tol = " + num(10 * kTol) + "), evolution " +
                    std::to_string(evolution_ok) + "/" + std::to_string(evolution) + " (worst " +
                    num(evolution_worst) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every data file below `dir` except metadata.txt, keyed by relative path.
std::vector<std::pair<std::string, std::string>> data_files(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "metadata.txt") continue;
    out.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict criterion11() {
  const std::vector<std::string> configs = {
      "[run]\ncommand = compare-stationary\nseed = 5\n[grid]\ndimension = 1\n[suite]\ninstances = 50\n",
      "[run]\ncommand = compare-stationary\nseed = 6\n[grid]\ndimension = 2\n[suite]\ninstances = 10\n",
      "[run]\ncommand = compare-evolution\nseed = 7\n[suite]\ninstances = 25\n",
      "[run]\ncommand = check-inequalities\nseed = 8\n[grid]\ncells = 33\nhalf_extent = 1\n[suite]\ninstances = 200\n",
  };
  const fs::path root = fs::temp_directory_path() / "nlsym_acceptance_determinism";
  fs::remove_all(root);
  std::size_t identical = 0;
  std::size_t files = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ExperimentConfig config = parse_config_text(configs[i]);
    std::vector<std::vector<std::pair<std::string, std::string>>> outputs;
    for (unsigned threads : {1u, 4u, 1u}) {
      const fs::path dir = root / (std::to_string(i) + "_" + std::to_string(outputs.size()));
      const RunResult r = run(config, {dir.string(), threads});
      if (r.status == ExitStatus::ConfigRejected || r.status == ExitStatus::IoFailure) return {false, "run failed"};
      outputs.push_back(data_files(dir));
    }
    files += outputs[0].size();
    if (outputs[0] == outputs[1] && outputs[0] == outputs[2]) ++identical;
  }
  fs::remove_all(root);
  return {identical == configs.size(), std::to_string(identical) + "/" + std::to_string(configs.size()) +
                                           " suites byte-identical across reruns and 1 vs 4 threads (" +
                                           std::to_string(files) + " data files per run set)"};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const Verdict& v) {
    std::printf("[%s] C%d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };
  const auto guarded = [&](int id, const char* name, const std::function<Verdict()>& f) {
    try {
      report(id, name, f());
    } catch (const std::exception& e) {
      report(id, name, {false, std::string("threw: ") + e.what()});
    }
  };

  StationarySuite suite;
  guarded(1, "stationary comparison", [&] {
    suite = run_stationary_suite();
    return criterion1(suite);
  });
  guarded(2, "radial monotonicity of symmetrized solutions", [&] { return criterion2(suite); });
  guarded(3, "evolution comparison", criterion3);
  guarded(4, "convolution power mass decay", criterion4);
  guarded(5, "Gaussian limit of convolution powers", criterion5);
  guarded(6, "radial closure under convolution", criterion6);
  guarded(7, "rearrangement exactness and inequalities", criterion7);
  guarded(8, "local comparison", criterion8);
  guarded(9, "local limit sweep", criterion9);
  guarded(10, "oracle equivalence", criterion10);
  guarded(11, "determinism", criterion11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
