#include "nlsym/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nlsym/error.hpp"
#include "nlsym/local_solver.hpp"
#include "nlsym/rearrange.hpp"

namespace nlsym {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent p must lie in [1, infinity]");
}

RescaledKernel build_kernel(const KernelChoice& choice, const GridSpec& grid, double epsilon) {
  return rescale(make_kernel(choice.profile, choice.support_radius, grid), epsilon);
}

std::size_t iteration_budget(const SolverSettings& settings, const StationaryProblem& a, const StationaryProblem& b) {
  if (settings.max_iterations > 0) return settings.max_iterations;
  return std::max(default_max_iterations(a, settings.tol), default_max_iterations(b, settings.tol));
}

struct RadialCheck {
  double violation;
  double tol;
};

RadialCheck radial_check(const GridField& u) {
  return {radial_monotonicity_violation(u), kRadialRelativeTol * std::max(0.0, u.max_value())};
}

double comparison_slack(double scale, double solver_tol) {
  return kComparisonRelativeSlack * scale + 2.0 * solver_tol;
}

GridField difference_on(const DomainMask& domain, const GridField& a, const GridField& b) {
  std::vector<double> d;
  d.reserve(domain.count());
  for (CellIndex c : domain.cells()) d.push_back(a.value(c) - b.value(c));
  return GridField(domain, d);
}

}  // namespace

bool ComparisonReport::holds(bool strict) const {
  const double allowed = strict ? 0.0 : slack;
  return gap >= -allowed && (strict ? min_step_gap >= 0.0 : failing_steps == 0) && radial_verdict;
}

DomainMask symmetrized_domain(const DomainMask& domain) { return radial_ball(domain.grid(), domain.count()); }

GridField symmetrized_data(const GridField& f, const DomainMask& domain) {
  if (!f.mask().is_subset_of(domain)) throw InvalidArgument("data is not supported in the domain");
  return schwarz_rearrange(f.extended_to(domain));
}

ComparisonReport compare_stationary(const DomainMask& domain, const GridField& forcing, double epsilon, double c,
                                    double p, const KernelChoice& kernel, const SolverSettings& settings) {
  require_exponent(p);
  const GridSpec& grid = domain.grid();
  const RescaledKernel rk = build_kernel(kernel, grid, epsilon);
  const DomainMask star = symmetrized_domain(domain);
  const StationaryProblem original{domain, forcing, c, rk};
  const StationaryProblem symmetrized{star, symmetrized_data(forcing, domain), c, rk};
  const std::size_t budget = iteration_budget(settings, original, symmetrized);

  StationarySolution v = solve_stationary(original, settings.tol, budget);
  StationarySolution u = solve_stationary(symmetrized, settings.tol, budget);

  ComparisonReport r;
  r.dimension = grid.dimension();
  r.domain_cells = domain.count();
  r.epsilon = epsilon;
  r.c = c;
  r.p = p;
  r.profile = kernel.profile;
  r.norm_original = lp_norm(v.solution, p);
  r.norm_symmetrized = lp_norm(u.solution, p);
  r.gap = r.norm_symmetrized - r.norm_original;
  r.slack = comparison_slack(r.norm_symmetrized, settings.tol);
  const RadialCheck radial = radial_check(u.solution);
  r.radial_violation = radial.violation;
  r.radial_tol = radial.tol;
  r.radial_verdict = radial.violation <= radial.tol;
  r.original_report = std::move(v.report);
  r.symmetrized_report = std::move(u.report);
  r.original_solution = std::move(v.solution);
  r.symmetrized_solution = std::move(u.solution);
  return r;
}

ComparisonReport compare_evolution(const DomainMask& domain, const std::vector<GridField>& forcing,
                                   const GridField& initial, double epsilon, double c, double horizon, double tau,
                                   double p, const KernelChoice& kernel) {
  require_exponent(p);
  const GridSpec& grid = domain.grid();
  const RescaledKernel rk = build_kernel(kernel, grid, epsilon);
  const DomainMask star = symmetrized_domain(domain);
  std::vector<GridField> forcing_star;
  forcing_star.reserve(forcing.size());
  for (const GridField& g : forcing) forcing_star.push_back(symmetrized_data(g, domain));

  const EvolutionProblem original{domain, forcing, initial, horizon, tau, c, rk};
  const EvolutionProblem symmetrized{star, forcing_star, symmetrized_data(initial, domain), horizon, tau, c, rk};
  EvolutionSolution v = solve_evolution(original);
  EvolutionSolution u = solve_evolution(symmetrized);

  ComparisonReport r;
  r.dimension = grid.dimension();
  r.domain_cells = domain.count();
  r.epsilon = epsilon;
  r.c = c;
  r.p = p;
  r.profile = kernel.profile;

  r.min_step_gap = kInfinity;
  double worst_ratio = -1.0;
  for (std::size_t n = 0; n < v.trajectory.size(); ++n) {
    const double nv = lp_norm(v.trajectory[n], p);
    const double nu = lp_norm(u.trajectory[n], p);
    r.step_norms_original.push_back(nv);
    r.step_norms_symmetrized.push_back(nu);
    const double step_gap = nu - nv;
    r.min_step_gap = std::min(r.min_step_gap, step_gap);
    if (step_gap < -comparison_slack(nu, 0.0)) ++r.failing_steps;

    const RadialCheck radial = radial_check(u.trajectory[n]);
    const double ratio = radial.violation == 0.0 ? 0.0 : (radial.tol > 0.0 ? radial.violation / radial.tol : kInfinity);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      r.radial_violation = radial.violation;
      r.radial_tol = radial.tol;
    }
    if (radial.violation > radial.tol) r.radial_verdict = false;
  }

  const PiecewiseConstantInterpolant vi(v.trajectory, tau);
  const PiecewiseConstantInterpolant ui(u.trajectory, tau);
  r.norm_original = vi.space_time_norm(p);
  r.norm_symmetrized = ui.space_time_norm(p);
  r.gap = r.norm_symmetrized - r.norm_original;
  r.slack = comparison_slack(r.norm_symmetrized, 0.0);
  r.original_report = std::move(v.report);
  r.symmetrized_report = std::move(u.report);
  r.original_solution = v.trajectory.back();
  r.symmetrized_solution = u.trajectory.back();
  return r;
}

double nonlocal_limit_diffusivity(int dimension) { return 1.0 / static_cast<double>(dimension); }

std::vector<SweepRow> convergence_sweep(const DomainMask& domain, const GridField& forcing, double c, double p,
                                        const KernelChoice& kernel, const std::vector<double>& epsilons,
                                        const SolverSettings& settings) {
  require_exponent(p);
  const GridSpec& grid = domain.grid();
  const double diffusivity = nonlocal_limit_diffusivity(grid.dimension());
  const DomainMask star = symmetrized_domain(domain);
  const GridField forcing_star = symmetrized_data(forcing, domain);
  const GridField V = solve_poisson({domain, forcing, c, diffusivity});
  const GridField U = solve_poisson({star, forcing_star, c, diffusivity});
  const Kernel base = make_kernel(kernel.profile, kernel.support_radius, grid);

  std::vector<SweepRow> rows;
  for (double eps : epsilons) {
    const RescaledKernel rk = rescale(base, eps);
    const StationaryProblem original{domain, forcing, c, rk};
    const StationaryProblem symmetrized{star, forcing_star, c, rk};
    const std::size_t budget = iteration_budget(settings, original, symmetrized);
    const StationarySolution v = solve_stationary(original, settings.tol, budget);
    const StationarySolution u = solve_stationary(symmetrized, settings.tol, budget);
    rows.push_back(SweepRow{eps, lp_norm(difference_on(domain, v.solution, V), p),
                            lp_norm(difference_on(star, u.solution, U), p), v.report.iterations,
                            u.report.iterations});
  }
  return rows;
}

ComparisonReport corollary_check(const DomainMask& domain, const GridField& forcing, double c, double p, double tol,
                                 double diffusivity) {
  require_exponent(p);
  const DomainMask star = symmetrized_domain(domain);
  GridField V = solve_poisson({domain, forcing, c, diffusivity}, tol);
  GridField U = solve_poisson({star, symmetrized_data(forcing, domain), c, diffusivity}, tol);

  ComparisonReport r;
  r.dimension = domain.grid().dimension();
  r.domain_cells = domain.count();
  r.c = c;
  r.p = p;
  r.norm_original = lp_norm(V, p);
  r.norm_symmetrized = lp_norm(U, p);
  r.gap = r.norm_symmetrized - r.norm_original;
  r.slack = comparison_slack(r.norm_symmetrized, tol);
  const RadialCheck radial = radial_check(U);
  r.radial_violation = radial.violation;
  r.radial_tol = radial.tol;
  r.radial_verdict = radial.violation <= radial.tol;
  r.original_solution = std::move(V);
  r.symmetrized_solution = std::move(U);
  return r;
}

}  // namespace nlsym
