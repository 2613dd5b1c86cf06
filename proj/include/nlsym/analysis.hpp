#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nlsym/grid.hpp"
#include "nlsym/kernel.hpp"
#include "nlsym/nonlocal_solver.hpp"

namespace nlsym {

struct KernelChoice {
  KernelProfile profile = KernelProfile::UniformBall;
  double support_radius = 1.0;  ///< support of the base kernel J (before rescaling)
};

struct SolverSettings {
  double tol = 1e-10;
  std::size_t max_iterations = 0;  ///< 0: default_max_iterations of each problem
};

/// Relative slack on comparison inequalities, on top of twice the solver tolerance.
inline constexpr double kComparisonRelativeSlack = 1e-6;
/// Radial verdicts allow this fraction of max u at equal or larger radius.
inline constexpr double kRadialRelativeTol = 1e-8;

/// Outcome of comparing a problem on (Omega, F) with its symmetrization on (Omega*, F*).
struct ComparisonReport {
  int dimension = 0;
  std::size_t domain_cells = 0;
  double epsilon = 0.0;  ///< 0 for the local (Laplacian) comparison
  double c = 0.0;
  double p = 0.0;
  KernelProfile profile = KernelProfile::UniformBall;

  double norm_original = 0.0;     ///< ||v||_p (space-time for evolution)
  double norm_symmetrized = 0.0;  ///< ||u||_p
  double gap = 0.0;               ///< norm_symmetrized - norm_original
  double slack = 0.0;             ///< allowed negative gap

  bool radial_verdict = true;
  double radial_violation = 0.0;  ///< worst (over steps) radial_monotonicity_violation(u)
  double radial_tol = 0.0;        ///< tolerance the worst violation was judged against

  SolveReport original_report;
  SolveReport symmetrized_report;

  // Evolution only: per-state norms for n = 0..steps and the worst per-state gap.
  std::vector<double> step_norms_original;
  std::vector<double> step_norms_symmetrized;
  double min_step_gap = 0.0;
  std::size_t failing_steps = 0;

  std::optional<GridField> original_solution;     ///< v (last state for evolution)
  std::optional<GridField> symmetrized_solution;  ///< u (last state for evolution)

  /// gap >= -slack (gap >= 0 when strict), every step within slack, radial verdict true.
  bool holds(bool strict = false) const;
};

/// Symmetrized domain: radial_ball(grid, domain.count()).
DomainMask symmetrized_domain(const DomainMask& domain);
/// Schwarz rearrangement of f zero-extended to the domain; lives on symmetrized_domain(domain).
GridField symmetrized_data(const GridField& f, const DomainMask& domain);

ComparisonReport compare_stationary(const DomainMask& domain, const GridField& forcing, double epsilon, double c,
                                    double p, const KernelChoice& kernel, const SolverSettings& settings = {});

/// `forcing` holds h_n for n = 0..steps-1, or one field for constant-in-time data.
ComparisonReport compare_evolution(const DomainMask& domain, const std::vector<GridField>& forcing,
                                   const GridField& initial, double epsilon, double c, double horizon, double tau,
                                   double p, const KernelChoice& kernel);

struct SweepRow {
  double epsilon;
  double error_original;     ///< ||v_eps - V||_p on Omega
  double error_symmetrized;  ///< ||u_eps - U||_p on Omega*
  std::size_t iterations_original;
  std::size_t iterations_symmetrized;
};

/// Diffusivity of the local limit of the rescaled nonlocal operator: with
/// C1 = 2 / sigma^2 it converges to -(1/N) Lap.
double nonlocal_limit_diffusivity(int dimension);

/// Nonlocal solutions at each epsilon against the local limits V, U.
std::vector<SweepRow> convergence_sweep(const DomainMask& domain, const GridField& forcing, double c, double p,
                                        const KernelChoice& kernel, const std::vector<double>& epsilons,
                                        const SolverSettings& settings = {});

/// Local comparison ||V||_p on Omega against ||U||_p on Omega* for -D Lap W + c W = F.
ComparisonReport corollary_check(const DomainMask& domain, const GridField& forcing, double c, double p,
                                 double tol = 1e-9, double diffusivity = 1.0);

}  // namespace nlsym
