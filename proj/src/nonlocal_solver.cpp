#include "nlsym/nonlocal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsym/convolution.hpp"
#include "nlsym/error.hpp"

namespace nlsym {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> values_on(const GridField& f, const DomainMask& domain) {
  std::vector<double> out;
  out.reserve(domain.count());
  for (CellIndex c : domain.cells()) out.push_back(f.value(c));
  return out;
}

void require_nonnegative_inside(const GridField& f, const DomainMask& domain, const char* what) {
  if (!(f.grid() == domain.grid())) throw InvalidArgument(std::string(what) + " lives on a different grid");
  if (!f.mask().is_subset_of(domain)) throw InvalidArgument(std::string(what) + " is not supported in the domain");
  for (CellIndex c : f.mask().cells())
    if (!(f.value(c) >= 0.0)) throw InvalidArgument(std::string(what) + " must be non-negative");
}

void require_kernel_on(const RescaledKernel& kernel, const DomainMask& domain) {
  if (!(kernel.rho.grid() == domain.grid())) throw InvalidArgument("kernel lives on a different grid");
}

void require_absorption(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("absorption c must be finite and >= 0");
}

double domain_diameter(const DomainMask& domain) {
  const GridSpec& grid = domain.grid();
  Point lo{kInfinity, kInfinity};
  Point hi{-kInfinity, -kInfinity};
  for (CellIndex c : domain.cells()) {
    const Point x = grid.center(c);
    for (int a = 0; a < grid.dimension(); ++a) {
      lo[a] = std::min(lo[a], x[a]);
      hi[a] = std::max(hi[a], x[a]);
    }
  }
  double d2 = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) d2 += (hi[a] - lo[a] + grid.h()) * (hi[a] - lo[a] + grid.h());
  return std::sqrt(d2);
}

}  // namespace

void validate(const StationaryProblem& problem) {
  require_absorption(problem.c);
  require_kernel_on(problem.kernel, problem.domain);
  require_nonnegative_inside(problem.forcing, problem.domain, "forcing");
}

AuxCoefficients aux_coefficients(const StationaryProblem& problem) {
  const double c1 = problem.kernel.base.c1;
  const double eps2 = problem.kernel.epsilon * problem.kernel.epsilon;
  const double denom = c1 + problem.c * eps2;
  const std::vector<double> f = values_on(problem.forcing, problem.domain);
  std::vector<double> xi(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) xi[k] = eps2 * f[k] / denom;
  return AuxCoefficients{c1 / denom, GridField(problem.domain, xi)};
}

std::size_t default_max_iterations(const StationaryProblem& problem, double tol) {
  const double ratio = domain_diameter(problem.domain) / problem.kernel.epsilon;
  const double digits = std::max(1.0, std::log(1.0 / std::max(tol, 1e-300)));
  const double estimate = 4.0 * problem.kernel.base.c1 * ratio * ratio * digits;
  return 1000 + static_cast<std::size_t>(std::min(estimate, 1e8));
}

StationarySolution solve_stationary(const StationaryProblem& problem, double tol, std::size_t max_iterations,
                                    const IterateObserver& observer) {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  validate(problem);
  const auto start = Clock::now();

  const AuxCoefficients aux = aux_coefficients(problem);
  const MaskedConvolution op(problem.kernel.rho, problem.domain);
  const std::vector<double> xi = aux.xi.member_values();
  std::vector<double> u = xi;
  std::vector<double> next(u.size());
  if (observer) observer(0, GridField(problem.domain, u));

  SolveReport report;
  report.alpha = aux.alpha;
  report.stability_margin = 1.0 - aux.alpha;
  double previous_step = kInfinity;
  double step = kInfinity;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    op.apply(u, next);
    step = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      next[k] = aux.alpha * next[k] + xi[k];
      step = std::max(step, std::abs(next[k] - u[k]));
    }
    u.swap(next);
    report.residual_history.push_back(step);
    if (observer) observer(it, GridField(problem.domain, u));
    if (step <= tol) {
      const double q = std::isfinite(previous_step) && previous_step > 0.0 ? step / previous_step : 0.0;
      if (step == 0.0 || (q < 1.0 && step * q / (1.0 - q) <= tol)) {
        report.iterations = it;
        report.residual = step;
        report.wall_time = Clock::now() - start;
        return StationarySolution{GridField(problem.domain, u), std::move(report)};
      }
    }
    previous_step = step;
  }
  throw ConvergenceFailure("fixed-point iteration did not reach tol " + std::to_string(tol) + " in " +
                               std::to_string(max_iterations) + " iterations (last step " +
                               std::to_string(step) + ")",
                           step, max_iterations);
}

double stability_max_tau(double c, const RescaledKernel& kernel) {
  require_absorption(c);
  return 1.0 / (c + kernel.jeps_scale);
}

std::size_t EvolutionProblem::step_count() const {
  if (!(tau > 0.0) || !(horizon > 0.0)) throw InvalidArgument("horizon and tau must be positive");
  const double ratio = horizon / tau;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("horizon must be a whole number of time steps");
  return static_cast<std::size_t>(steps);
}

const GridField& EvolutionProblem::forcing_at(std::size_t n) const {
  return forcing.size() == 1 ? forcing.front() : forcing.at(n);
}

void validate(const EvolutionProblem& problem) {
  require_absorption(problem.c);
  require_kernel_on(problem.kernel, problem.domain);
  const std::size_t steps = problem.step_count();
  if (problem.forcing.empty()) throw InvalidArgument("evolution forcing sequence is empty");
  if (problem.forcing.size() != 1 && problem.forcing.size() < steps)
    throw InvalidArgument("evolution forcing needs one field per step (or a single constant field)");
  for (const GridField& g : problem.forcing) require_nonnegative_inside(g, problem.domain, "forcing");
  require_nonnegative_inside(problem.initial, problem.domain, "initial datum");
  const double tau_max = stability_max_tau(problem.c, problem.kernel);
  if (!(problem.tau < tau_max))
    throw InvalidArgument("time step " + std::to_string(problem.tau) + " violates the stability bound tau < " +
                          std::to_string(tau_max));
}

EvolutionSolution solve_evolution(const EvolutionProblem& problem) {
  validate(problem);
  const auto start = Clock::now();
  const std::size_t steps = problem.step_count();
  const double tau = problem.tau;
  const double gain = tau * problem.kernel.jeps_scale;
  const double beta = 1.0 - tau * (problem.c + problem.kernel.jeps_scale);
  const MaskedConvolution op(problem.kernel.rho, problem.domain);

  EvolutionSolution out{{}, {}};
  out.trajectory.reserve(steps + 1);
  std::vector<double> w = values_on(problem.initial, problem.domain);
  std::vector<double> conv(w.size());
  out.trajectory.emplace_back(problem.domain, w);
  for (std::size_t n = 0; n < steps; ++n) {
    const std::vector<double> h = values_on(problem.forcing_at(n), problem.domain);
    op.apply(w, conv);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = gain * conv[k] + beta * w[k] + tau * h[k];
    out.trajectory.emplace_back(problem.domain, w);
  }
  out.report.iterations = steps;
  out.report.alpha = gain;
  out.report.beta = beta;
  out.report.stability_margin = beta;
  out.report.wall_time = Clock::now() - start;
  return out;
}

PiecewiseConstantInterpolant::PiecewiseConstantInterpolant(std::vector<GridField> trajectory, double tau)
    : trajectory_(std::move(trajectory)), tau_(tau) {
  if (trajectory_.empty()) throw InvalidArgument("interpolant needs a non-empty trajectory");
  if (!(tau > 0.0)) throw InvalidArgument("interpolant needs tau > 0");
}

std::size_t PiecewiseConstantInterpolant::interval_index(double t) const {
  const double T = horizon();
  if (!(t >= 0.0) || t > T * (1.0 + 1e-12)) throw InvalidArgument("time outside [0, T]");
  double r = t / tau_;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) r = nearest;
  const double n = std::ceil(r) - 1.0;
  if (n <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(n), trajectory_.size() - 1);
}

const GridField& PiecewiseConstantInterpolant::at(double t) const { return trajectory_[interval_index(t)]; }

double PiecewiseConstantInterpolant::space_time_norm(double p) const {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be >= 1");
  const std::size_t steps = trajectory_.size() - 1;
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t n = 0; n < std::max<std::size_t>(steps, 1); ++n) m = std::max(m, lp_norm(trajectory_[n], p));
    return m;
  }
  std::vector<double> terms;
  terms.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) terms.push_back(tau_ * std::pow(lp_norm(trajectory_[n], p), p));
  return std::pow(accurate_sum(terms), 1.0 / p);
}

}  // namespace nlsym
