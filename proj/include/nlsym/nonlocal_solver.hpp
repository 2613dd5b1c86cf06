#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nlsym/grid.hpp"
#include "nlsym/kernel.hpp"

namespace nlsym {

/// -int J_eps(x-y)(w(y)-w(x)) dy + c w = F on the domain, w = 0 outside.
struct StationaryProblem {
  DomainMask domain;
  GridField forcing;
  double c;
  RescaledKernel kernel;
};

/// Throws InvalidArgument unless forcing >= 0 lives inside the domain, c >= 0
/// and all grids agree.
void validate(const StationaryProblem& problem);

/// Fixed-point form w = alpha rho (*)_domain w + xi.
struct AuxCoefficients {
  double alpha;  ///< C1 / (C1 + c eps^2)
  GridField xi;  ///< eps^2 F / (C1 + c eps^2), on the domain
};

AuxCoefficients aux_coefficients(const StationaryProblem& problem);

struct SolveReport {
  std::size_t iterations = 0;  ///< operator applications (stationary) or time steps
  std::optional<double> residual;
  double alpha = 0.0;
  std::optional<double> beta;
  double stability_margin = 0.0;  ///< 1 - alpha (stationary) or beta (evolution)
  std::chrono::duration<double> wall_time{0.0};
  std::vector<double> residual_history;
};

/// Called with (k, u_k) for every iterate, starting at u_0 = xi.
using IterateObserver = std::function<void(std::size_t, const GridField&)>;

struct StationarySolution {
  GridField solution;
  SolveReport report;
};

/// Iterates u_k = alpha rho (*) u_{k-1} + xi from u_0 = xi.
///
/// Stops once the sup-norm step ||u_{k+1} - u_k|| is at most tol and the
/// geometric estimate of the remaining error, step * q / (1 - q) with q the
/// ratio of consecutive steps, is also at most tol. The returned iterate's
/// own fixed-point residual is bounded by the reported one, since steps are
/// non-increasing. Throws ConvergenceFailure after max_iterations.
StationarySolution solve_stationary(const StationaryProblem& problem, double tol, std::size_t max_iterations,
                                    const IterateObserver& observer = {});

/// Iteration budget growing like C1 (diam / eps)^2 log(1/tol), the c = 0
/// contraction rate of the restricted convolution on the domain.
std::size_t default_max_iterations(const StationaryProblem& problem, double tol);

/// tau_max = 1 / (c + C1 / eps^2); the explicit scheme needs tau < tau_max.
double stability_max_tau(double c, const RescaledKernel& kernel);

struct EvolutionProblem {
  DomainMask domain;
  /// h_n = G(t_n, .) for n = 0..steps-1; a single field means constant in time.
  std::vector<GridField> forcing;
  GridField initial;
  double horizon;
  double tau;
  double c;
  RescaledKernel kernel;

  /// horizon / tau, which must be a whole number (relative 1e-9).
  std::size_t step_count() const;
  const GridField& forcing_at(std::size_t n) const;
};

void validate(const EvolutionProblem& problem);

struct EvolutionSolution {
  /// w_0 = v_0, ..., w_steps; steps + 1 states.
  std::vector<GridField> trajectory;
  SolveReport report;
};

/// w_{n+1} = (tau C1 / eps^2) rho (*)_domain w_n + beta w_n + tau h_n,
/// beta = 1 - tau (c + C1 / eps^2). Throws InvalidArgument if tau >= tau_max.
EvolutionSolution solve_evolution(const EvolutionProblem& problem);

/// w(t) = w_n for t in (t_n, t_{n+1}], w(0) = w_0.
class PiecewiseConstantInterpolant {
 public:
  PiecewiseConstantInterpolant(std::vector<GridField> trajectory, double tau);

  double horizon() const noexcept { return tau_ * static_cast<double>(trajectory_.size() - 1); }
  double tau() const noexcept { return tau_; }
  std::size_t interval_index(double t) const;
  const GridField& at(double t) const;
  const std::vector<GridField>& states() const noexcept { return trajectory_; }

  /// (sum_{n < steps} tau ||w_n||_p^p)^(1/p); max_n ||w_n||_inf for p = infinity.
  double space_time_norm(double p) const;

 private:
  std::vector<GridField> trajectory_;
  double tau_;
};

}  // namespace nlsym
