#pragma once

#include <cstddef>
#include <vector>

#include "nlsym/grid.hpp"

namespace nlsym {

/// -D Lap W + c W = h on the domain, W = 0 on every cell outside it.
struct LocalStationaryProblem {
  DomainMask domain;
  GridField forcing;
  double c = 0.0;
  double diffusivity = 1.0;
};

/// Standard 3-point (N = 1) or 5-point (N = 2) Laplacian solved by sparse
/// Cholesky. Throws NumericalFailure on breakdown or if the max-norm residual
/// exceeds tol after one refinement step.
GridField solve_poisson(const LocalStationaryProblem& problem, double tol = 1e-8);

enum class TimeScheme { Explicit, Implicit };

struct LocalEvolutionProblem {
  DomainMask domain;
  /// h_n = G(t_n, .); a single field means constant in time.
  std::vector<GridField> forcing;
  GridField initial;
  double horizon;
  double tau;
  double c = 0.0;
  double diffusivity = 1.0;
  TimeScheme scheme = TimeScheme::Implicit;

  std::size_t step_count() const;
  const GridField& forcing_at(std::size_t n) const;
};

/// Largest tau keeping every explicit-scheme coefficient non-negative,
/// 1 / (2 N D / h^2 + c).
double explicit_heat_max_tau(const GridSpec& grid, double c, double diffusivity);

/// W_0 = initial, then forward Euler (W_{n+1} = W_n - tau A W_n + tau h_n) or
/// backward Euler ((I + tau A) W_{n+1} = W_n + tau h_n). Returns steps + 1
/// states. Explicit steps above explicit_heat_max_tau throw InvalidArgument.
std::vector<GridField> solve_heat(const LocalEvolutionProblem& problem);

}  // namespace nlsym
