#include "nlsym/local_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsym/error.hpp"

namespace nlsym {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

void require_local_data(const GridField& f, const DomainMask& domain, const char* what) {
  if (!(f.grid() == domain.grid())) throw InvalidArgument(std::string(what) + " lives on a different grid");
  if (!f.mask().is_subset_of(domain)) throw InvalidArgument(std::string(what) + " is not supported in the domain");
  for (CellIndex c : f.mask().cells())
    if (!std::isfinite(f.value(c))) throw InvalidArgument(std::string(what) + " must be finite");
}

void require_coefficients(double c, double diffusivity) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("absorption c must be finite and >= 0");
  if (!(diffusivity > 0.0) || !std::isfinite(diffusivity)) throw InvalidArgument("diffusivity must be positive");
}

Eigen::VectorXd vector_on(const GridField& f, const DomainMask& domain) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(domain.count()));
  Eigen::Index k = 0;
  for (CellIndex c : domain.cells()) v[k++] = f.value(c);
  return v;
}

GridField field_of(const DomainMask& domain, const Eigen::VectorXd& v) {
  return GridField(domain, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

// A = D (-Lap) + c on the domain's cells; neighbours outside the domain are zero.
SparseMatrix operator_matrix(const DomainMask& domain, double c, double diffusivity) {
  const GridSpec& grid = domain.grid();
  const int dim = grid.dimension();
  const double w = diffusivity / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(domain.count() * (2 * dim + 1));
  for (CellIndex cell : domain.cells()) {
    const auto row = static_cast<Eigen::Index>(domain.position(cell));
    entries.emplace_back(row, row, 2.0 * dim * w + c);
    const AxisIndex idx = grid.axis_index(cell);
    for (int a = 0; a < dim; ++a) {
      for (int s : {-1, 1}) {
        AxisIndex nb = idx;
        nb[a] += s;
        if (!grid.in_box(nb)) continue;
        const CellIndex other = grid.flat_index(nb);
        if (domain.contains(other))
          entries.emplace_back(row, static_cast<Eigen::Index>(domain.position(other)), -w);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(domain.count());
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

}  // namespace

GridField solve_poisson(const LocalStationaryProblem& problem, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  require_coefficients(problem.c, problem.diffusivity);
  require_local_data(problem.forcing, problem.domain, "forcing");
  const SparseMatrix a = operator_matrix(problem.domain, problem.c, problem.diffusivity);
  const Eigen::VectorXd f = vector_on(problem.forcing, problem.domain);
  Eigen::SimplicialLDLT<SparseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalFailure("sparse factorization of the Laplacian failed");
  Eigen::VectorXd w = solver.solve(f);
  if (solver.info() != Eigen::Success) throw NumericalFailure("sparse triangular solve failed");
  Eigen::VectorXd r = f - a * w;
  if (r.lpNorm<Eigen::Infinity>() > tol) {
    w += solver.solve(r);
    r = f - a * w;
  }
  const double residual = r.lpNorm<Eigen::Infinity>();
  if (!(residual <= tol))
    throw NumericalFailure("Poisson residual " + std::to_string(residual) + " exceeds tol " + std::to_string(tol));
  return field_of(problem.domain, w);
}

std::size_t LocalEvolutionProblem::step_count() const {
  if (!(tau > 0.0) || !(horizon > 0.0)) throw InvalidArgument("horizon and tau must be positive");
  const double ratio = horizon / tau;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("horizon must be a whole number of time steps");
  return static_cast<std::size_t>(steps);
}

const GridField& LocalEvolutionProblem::forcing_at(std::size_t n) const {
  return forcing.size() == 1 ? forcing.front() : forcing.at(n);
}

double explicit_heat_max_tau(const GridSpec& grid, double c, double diffusivity) {
  return 1.0 / (2.0 * grid.dimension() * diffusivity / (grid.h() * grid.h()) + c);
}

std::vector<GridField> solve_heat(const LocalEvolutionProblem& problem) {
  require_coefficients(problem.c, problem.diffusivity);
  const std::size_t steps = problem.step_count();
  if (problem.forcing.empty()) throw InvalidArgument("heat forcing sequence is empty");
  if (problem.forcing.size() != 1 && problem.forcing.size() < steps)
    throw InvalidArgument("heat forcing needs one field per step (or a single constant field)");
  for (const GridField& g : problem.forcing) require_local_data(g, problem.domain, "forcing");
  require_local_data(problem.initial, problem.domain, "initial datum");
  const double tau = problem.tau;
  if (problem.scheme == TimeScheme::Explicit) {
    const double tau_max = explicit_heat_max_tau(problem.domain.grid(), problem.c, problem.diffusivity);
    if (tau > tau_max)
      throw InvalidArgument("explicit heat step " + std::to_string(tau) + " exceeds the stability bound " +
                            std::to_string(tau_max));
  }

  const SparseMatrix a = operator_matrix(problem.domain, problem.c, problem.diffusivity);
  Eigen::SimplicialLDLT<SparseMatrix> implicit;
  if (problem.scheme == TimeScheme::Implicit) {
    SparseMatrix identity(a.rows(), a.cols());
    identity.setIdentity();
    implicit.compute(identity + tau * a);
    if (implicit.info() != Eigen::Success) throw NumericalFailure("factorization of I + tau A failed");
  }

  std::vector<GridField> trajectory;
  trajectory.reserve(steps + 1);
  Eigen::VectorXd w = vector_on(problem.initial, problem.domain);
  trajectory.push_back(field_of(problem.domain, w));
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::VectorXd h = vector_on(problem.forcing_at(n), problem.domain);
    if (problem.scheme == TimeScheme::Explicit) {
      w = w - tau * (a * w) + tau * h;
    } else {
      const Eigen::VectorXd rhs = w + tau * h;
      w = implicit.solve(rhs);
      if (implicit.info() != Eigen::Success) throw NumericalFailure("implicit heat step failed");
    }
    trajectory.push_back(field_of(problem.domain, w));
  }
  return trajectory;
}

}  // namespace nlsym
