#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "nlsym/error.hpp"
#include "nlsym/local_solver.hpp"
#include "nlsym/suite.hpp"
#include "oracles.hpp"

using namespace nlsym;

namespace {

// Cells at multiples of h with x = +-1 on centers, so Dirichlet cells sit
// exactly on the boundary of (-1, 1).
GridSpec aligned_interval_grid(int cells_to_one) {
  const double h = 1.0 / cells_to_one;
  const int n = 2 * cells_to_one + 3;
  return GridSpec(1, 0.5 * n * h, n);
}

DomainMask unit_interval(const GridSpec& g) { return box_mask(g, {-1.0, 0.0}, {1.0, 0.0}); }

GridField constant(const DomainMask& m, double v) { return GridField(m, std::vector<double>(m.count(), v)); }

double center_value(const GridField& f) {
  const GridSpec& g = f.grid();
  const int mid = (g.cells_per_axis() - 1) / 2;
  return f.value(g.flat_index({mid, g.dimension() == 2 ? mid : 0}));
}

}  // namespace

TEST_SUITE("local_solver") {

TEST_CASE("quadratic solution is reproduced exactly on an aligned grid") {
  const GridSpec g = aligned_interval_grid(32);
  const DomainMask omega = unit_interval(g);
  const GridField v = solve_poisson({omega, constant(omega, 1.0), 0.0, 1.0});
  CHECK(center_value(v) == doctest::Approx(0.5).epsilon(1e-10));
  for (CellIndex c : omega.cells()) {
    const double x = g.center(c)[0];
    CHECK(v.value(c) == doctest::Approx(0.5 * (1.0 - x * x)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("second-order convergence on a smooth solution") {
  // -V'' = (pi^2/4) cos(pi x / 2) with V = cos(pi x / 2)
  std::vector<double> errors;
  for (int m : {16, 32, 64}) {
    const GridSpec g = aligned_interval_grid(m);
    const DomainMask omega = unit_interval(g);
    const double a = 0.5 * std::numbers::pi;
    const GridField f = GridField::from_function(omega, [&](const Point& x) { return a * a * std::cos(a * x[0]); });
    const GridField v = solve_poisson({omega, f, 0.0, 1.0}, 1e-9);
    double err = 0.0;
    for (CellIndex c : omega.cells()) err = std::max(err, std::abs(v.value(c) - std::cos(a * g.center(c)[0])));
    errors.push_back(err);
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(errors[1] / errors[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("disc solution near the analytic center value") {
  for (int n : {65, 129}) {
    const GridSpec g(2, 1.25, n);
    const DomainMask disc = ball_mask_radius(g, 1.0);
    const GridField v = solve_poisson({disc, constant(disc, 1.0), 0.0, 1.0});
    CHECK(std::abs(center_value(v) - 0.25) <= g.h());
  }
}

TEST_CASE("zero forcing, positivity, and diffusivity scaling") {
  const GridSpec g(2, 1.0, 25);
  Rng rng(2);
  const DomainMask omega = mask_union(box_mask(g, {-0.8, -0.5}, {0.2, 0.6}), ball_mask_radius(g, 0.4));
  CHECK(lp_norm(solve_poisson({omega, constant(omega, 0.0), 1.0, 1.0}), kInfinity) == 0.0);
  std::vector<double> fv(omega.count());
  for (double& x : fv) x = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
  const GridField f(omega, fv);
  const GridField v = solve_poisson({omega, f, 0.5, 1.0});
  CHECK(v.min_value() >= 0.0);
  const GridField v_half = solve_poisson({omega, f, 0.0, 0.5});
  const GridField v_one = solve_poisson({omega, f, 0.0, 1.0});
  for (CellIndex c : omega.cells()) CHECK(v_half.value(c) == doctest::Approx(2.0 * v_one.value(c)));
}

TEST_CASE("sparse solve matches dense elimination") {
  const GridSpec g(2, 1.0, 9);
  Rng rng(3);
  const DomainMask omega = mask_union(box_mask(g, {-0.7, -0.7}, {0.1, 0.3}), box_mask(g, {-0.2, 0.0}, {0.8, 0.5}));
  std::vector<double> fv(omega.count());
  for (double& x : fv) x = rng.uniform();
  const GridField f(omega, fv);
  const GridField v = solve_poisson({omega, f, 0.7, 1.3});
  const std::vector<double> dense = oracle::solve(oracle::dirichlet_laplacian(omega, 0.7, 1.3), fv);
  CHECK(oracle::max_abs_diff(oracle::on(v, omega), dense) <= 1e-12 * (1.0 + lp_norm(v, kInfinity)));
}

TEST_CASE("local preconditions") {
  const GridSpec g(1, 1.0, 21);
  const DomainMask omega = box_mask(g, {-0.5, 0.0}, {0.5, 0.0});
  CHECK_THROWS_AS(solve_poisson({omega, constant(omega, 1.0), -1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(solve_poisson({omega, constant(omega, 1.0), 0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(solve_poisson({omega, constant(DomainMask::full(g), 1.0), 0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(solve_poisson({omega, constant(omega, 1.0), 0.0, 1.0}, 0.0), InvalidArgument);
}

TEST_CASE("heat equation with zero data stays zero") {
  const GridSpec g(1, 1.0, 21);
  const DomainMask omega = box_mask(g, {-0.5, 0.0}, {0.5, 0.0});
  for (TimeScheme scheme : {TimeScheme::Explicit, TimeScheme::Implicit}) {
    const auto traj = solve_heat({omega, {constant(omega, 0.0)}, constant(omega, 0.0), 0.001, 0.0001, 0.0, 1.0, scheme});
    CHECK(traj.size() == 11);
    for (const auto& w : traj) CHECK(lp_norm(w, kInfinity) == 0.0);
  }
}

TEST_CASE("heat mass decays without forcing") {
  const GridSpec g(1, 1.0, 41);
  Rng rng(4);
  const DomainMask omega = box_mask(g, {-0.8, 0.0}, {0.6, 0.0});
  std::vector<double> v(omega.count());
  for (double& x : v) x = rng.uniform();
  for (TimeScheme scheme : {TimeScheme::Explicit, TimeScheme::Implicit}) {
    const double tau = explicit_heat_max_tau(g, 0.0, 1.0);
    const auto traj = solve_heat({omega, {constant(omega, 0.0)}, GridField(omega, v), 40 * tau, tau, 0.0, 1.0, scheme});
    for (std::size_t n = 1; n < traj.size(); ++n) {
      CHECK(lp_norm(traj[n], 1.0) <= lp_norm(traj[n - 1], 1.0) * (1.0 + 1e-14));
      CHECK(traj[n].min_value() >= 0.0);
    }
  }
}

TEST_CASE("heat steps match dense matrix iteration") {
  const GridSpec g(1, 1.0, 33);
  Rng rng(5);
  const DomainMask omega = box_mask(g, {-0.9, 0.0}, {0.7, 0.0});
  REQUIRE(omega.count() <= 32);
  const double c = 0.5;
  const double tau = 0.8 * explicit_heat_max_tau(g, c, 1.0);
  std::vector<GridField> forcing;
  for (int n = 0; n < 6; ++n) {
    std::vector<double> h(omega.count());
    for (double& x : h) x = rng.uniform();
    forcing.emplace_back(omega, h);
  }
  std::vector<double> v0(omega.count());
  for (double& x : v0) x = rng.uniform();
  const oracle::Matrix a = oracle::dirichlet_laplacian(omega, c, 1.0);

  const auto explicit_traj = solve_heat({omega, forcing, GridField(omega, v0), 6 * tau, tau, c, 1.0, TimeScheme::Explicit});
  const auto implicit_traj = solve_heat({omega, forcing, GridField(omega, v0), 6 * tau, tau, c, 1.0, TimeScheme::Implicit});
  oracle::Matrix lhs = a;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (double& x : lhs[i]) x *= tau;
    lhs[i][i] += 1.0;
  }
  std::vector<double> we = v0;
  std::vector<double> wi = v0;
  for (std::size_t n = 0; n < 6; ++n) {
    const std::vector<double> h = oracle::on(forcing[n], omega);
    const std::vector<double> aw = oracle::multiply(a, we);
    for (std::size_t i = 0; i < we.size(); ++i) we[i] += -tau * aw[i] + tau * h[i];
    std::vector<double> rhs = wi;
    for (std::size_t i = 0; i < wi.size(); ++i) rhs[i] += tau * h[i];
    wi = oracle::solve(lhs, rhs);
    CHECK(oracle::max_abs_diff(oracle::on(explicit_traj[n + 1], omega), we) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::on(implicit_traj[n + 1], omega), wi) <= 1e-12);
  }
}

TEST_CASE("explicit heat steps above the bound are rejected") {
  const GridSpec g(1, 1.0, 21);
  const DomainMask omega = box_mask(g, {-0.5, 0.0}, {0.5, 0.0});
  const double tau = 1.01 * explicit_heat_max_tau(g, 0.0, 1.0);
  CHECK_THROWS_AS(solve_heat({omega, {constant(omega, 1.0)}, constant(omega, 0.0), 5 * tau, tau, 0.0, 1.0, TimeScheme::Explicit}),
                  InvalidArgument);
  CHECK_NOTHROW(solve_heat({omega, {constant(omega, 1.0)}, constant(omega, 0.0), 5 * tau, tau, 0.0, 1.0, TimeScheme::Implicit}));
}

}  // TEST_SUITE
