#include <cmath>

#include "doctest.h"
#include "moist/experiments.hpp"
#include "moist/mms.hpp"
#include "moist/rothe.hpp"
#include "oracle_values.hpp"

using namespace moist;

namespace {

Grid cube(int n) { return Grid::make(1, 1, 0, 1, n, n, n); }

}  // namespace

TEST_CASE("coefficient validation") {
  const Grid g = cube(3);
  EllipticCoeffs c = EllipticCoeffs::constant(g, 1.0, 0.0, 1.0, 1.0);
  CHECK_NOTHROW(c.validate());
  c.a[4] = 0.5;  // below lambda_lo = 1
  CHECK_THROWS(c.validate());
  EllipticCoeffs d = EllipticCoeffs::constant(g, 1.0, -1.0, 1.0, 1.0);
  CHECK_THROWS(d.validate());
}

TEST_CASE("elliptic solve meets the discrete residual") {
  const Grid g = cube(8);
  const EllipticCoeffs c = EllipticCoeffs::constant(g, 1.5, 0.3, 2.0, 0.5);
  ScalarField f(g);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::sin(0.7 * n);
  const BoundaryField data(g, 0.25);
  const EllipticSolution s = elliptic_solve(c, f, data);
  CHECK(elliptic_residual(c, s.u, f, data) <= 1e-9);
}

TEST_CASE("pure Neumann problems need compatible data") {
  const Grid g = cube(6);
  const EllipticCoeffs c = EllipticCoeffs::constant(g, 1.0, 0.0, 0.0, 0.0);
  CHECK(c.pure_neumann());
  ScalarField f(g, 1.0);
  CHECK_THROWS_AS(elliptic_solve(c, f, BoundaryField(g, 0.0)), IncompatibleData);
  for (int k = 0; k < 6; ++k)
    for (int j = 0; j < 6; ++j)
      for (int i = 0; i < 6; ++i) f(i, j, k) = std::cos(M_PI * g.x_center(i));
  const EllipticSolution s = elliptic_solve(c, f, BoundaryField(g, 0.0));
  CHECK(std::abs(integrate(s.u)) <= 1e-9);
  CHECK(elliptic_residual(c, s.u, f, BoundaryField(g, 0.0)) <= 1e-9);
}

TEST_CASE("lifting reproduces the boundary data with a zero interior operator") {
  const Grid g = cube(6);
  const EllipticCoeffs c = EllipticCoeffs::constant(g, 1.0, 0.5, 1.0, 2.0);
  const BoundaryField data(g, 0.8);
  const ScalarField U = lift_boundary(c, data);
  CHECK(elliptic_residual(c, U, ScalarField(g), data) <= 1e-9);
}

TEST_CASE("elliptic manufactured solution converges at second order") {
  const LadderResult r = mms_elliptic_ladder({8, 16});
  CHECK(r.min_order() >= 1.8);
}

TEST_CASE("zero data stays zero under the Rothe march") {
  const Grid g = cube(4);
  LinearParabolicProblem p;
  p.coeffs = EllipticCoeffs::constant(g, 1.0, 0.0, 1.0, 1.0);
  p.u0 = ScalarField(g);
  p.forcing_steps.assign(4, ScalarField(g));
  const RotheTrajectory t = rothe_march(p, 4);
  for (const auto& u : t.u_steps) CHECK(linf_norm(u) == 0.0);
}

TEST_CASE("literal second certificate fails on a decaying constant; the stepwise form holds") {
  // v' = -b v with b = 1/2, no boundary exchange, v0 = 1, 32 steps.
  const Grid g = cube(2);
  LinearParabolicProblem p;
  p.coeffs = EllipticCoeffs::constant(g, 1.0, 0.5, 0.0, 0.0);
  p.u0 = ScalarField(g, 1.0);
  p.forcing_steps.assign(32, ScalarField(g));
  const RotheTrajectory t = rothe_march(p, 32, EllipticOptions{1e-14, 0, 1e-8});
  const EnergyReport r = energy_certificates(t, p);
  CHECK(r.energy_bound_rhs == doctest::Approx(oracle::kDecayRhs).epsilon(1e-14));
  CHECK(r.energy_bound_lhs == doctest::Approx(oracle::kDecayLiteralLhs).epsilon(1e-12));
  CHECK(r.energy_bound_stepwise_lhs == doctest::Approx(oracle::kDecayStepwiseLhs).epsilon(1e-12));
  CHECK_FALSE(r.energy_bound_pass());
  CHECK(r.energy_bound_stepwise_pass());
  CHECK(r.l2_bound_pass());
}

TEST_CASE("small random battery satisfies the energy certificates") {
  BatteryConfig b;
  b.problems = 4;
  b.n = 6;
  b.N = 8;
  const BatteryOutcome out = run_energy_battery(b, 2);
  CHECK(out.pass());
  CHECK(out.worst_energy_bound_stepwise >= -1e-10);
  // same answers with one worker
  const BatteryOutcome one = run_energy_battery(b, 1);
  for (std::size_t k = 0; k < out.reports.size(); ++k) CHECK(one.reports[k].energy_bound_lhs == out.reports[k].energy_bound_lhs);
}

TEST_CASE("degenerate battery grids are rejected") {
  BatteryConfig b;
  b.n = 1;
  CHECK_THROWS_AS(validate_battery(b), ConfigError);
}

TEST_CASE("temporal convergence is first order") {
  const LadderResult r = mms_temporal_ladder(12, {2, 4, 8}, 1.0);
  CHECK(r.orders.size() == 2);
  CHECK(r.orders.back() >= 0.85);
}
