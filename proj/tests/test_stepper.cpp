#include <cmath>

#include "doctest.h"
#include "moist/stepper.hpp"
#include "oracle_values.hpp"

using namespace moist;

namespace {

SimConfig small(int nx, int ny, int nz) {
  SimConfig c;
  c.nx = nx;
  c.ny = ny;
  c.nz = nz;
  c.dt = 10;
  c.t_end = 50;
  return c;
}

SimConfig zero_config() {
  SimConfig c = small(4, 2, 4);
  c.mode = ThermoMode::Temperature;
  c.Tbar_top = c.Tbar_bottom = 260;
  c.initial.T_offset = -260;
  c.T_envelope_lo = 0;
  return c;
}

SimConfig active_config() {
  SimConfig c = small(8, 2, 8);
  c.velocity.kind = VelocityKind::ConvectionCell;
  c.velocity.target_cfl = 0.25;
  c.picard_max = 60;
  c.initial.T_spread = 2;
  c.initial.qv_relative = true;
  c.initial.qv_base = 0.2;
  c.initial.qv_spread = 1.0;
  c.initial.qc_spread = 1e-3;
  c.initial.qr_spread = 5e-4;
  c.boundary[idx(Var::T)] = {1e-4, 290, 0, 0};
  c.boundary[idx(Var::qv)] = {1e-4, 0.012, 0, 0};
  return c;
}

StateFields uniform_state(const Grid& g, double T, double qv, double qc, double qr) {
  StateFields s(g);
  s.T = ScalarField(g, T);
  s.qv = ScalarField(g, qv);
  s.qc = ScalarField(g, qc);
  s.qr = ScalarField(g, qr);
  return s;
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_end = 55;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.picard_tol = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.boundary[1].b0 = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(SimConfig{}.steps() == 50);
}

TEST_CASE("zero state is a fixed point reached in one iteration") {
  const SimConfig c = zero_config();
  const Model m(c);
  const StateFields z(m.grid());
  const StepResult r = picard_step(m, z, c.dt);
  CHECK(r.iterations == 1);
  CHECK(r.state == z);
}

TEST_CASE("saturated uniform column is an equilibrium") {
  for (ThermoMode mode : {ThermoMode::Temperature, ThermoMode::Theta}) {
    SimConfig c = small(3, 2, 1);
    c.mode = mode;
    const Model m(c);
    const double T = 280, qvs = saturation_mixing_ratio(m.grid().p_center(0), T, c.params);
    const StateFields s = uniform_state(m.grid(), T, qvs, 0, 0);
    const StepResult r = picard_step(m, s, c.dt);
    CHECK(linf_norm(r.state.T - s.T) <= 1e-9);
    CHECK(linf_norm(r.state.qv - s.qv) <= 1e-12);
    CHECK(linf_norm(r.state.qc) <= 1e-12);
    CHECK(linf_norm(r.state.qr) <= 1e-12);
  }
}

TEST_CASE("supersaturated column matches the pointwise backward-Euler reference") {
  // Two levels, negligible vertical exchange, no rain fall-out: every cell
  // follows its own implicit-Euler closure step.
  SimConfig c = small(2, 2, 2);
  c.mode = ThermoMode::Temperature;
  c.params.V_sed = 0;
  c.params.nu = {1e-12, 1e-12, 1e-12, 1e-12};
  c.picard_tol = 1e-12;
  c.picard_max = 100;
  c.solver_tol = 1e-13;
  const Model m(c);
  const StateFields s = uniform_state(m.grid(), 285, 0.02, 1e-3, 2e-4);
  const StepResult r = picard_step(m, s, 10);
  const double ref[2][4] = {
      {oracle::kBackwardEuler_level0_T, oracle::kBackwardEuler_level0_qv, oracle::kBackwardEuler_level0_qc,
       oracle::kBackwardEuler_level0_qr},
      {oracle::kBackwardEuler_level1_T, oracle::kBackwardEuler_level1_qv, oracle::kBackwardEuler_level1_qc,
       oracle::kBackwardEuler_level1_qr}};
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(r.state.T(1, 1, k) - ref[k][0]) <= 1e-9);
    CHECK(std::abs(r.state.qv(0, 1, k) - ref[k][1]) <= 1e-11);
    CHECK(std::abs(r.state.qc(1, 0, k) - ref[k][2]) <= 1e-11);
    CHECK(std::abs(r.state.qr(0, 0, k) - ref[k][3]) <= 1e-11);
    CHECK(r.state.qv(0, 0, k) < 0.02);
    CHECK(r.state.qc(0, 0, k) > 1e-3);
  }
}

TEST_CASE("Picard failure carries the last residual") {
  SimConfig c = active_config();
  c.picard_max = 1;
  const Model m(c);
  try {
    picard_step(m, m.initial_state(), c.dt);
    FAIL("expected PicardError");
  } catch (const PicardError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.residual() > c.picard_tol);
  }
}

TEST_CASE("halving dt does not need more Picard iterations") {
  SimConfig c = active_config();
  const Model m(c);
  const StateFields s = m.initial_state();
  int prev = picard_step(m, s, 10).iterations;
  for (double dt : {5.0, 2.5, 1.25}) {
    const int it = picard_step(m, s, dt).iterations;
    CHECK(it <= prev);
    prev = it;
  }
}

TEST_CASE("zero-data run has identically zero diagnostics") {
  const RunResult r = run(zero_config());
  CHECK(r.records.size() == 6);
  for (const StepRecord& rec : r.records) {
    for (const FieldStats& f : rec.fields) {
      CHECK(f.min == 0.0);
      CHECK(f.max == 0.0);
      CHECK(f.l2 == 0.0);
      CHECK(f.h1w == 0.0);
    }
    CHECK(rec.Q_l2 == 0.0);
    CHECK(rec.H_l2 == 0.0);
  }
  CHECK(r.bounds.violations.empty());
}

TEST_CASE("q_v_star takes the largest of initial data, boundary data and the cap") {
  SimConfig c = small(3, 2, 3);
  const Model m(c);
  StateFields s = uniform_state(m.grid(), 280, 0.01, 0, 0);
  CHECK(q_v_star(c, s) == c.params.qvs_cap);
  s.qv[4] = 0.07;
  CHECK(q_v_star(c, s) == 0.07);
  c.boundary[idx(Var::qv)].b_ll = 0.08;
  CHECK(q_v_star(c, s) == 0.08);
}

TEST_CASE("vapor at the cap with drier boundaries stays within the bound") {
  SimConfig c = small(4, 2, 4);
  c.t_end = 30;
  c.boundary[idx(Var::qv)] = {1e-4, 0.01, 0.5, 0.02};
  const Model m(c);
  // warm enough that q_vs sits at the cap on every level
  const StateFields s = uniform_state(m.grid(), 320, c.params.qvs_cap, 0, 0);
  const RunResult r = run(c, {}, s);
  CHECK(r.bounds.q_v_star == c.params.qvs_cap);
  CHECK(r.bounds.violations.empty());
}

TEST_CASE("an injected vapor spike is reported exactly once") {
  const SimConfig c = active_config();
  RunResult r = run(c);
  REQUIRE(r.bounds.violations.empty());
  r.records[3].fields[idx(Var::qv)].max = r.bounds.q_v_star + 1e-6;
  const BoundsReport b = bounds_report(r.records, c, r.bounds.q_v_star);
  REQUIRE(b.violations.size() == 1);
  CHECK(b.violations[0].var == Var::qv);
  CHECK(b.violations[0].kind == "upper");
  CHECK(b.violations[0].time == r.records[3].time);
}

TEST_CASE("runs are bitwise reproducible") {
  const SimConfig c = active_config();
  const RunResult a = run(c), b = run(c);
  CHECK(a.final_state == b.final_state);
  for (std::size_t n = 0; n < a.records.size(); ++n) CHECK(a.records[n].residual == b.records[n].residual);
}

TEST_CASE("active run stays nonnegative and below q_v_star in both modes") {
  for (ThermoMode mode : {ThermoMode::Theta, ThermoMode::Temperature}) {
    SimConfig c = active_config();
    c.mode = mode;
    const RunResult r = run(c);
    CHECK(r.bounds.violations.empty());
    for (Var v : kAllVars) CHECK(r.bounds.running_min[idx(v)] >= -1e-10);
    CHECK(r.bounds.running_max[idx(Var::qv)] <= r.bounds.q_v_star + 1e-8);
  }
}

TEST_CASE("clamp mode never leaves negative moisture") {
  SimConfig c = active_config();
  c.clamp = ClampPolicy::Clamp;
  const RunResult r = run(c);
  for (const StepRecord& rec : r.records) CHECK(rec.clamped_mass >= 0.0);
  for (Var v : {Var::qv, Var::qc, Var::qr}) CHECK(r.bounds.running_min[idx(v)] >= 0.0);
}

TEST_CASE("continuous dependence experiment") {
  SimConfig c = active_config();
  c.t_end = 30;
  CHECK_THROWS_AS(continuous_dependence_experiment(c, 0.0, 7), std::invalid_argument);
  const DependenceReport a = continuous_dependence_experiment(c, 1e-3, 7);
  const DependenceReport b = continuous_dependence_experiment(c, 1e-3, 7);
  CHECK(std::isfinite(a.amplification));
  CHECK(a.amplification >= 1.0);
  CHECK(a.amplification == b.amplification);
  CHECK(a.times.size() == a.distance.size());
}
