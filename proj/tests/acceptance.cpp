// Acceptance runner: one PASS/FAIL line per criterion, with its tolerance and
// runtime budget. Exit status 0 only if every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "moist/config.hpp"
#include "moist/experiments.hpp"
#include "moist/selftest.hpp"

using namespace moist;

namespace {

const std::string kConfigs = MOIST_CONFIG_DIR;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool ok = o.ok && in_time;
  if (!ok) ++failures;
  char timing[96];
  std::snprintf(timing, sizeof timing, " [%.2fs of %.0fs]", secs, budget_s);
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << o.detail << timing << (in_time ? "" : " over budget")
            << std::endl;
}

std::map<std::string, PropertyResult> selftest(long samples) {
  SelftestOptions o;
  o.samples = samples;
  std::map<std::string, PropertyResult> m;
  for (auto& r : run_kernel_selftest(PhysicalParams{}, o)) m[r.name] = r;
  return m;
}

}  // namespace

int main() {
  const long n = 10000;

  criterion("kernel cancellation", 5, [&] {
    const auto m = selftest(n);
    const auto& q = m.at("cancellation_Q");
    const auto& h = m.at("cancellation_H");
    return Outcome{q.pass && h.pass && h.samples >= n,
                   "states=" + std::to_string(h.samples) + " Q " + q.detail + " (exact), H " + h.detail + " (<= 1e-14)"};
  });

  criterion("evaporation monotonicity", 1, [&] {
    const auto m = selftest(n);
    bool ok = true;
    std::string d;
    for (const char* k : {"monotonicity_beta_0.3", "monotonicity_beta_0.5", "monotonicity_beta_1"}) {
      const auto& r = m.at(k);
      ok = ok && r.pass && r.samples >= n;
      d += std::string(k) + " " + r.detail + " (>= 0); ";
    }
    return Outcome{ok, d + "pairs per beta=" + std::to_string(n)};
  });

  criterion("saturation law", 1, [&] {
    const auto m = selftest(n);
    bool ok = true;
    std::string d;
    for (const char* k : {"saturation_monotone", "saturation_reference", "saturation_floor", "qvs_range"}) {
      const auto& r = m.at(k);
      ok = ok && r.pass;
      d += std::string(k) + " " + r.detail + "; ";
    }
    return Outcome{ok && m.at("saturation_monotone").samples >= n, d};
  });

  criterion("energy certificates", 120, [&] {
    const Config c = load_config(kConfigs + "/rothe.cfg");
    const BatteryOutcome b = run_energy_battery(c.battery, 0);
    const bool shape = c.battery.problems == 20 && c.battery.n == 16 && c.battery.N == 32;
    return Outcome{shape && b.pass(), std::to_string(b.reports.size()) + " problems on " + std::to_string(c.battery.n) +
                                          "^3, N=" + std::to_string(c.battery.N) +
                                          ", worst relative slack l2_bound=" + format_double(b.worst_l2_bound) +
                                          " energy_bound=" + format_double(b.worst_energy_bound) + " (>= -1e-10)"};
  });

  criterion("manufactured-solution convergence", 300, [&] {
    const Config c = load_config(kConfigs + "/mms.cfg");
    const MmsOutcome m = run_mms(c.mms);
    const double spatial = std::min(m.elliptic.min_order(), m.spatial.min_order());
    const double temporal = m.temporal.min_order();
    return Outcome{spatial >= 1.8 && temporal >= 0.9,
                   "spatial order=" + format_double(spatial) + " (>= 1.8), temporal order=" + format_double(temporal) +
                       " (>= 0.9)"};
  });

  RunResult cell;
  double cfl = 0.0;
  Config cell_cfg;
  criterion("discrete nonnegativity", 120, [&] {
    cell_cfg = load_config(kConfigs + "/cell.cfg");
    const SimConfig& s = cell_cfg.sim;
    const Model m(s);
    cfl = cfl_number(m.velocity(), s.dt);
    cell = run(s);
    double lo = INFINITY;
    for (const StepRecord& r : cell.records)
      for (const FieldStats& f : r.fields) lo = std::min(lo, f.min);
    const bool shape = s.nx == 24 && s.ny == 4 && s.nz == 24 && s.steps() == 50 &&
                       s.velocity.kind == VelocityKind::ConvectionCell && cfl <= 0.5;
    return Outcome{shape && lo >= -1e-10,
                   "min over fields and steps=" + format_double(lo) + " (>= -1e-10), cfl=" + format_double(cfl) +
                       ", steps=" + std::to_string(cell.records.size() - 1)};
  });

  criterion("vapor maximum principle", 1, [&] {
    if (cell.records.empty()) return Outcome{false, "standard run unavailable"};
    const double star = q_v_star(cell_cfg.sim, Model(cell_cfg.sim).initial_state());
    double worst = -INFINITY;
    for (const StepRecord& r : cell.records) worst = std::max(worst, r.fields[idx(Var::qv)].max - star);
    return Outcome{worst <= 1e-8 && star == cell.bounds.q_v_star,
                   "q_v_star=" + format_double(star) + ", max_t(max q_v - q_v_star)=" + format_double(worst) +
                       " (<= 1e-8)"};
  });

  criterion("H invariance", 60, [&] {
    const Config c = load_config(kConfigs + "/h_invariance.cfg");
    const SimConfig& s = c.sim;
    const bool setup = s.mode == ThermoMode::Temperature && s.velocity.kind == VelocityKind::None &&
                       s.params.mu[idx(Var::T)] == s.params.mu[idx(Var::qc)] &&
                       s.params.mu[idx(Var::T)] == s.params.mu[idx(Var::qr)] &&
                       s.params.nu[idx(Var::T)] == s.params.nu[idx(Var::qc)] &&
                       s.params.nu[idx(Var::T)] == s.params.nu[idx(Var::qr)] && s.t_end == 1.0;
    bool alpha_zero = true;
    for (const BoundarySpec& b : s.boundary) alpha_zero = alpha_zero && b.alpha0 == 0.0 && b.alpha_ll == 0.0;
    const RunResult r = run(s);
    double worst = 0.0;
    for (const StepRecord& rec : r.records) worst = std::max(worst, rec.H_dev_inf);
    return Outcome{setup && alpha_zero && worst <= 1e-6,
                   "max_t ||H(t) - H(0)||_inf=" + format_double(worst) + " (<= 1e-6) over t in [0, 1]"};
  });

  criterion("continuous dependence", 300, [&] {
    const Config c = load_config(kConfigs + "/two_run.cfg");
    const TwoRunOutcome t = run_two_run(c.sim, c.two_run, {1e-2, 1e-3, 1e-4}, 0);
    std::string d;
    for (const DependenceReport& r : t.reports) d += "A(" + format_double(r.eps) + ")=" + format_double(r.amplification) + " ";
    return Outcome{t.pass(0.1), d + "spread=" + format_double(t.spread) + " (<= 0.1)"};
  });

  criterion("velocity hypotheses", 1, [&] {
    const Config c = load_config(kConfigs + "/cell.cfg");
    const Model m(c.sim);
    const double div = linf_norm(discrete_divergence(m.velocity()));
    const double normal = m.velocity().max_boundary_normal();
    return Outcome{div <= 1e-12 && normal == 0.0 && !m.velocity().is_zero(),
                   "max|div|=" + format_double(div) + " (<= 1e-12), max|normal|=" + format_double(normal) + " (== 0)"};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
