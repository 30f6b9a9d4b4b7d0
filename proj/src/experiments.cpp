#include "moist/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace moist {

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers; the first
// exception is rethrown after all workers finish.
template <class Job>
void parallel_for(int n, int threads, Job job) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double relative(double slack, double rhs) { return rhs > 0.0 ? slack / rhs : slack; }

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate_battery(const BatteryConfig& b) {
  if (b.n < 2) throw ConfigError("battery: n must be at least 2 (degenerate grid)");
  if (b.N < 1) throw ConfigError("battery: N must be positive");
  if (b.problems < 1) throw ConfigError("battery: problems must be positive");
  if (!(b.horizon > 0.0)) throw ConfigError("battery: horizon must be positive");
  if (!(b.a_lo > 0.0) || b.a_hi < b.a_lo) throw ConfigError("battery: need 0 < a_lo <= a_hi");
  if (b.b_hi < 0.0 || b.robin_hi < 0.0) throw ConfigError("battery: b_hi and robin_hi must be nonnegative");
  if (!(b.rel_tol >= 0.0)) throw ConfigError("battery: rel_tol must be nonnegative");
}

void validate_mms(const MmsConfig& m) {
  if (m.sizes.size() < 2 || m.temporal_steps.size() < 2) throw ConfigError("mms: ladders need at least two levels");
  for (int n : m.sizes)
    if (n < 2) throw ConfigError("mms: sizes must be at least 2 (degenerate grid)");
  for (int N : m.temporal_steps)
    if (N < 1) throw ConfigError("mms: temporal_steps must be positive");
  if (m.temporal_n < 2) throw ConfigError("mms: temporal_n must be at least 2");
  if (m.parabolic_N < 1) throw ConfigError("mms: parabolic_N must be positive");
  if (!(m.horizon > 0.0)) throw ConfigError("mms: horizon must be positive");
}

void validate_eps(const std::vector<double>& eps) {
  if (eps.empty()) throw ConfigError("two-run: eps list is empty");
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("two-run: eps must be positive, got " + format_double(e));
}

bool BatteryOutcome::pass() const {
  for (const EnergyReport& r : reports)
    if (!r.l2_bound_pass() || !r.energy_bound_pass()) return false;
  return !reports.empty();
}

BatteryOutcome run_energy_battery(const BatteryConfig& b, int threads) {
  validate_battery(b);
  RandomProblemSpec spec;
  spec.n = b.n;
  spec.N = b.N;
  spec.horizon = b.horizon;
  spec.a_lo = b.a_lo;
  spec.a_hi = b.a_hi;
  spec.b_hi = b.b_hi;
  spec.robin_hi = b.robin_hi;

  BatteryOutcome out;
  out.reports.resize(b.problems);
  parallel_for(b.problems, resolve_threads(threads), [&](int k) {
    const LinearParabolicProblem p = random_homogeneous_problem(spec, b.seed + static_cast<std::uint64_t>(k));
    EnergyReport r = energy_certificates(rothe_march(p, spec.N), p);
    r.rel_tol = b.rel_tol;
    out.reports[k] = r;
  });
  out.worst_l2_bound = out.worst_energy_bound = out.worst_energy_bound_stepwise = std::numeric_limits<double>::infinity();
  for (const EnergyReport& r : out.reports) {
    out.worst_l2_bound = std::min(out.worst_l2_bound, relative(r.l2_bound_slack(), r.l2_bound_rhs));
    out.worst_energy_bound = std::min(out.worst_energy_bound, relative(r.energy_bound_slack(), r.energy_bound_rhs));
    out.worst_energy_bound_stepwise = std::min(out.worst_energy_bound_stepwise, relative(r.energy_bound_stepwise_slack(), r.energy_bound_rhs));
  }
  return out;
}

bool MmsOutcome::pass(const MmsConfig& m) const {
  return elliptic.min_order() >= m.spatial_order_min && spatial.min_order() >= m.spatial_order_min &&
         temporal.min_order() >= m.temporal_order_min;
}

MmsOutcome run_mms(const MmsConfig& m) {
  validate_mms(m);
  MmsOutcome out;
  out.elliptic = mms_elliptic_ladder(m.sizes);
  out.spatial = mms_parabolic_spatial_ladder(m.sizes, m.parabolic_N, m.horizon);
  out.temporal = mms_temporal_ladder(m.temporal_n, m.temporal_steps, m.horizon);
  return out;
}

TwoRunOutcome run_two_run(const SimConfig& sim, const TwoRunConfig& t, const std::vector<double>& eps, int threads) {
  validate_eps(eps);
  TwoRunOutcome out;
  out.reports.resize(eps.size());
  parallel_for(static_cast<int>(eps.size()), resolve_threads(threads), [&](int i) {
    out.reports[i] = continuous_dependence_experiment(sim, eps[i], t.seed, t.pert_T, t.pert_q);
  });
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const DependenceReport& r : out.reports) {
    if (!std::isfinite(r.amplification)) out.finite = false;
    lo = std::min(lo, r.amplification);
    hi = std::max(hi, r.amplification);
  }
  out.spread = out.finite && lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::infinity();
  return out;
}

void write_series_csv(std::ostream& os, const std::vector<StepRecord>& records, std::uint64_t seed) {
  os << "# seed=" << seed << '\n';
  os << "time";
  for (Var v : kAllVars) {
    const std::string n = var_name(v);
    os << ',' << n << "_min," << n << "_max," << n << "_L2";
  }
  os << ",Q_L2,H_L2,picard_iters,residual\n";
  for (const StepRecord& r : records) {
    os << format_double(r.time);
    for (const FieldStats& f : r.fields)
      os << ',' << format_double(f.min) << ',' << format_double(f.max) << ',' << format_double(f.l2);
    os << ',' << format_double(r.Q_l2) << ',' << format_double(r.H_l2) << ',' << r.picard_iters << ','
       << format_double(r.residual) << '\n';
  }
}

void write_two_run_csv(std::ostream& os, const TwoRunOutcome& r, std::uint64_t seed) {
  os << "# seed=" << seed << '\n';
  os << "eps,amplification,t_of_max\n";
  for (const DependenceReport& d : r.reports)
    os << format_double(d.eps) << ',' << format_double(d.amplification) << ',' << format_double(d.t_of_max) << '\n';
}

void write_snapshots(const std::string& dir, int step, const StateFields& s) {
  for (Var v : kAllVars) {
    const std::string path = dir + "/" + var_name(v) + "_" + std::to_string(step) + ".fld";
    try {
      write_field_file(path, s[v]);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }
}

}  // namespace moist
