#pragma once

// Batteries and studies shared by the command-line tool and the acceptance
// runner, plus the CSV writers.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moist/config.hpp"
#include "moist/mms.hpp"
#include "moist/rothe.hpp"
#include "moist/stepper.hpp"

namespace moist {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throw ConfigError on a degenerate battery (n < 2, no problems, bad ranges).
void validate_battery(const BatteryConfig& b);
void validate_mms(const MmsConfig& m);
/// eps must be nonempty and strictly positive.
void validate_eps(const std::vector<double>& eps);

struct BatteryOutcome {
  std::vector<EnergyReport> reports;  // problem k used seed + k
  // min over problems of slack / rhs; negative means a violation
  double worst_l2_bound = 0.0;
  double worst_energy_bound = 0.0;
  double worst_energy_bound_stepwise = 0.0;
  bool pass() const;
};

/// Problems run concurrently on up to `threads` workers; results do not
/// depend on the thread count.
BatteryOutcome run_energy_battery(const BatteryConfig& b, int threads);

struct MmsOutcome {
  LadderResult elliptic;
  LadderResult spatial;
  LadderResult temporal;
  bool pass(const MmsConfig& m) const;
};

MmsOutcome run_mms(const MmsConfig& m);

struct TwoRunOutcome {
  std::vector<DependenceReport> reports;
  double spread = 0.0;  // (max A - min A) / min A
  bool finite = true;
  bool pass(double tol) const { return finite && spread <= tol; }
};

TwoRunOutcome run_two_run(const SimConfig& sim, const TwoRunConfig& t, const std::vector<double>& eps, int threads);

/// time, <var>_min, <var>_max, <var>_L2 for T qv qc qr, Q_L2, H_L2, picard_iters, residual
void write_series_csv(std::ostream& os, const std::vector<StepRecord>& records, std::uint64_t seed);
void write_two_run_csv(std::ostream& os, const TwoRunOutcome& r, std::uint64_t seed);

/// `<var>_<step>.fld` in dir.
void write_snapshots(const std::string& dir, int step, const StateFields& s);

/// Effective worker count: 0 means hardware concurrency, at least 1.
int resolve_threads(int requested);

}  // namespace moist
