#pragma once

// Full moisture model: per-step Picard iteration over four decoupled linear
// implicit solves, diagnostics, the q_v maximum-principle monitor and the
// two-run continuous-dependence experiment.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moist/microphysics.hpp"
#include "moist/operators.hpp"
#include "moist/thermo.hpp"

namespace moist {

enum class ClampPolicy { Monitor, Clamp };
enum class VelocityKind { None, ConvectionCell };

struct StateFields {
  ScalarField T;  // temperature in K, regardless of the prognostic mode
  ScalarField qv;
  ScalarField qc;
  ScalarField qr;

  StateFields() = default;
  explicit StateFields(const Grid& g) : T(g), qv(g), qc(g), qr(g) {}

  ScalarField& operator[](Var v);
  const ScalarField& operator[](Var v) const;
  bool all_finite() const;
  bool operator==(const StateFields&) const = default;
};

struct VelocitySpec {
  VelocityKind kind = VelocityKind::None;
  /// Streamfunction amplitude; ignored when target_cfl > 0.
  double amplitude = 0.0;
  /// Scale the amplitude so that cfl_number(vel, dt) equals this value.
  double target_cfl = 0.0;
  bool operator==(const VelocitySpec&) const = default;
};

/// Initial data: T = profile + T_offset + T_spread * r, q = base + spread * r,
/// with r uniform in [0, 1) from a generator seeded with `seed`. When
/// qv_relative is set, qv base and spread are fractions of the local q_vs.
struct InitialSpec {
  std::uint64_t seed = 1;
  double T_offset = 0.0;
  double T_spread = 0.0;
  bool qv_relative = false;
  double qv_base = 0.0, qv_spread = 0.0;
  double qc_base = 0.0, qc_spread = 0.0;
  double qr_base = 0.0, qr_spread = 0.0;
  /// Replace T by H0 + (L/c_p)(q_c + q_r) so that H starts uniform (H0 = profile mean + T_offset).
  bool uniform_enthalpy = false;
  bool operator==(const InitialSpec&) const = default;
};

struct BoundarySpec {
  double alpha0 = 0.0, b0 = 0.0;      // Gamma0 (bottom)
  double alpha_ll = 0.0, b_ll = 0.0;  // lateral
  bool operator==(const BoundarySpec&) const = default;
};

struct SimConfig {
  // grid
  double Lx = 1.0, Ly = 1.0, p1 = 3.0e4, p0 = 1.0e5;
  int nx = 24, ny = 4, nz = 24;
  // physics and closures
  PhysicalParams params;
  double Tbar_top = 240.0, Tbar_bottom = 290.0;
  std::array<BoundarySpec, 4> boundary{};
  VelocitySpec velocity;
  // time
  double dt = 10.0;
  double t_end = 500.0;
  double picard_tol = 1e-9;
  int picard_max = 25;
  ThermoMode mode = ThermoMode::Theta;
  ClampPolicy clamp = ClampPolicy::Monitor;
  double solver_tol = 1e-10;
  int solver_max_iter = 0;  // 0 means 10 * cell count
  // monitors
  double nonneg_tol = 1e-10;
  double qv_tol = 1e-8;
  double qc_envelope = 0.1;
  double qr_envelope = 0.1;
  double T_envelope_lo = 100.0;
  double T_envelope_hi = 400.0;
  // output
  int snapshot_every = 0;  // 0 disables snapshots
  InitialSpec initial;

  Grid grid() const { return Grid::make(Lx, Ly, p1, p0, nx, ny, nz); }
  BackgroundProfile profile() const { return BackgroundProfile::linear(grid(), Tbar_top, Tbar_bottom); }
  RobinBC bc(Var v) const;
  int steps() const;
  /// Throws std::invalid_argument naming the offending setting.
  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

class PicardError : public std::runtime_error {
 public:
  PicardError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Everything that stays fixed across steps.
class Model {
 public:
  explicit Model(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const BackgroundProfile& profile() const { return profile_; }
  const WeightProfile& weights() const { return weights_; }
  const VelocityField& velocity() const { return vel_; }
  const RobinBC& bc(Var v) const { return bcs_[idx(v)]; }
  const std::vector<double>& exner_levels() const { return exner_; }
  const DiffusionStencil& stencil(Var v) const { return stencils_[idx(v)]; }
  /// Boundary-data source of the diffusion operator, per unit volume (temperature form for T).
  const ScalarField& boundary_source(Var v) const { return bsrc_[idx(v)]; }
  double velocity_amplitude() const { return amplitude_; }

  StateFields initial_state() const;

 private:
  SimConfig cfg_;
  Grid grid_;
  BackgroundProfile profile_;
  WeightProfile weights_;
  VelocityField vel_;
  std::array<RobinBC, 4> bcs_;
  std::vector<double> exner_;
  std::vector<DiffusionStencil> stencils_;
  std::vector<ScalarField> bsrc_;
  double amplitude_ = 0.0;
};

struct StepResult {
  StateFields state;
  int iterations = 0;
  double residual = 0.0;
  double clamped_mass = 0.0;
};

/// One time step of size dt from `state`. Throws PicardError when picard_max
/// iterations do not reach picard_tol; SolverError propagates from the solves.
StepResult picard_step(const Model& model, const StateFields& state, double dt);

struct FieldStats {
  double min = 0.0, max = 0.0, l2 = 0.0, h1w = 0.0;
};

struct StepRecord {
  int step = 0;
  double time = 0.0;
  std::array<FieldStats, 4> fields{};
  double Q_l2 = 0.0, H_l2 = 0.0;
  double H_dev_inf = 0.0;  // ||H(t) - H(0)||_inf
  int picard_iters = 0;
  double residual = 0.0;
  double clamped_mass = 0.0;
  bool finite = true;
};

struct Violation {
  double time = 0.0;
  Var var = Var::qv;
  double value = 0.0;
  double bound = 0.0;
  std::string kind;  // "upper", "lower", "nonfinite"
};

struct BoundsReport {
  std::array<double, 4> running_min{};
  std::array<double, 4> running_max{};
  double q_v_star = 0.0;
  std::vector<Violation> violations;
  std::string to_text() const;
};

/// max(sup initial q_v, sup Gamma0 data, sup lateral data, qvs_cap).
double q_v_star(const SimConfig& cfg, const StateFields& initial);

BoundsReport bounds_report(const std::vector<StepRecord>& records, const SimConfig& cfg, double qv_star);

StepRecord record_of(const Model& model, const StateFields& s, const ScalarField& H0, int step, double time);

struct RunResult {
  std::vector<StepRecord> records;  // step 0 is the initial state
  BoundsReport bounds;
  StateFields final_state;
};

using StepObserver = std::function<void(int step, double time, const StateFields& state)>;

/// Integrates from the configured initial state, or from `initial` if given.
RunResult run(const SimConfig& cfg, const StepObserver& observer = {},
              const std::optional<StateFields>& initial = std::nullopt);

struct DependenceReport {
  double eps = 0.0;
  std::vector<double> times;
  std::vector<double> distance;  // d(t)
  double amplification = 0.0;    // sup_t d(t) / d(0)
  double t_of_max = 0.0;
};

/// Two runs whose initial data differ by eps times a fixed random direction
/// (drawn from `seed`); T is perturbed by pert_T kelvin and each q by pert_q.
DependenceReport continuous_dependence_experiment(const SimConfig& cfg, double eps, std::uint64_t seed,
                                                  double pert_T = 1.0, double pert_q = 1e-3);

}  // namespace moist
