#include "moist/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "moist/krylov.hpp"

namespace moist {

ScalarField& StateFields::operator[](Var v) {
  switch (v) {
    case Var::T:
      return T;
    case Var::qv:
      return qv;
    case Var::qc:
      return qc;
    case Var::qr:
      return qr;
  }
  return T;
}

const ScalarField& StateFields::operator[](Var v) const { return const_cast<StateFields&>(*this)[v]; }

bool StateFields::all_finite() const { return T.all_finite() && qv.all_finite() && qc.all_finite() && qr.all_finite(); }

RobinBC SimConfig::bc(Var v) const {
  const BoundarySpec& b = boundary[idx(v)];
  return RobinBC::uniform(grid(), b.alpha0, b.b0, b.alpha_ll, b.b_ll);
}

int SimConfig::steps() const {
  const double ratio = t_end / dt;
  return static_cast<int>(std::llround(ratio));
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  const Grid g = grid();
  require(Tbar_top > 0 && Tbar_bottom > 0, "background temperatures must be positive");
  require(dt > 0 && std::isfinite(dt), "dt must be positive");
  require(t_end >= dt, "t_end must be at least dt");
  const double ratio = t_end / dt;
  require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio, "t_end must be an integer multiple of dt");
  require(picard_tol > 0, "picard_tol must be positive");
  require(picard_max >= 1, "picard_max must be at least 1");
  require(solver_tol > 0, "solver_tol must be positive");
  require(solver_max_iter >= 0, "solver_max_iter must be nonnegative");
  require(nonneg_tol >= 0 && qv_tol >= 0, "monitor tolerances must be nonnegative");
  require(snapshot_every >= 0, "snapshot_every must be nonnegative");
  for (Var v : kAllVars) {
    const BoundarySpec& b = boundary[idx(v)];
    require(b.alpha0 >= 0 && b.b0 >= 0 && b.alpha_ll >= 0 && b.b_ll >= 0,
            std::string("boundary.") + var_name(v) + ": coefficients and data must be nonnegative");
  }
  require(std::isfinite(velocity.amplitude), "velocity amplitude must be finite");
  require(velocity.target_cfl >= 0, "target_cfl must be nonnegative");
  require(initial.qv_base >= 0 && initial.qv_spread >= 0 && initial.qc_base >= 0 && initial.qc_spread >= 0 &&
              initial.qr_base >= 0 && initial.qr_spread >= 0 && initial.T_spread >= 0,
          "initial moisture data and spreads must be nonnegative");
  (void)g;
}

Model::Model(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  grid_ = cfg_.grid();
  profile_ = cfg_.profile();
  weights_ = make_weight_profile(grid_, cfg_.params, profile_);
  vel_ = VelocityField(grid_);
  if (cfg_.velocity.kind == VelocityKind::ConvectionCell) {
    amplitude_ = cfg_.velocity.amplitude;
    if (cfg_.velocity.target_cfl > 0) {
      const double unit_cfl = cfl_number(make_convection_cell(grid_, 1.0), cfg_.dt);
      amplitude_ = unit_cfl > 0 ? cfg_.velocity.target_cfl / unit_cfl : 0.0;
    }
    vel_ = make_convection_cell(grid_, amplitude_);
    validate_velocity(vel_);
  }
  exner_ = exner_inverse_levels(grid_, cfg_.params);
  for (Var v : kAllVars) {
    bcs_[idx(v)] = cfg_.bc(v);
    bcs_[idx(v)].validate(grid_);
    const StencilSpec spec =
        moisture_stencil_spec(grid_, cfg_.params.mu[idx(v)], cfg_.params.nu[idx(v)], weights_, bcs_[idx(v)]);
    stencils_.emplace_back(grid_, spec);
    bsrc_.push_back(stencils_.back().boundary_source(bcs_[idx(v)].flux_data()));
  }
}

StateFields Model::initial_state() const {
  const InitialSpec& in = cfg_.initial;
  const PhysicalParams& pp = cfg_.params;
  StateFields s(grid_);
  std::mt19937_64 rng(in.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lc = pp.L_latent / pp.c_p;
  double mean_Tbar = 0.0;
  for (double t : profile_.Tbar) mean_Tbar += t;
  mean_Tbar /= static_cast<double>(profile_.Tbar.size());
  for (int k = 0; k < grid_.nz; ++k) {
    const double p = grid_.p_center(k);
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) {
        const double rT = unit(rng), rv = unit(rng), rc = unit(rng), rr = unit(rng);
        const double T = profile_.Tbar[k] + in.T_offset + in.T_spread * rT;
        double qv = in.qv_base + in.qv_spread * rv;
        if (in.qv_relative) qv *= saturation_mixing_ratio(p, T, pp);
        const double qc = in.qc_base + in.qc_spread * rc;
        const double qr = in.qr_base + in.qr_spread * rr;
        s.T(i, j, k) = in.uniform_enthalpy ? mean_Tbar + in.T_offset + lc * (qc + qr) : T;
        s.qv(i, j, k) = qv;
        s.qc(i, j, k) = qc;
        s.qr(i, j, k) = qr;
      }
  }
  return s;
}

namespace {

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

StepResult picard_step(const Model& model, const StateFields& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("picard_step: dt must be positive");
  if (!state.all_finite()) throw std::invalid_argument("picard_step: state is not finite");
  const SimConfig& cfg = model.config();
  const PhysicalParams& pp = cfg.params;
  const Grid& g = model.grid();
  const bool theta = cfg.mode == ThermoMode::Theta;
  const std::vector<double>& E = model.exner_levels();
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  const std::size_t ncell = g.size();
  const bool moving = !model.velocity().is_zero();
  const VelocityField& vel = model.velocity();

  // Prognostic unknowns: theta or T, then qv, qc, qr.
  std::array<std::vector<double>, 4> old, cur;
  for (Var v : kAllVars) {
    const auto vals = state[v].values();
    old[idx(v)].assign(vals.begin(), vals.end());
  }
  if (theta) {
    for (std::size_t n = 0; n < ncell; ++n) old[0][n] *= E[n / plane];
  }
  cur = old;

  KrylovOptions kopt;
  kopt.tol = cfg.solver_tol;
  kopt.max_iter = cfg.solver_max_iter > 0 ? cfg.solver_max_iter : static_cast<int>(10 * ncell);

  const double inv_dt = 1.0 / dt;
  std::array<std::vector<double>, 4> inv_diag;
  for (Var v : kAllVars) {
    inv_diag[idx(v)] = model.stencil(v).diagonal(inv_dt);
    for (double& d : inv_diag[idx(v)]) d = 1.0 / d;
  }
  // theta operator: theta/dt + E * L_T(theta / E); its diagonal equals that of L_T.
  std::vector<double> scratch(ncell), scratch2(ncell);
  const DiffusionStencil& LT = model.stencil(Var::T);
  auto theta_op = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t n = 0; n < ncell; ++n) scratch[n] = x[n] / E[n / plane];
    LT.apply(scratch, scratch2);
    for (std::size_t n = 0; n < ncell; ++n) y[n] = inv_dt * x[n] + E[n / plane] * scratch2[n];
  };

  std::array<std::vector<double>, 4> rhs;
  for (auto& r : rhs) r.resize(ncell);
  std::vector<double> Ax(ncell), delta(ncell);
  ScalarField work(g);

  StepResult result;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.picard_max; ++it) {
    // Lagged forcing evaluated at the current iterate.
    for (std::size_t n = 0; n < ncell; ++n) {
      const int k = static_cast<int>(n / plane);
      const double p = g.p_center(k);
      const double T = theta ? cur[0][n] / E[k] : cur[0][n];
      const Tendencies td = assemble_tendencies({T, cur[1][n], cur[2][n], cur[3][n]}, p, pp, cfg.mode);
      rhs[0][n] = td.d_T;
      rhs[1][n] = td.d_qv;
      rhs[2][n] = td.d_qc;
      rhs[3][n] = td.d_qr;
    }
    if (moving) {
      for (Var v : kAllVars) {
        std::copy(cur[idx(v)].begin(), cur[idx(v)].end(), work.values().begin());
        const ScalarField a = advect(work, vel);
        for (std::size_t n = 0; n < ncell; ++n) rhs[idx(v)][n] -= a[n];
      }
      if (!theta) {
        // + R T omega / (c_p p), omega averaged to the cell center
        for (int k = 0; k < g.nz; ++k)
          for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
              const std::size_t n = g.index(i, j, k);
              const double om = 0.5 * (vel.W(i, j, k) + vel.W(i, j, k + 1));
              rhs[0][n] += pp.R * cur[0][n] * om / (pp.c_p * g.p_center(k));
            }
      }
    }
    if (pp.V_sed != 0.0) {
      std::copy(cur[3].begin(), cur[3].end(), work.values().begin());
      const ScalarField sed = apply_sedimentation(work, pp, model.profile());
      for (std::size_t n = 0; n < ncell; ++n) rhs[3][n] -= sed[n];
    }

    // Correction equations  A delta = old/dt + forcing + boundary - A cur.
    residual = 0.0;
    std::array<std::vector<double>, 4> next = cur;
    for (Var v : kAllVars) {
      const int j = idx(v);
      const ScalarField& bs = model.boundary_source(v);
      const bool is_theta = theta && v == Var::T;
      if (is_theta) {
        theta_op(cur[j], Ax);
      } else {
        model.stencil(v).apply(cur[j], Ax, inv_dt);
      }
      for (std::size_t n = 0; n < ncell; ++n) {
        const double b = is_theta ? E[n / plane] * bs[n] : bs[n];
        rhs[j][n] = old[j][n] * inv_dt + rhs[j][n] + b - Ax[n];
      }
      std::fill(delta.begin(), delta.end(), 0.0);
      if (is_theta) {
        bicgstab(theta_op, inv_diag[j], rhs[j], delta, kopt);
      } else {
        const DiffusionStencil& L = model.stencil(v);
        auto op = [&L, inv_dt](std::span<const double> x, std::span<double> y) { L.apply(x, y, inv_dt); };
        pcg(op, inv_diag[j], rhs[j], delta, kopt);
      }
      for (std::size_t n = 0; n < ncell; ++n) next[j][n] += delta[n];
      residual += rms(delta);
    }
    cur = std::move(next);
    result.iterations = it;
    if (!std::isfinite(residual)) break;
    if (residual < cfg.picard_tol) break;
  }
  if (!(residual < cfg.picard_tol)) {
    throw PicardError("Picard iteration did not converge in " + std::to_string(cfg.picard_max) +
                          " iterations (residual " + format_double(residual) + ")",
                      result.iterations, residual);
  }
  result.residual = residual;

  if (theta) {
    for (std::size_t n = 0; n < ncell; ++n) cur[0][n] /= E[n / plane];
  }
  result.state = StateFields(g);
  for (Var v : kAllVars) std::copy(cur[idx(v)].begin(), cur[idx(v)].end(), result.state[v].values().begin());
  if (cfg.clamp == ClampPolicy::Clamp) {
    const double V = g.cell_volume();
    for (Var v : {Var::qv, Var::qc, Var::qr}) {
      for (double& x : result.state[v].values()) {
        if (x < 0.0) {
          result.clamped_mass += -x * V;
          x = 0.0;
        }
      }
    }
  }
  return result;
}

double q_v_star(const SimConfig& cfg, const StateFields& initial) {
  const BoundarySpec& b = cfg.boundary[idx(Var::qv)];
  return std::max({initial.qv.max(), b.b0, b.b_ll, cfg.params.qvs_cap});
}

StepRecord record_of(const Model& model, const StateFields& s, const ScalarField& H0, int step, double time) {
  StepRecord r;
  r.step = step;
  r.time = time;
  for (Var v : kAllVars) {
    const ScalarField& f = s[v];
    FieldStats& fs = r.fields[idx(v)];
    fs.min = f.min();
    fs.max = f.max();
    fs.l2 = l2_norm(f);
    fs.h1w = std::sqrt(h1w_seminorm_sq(f, model.weights()));
  }
  auto [Q, H] = transformed_state(s.T, s.qv, s.qc, s.qr, model.config().params);
  r.Q_l2 = l2_norm(Q);
  r.H_l2 = l2_norm(H);
  H -= H0;
  r.H_dev_inf = linf_norm(H);
  r.finite = s.all_finite();
  return r;
}

BoundsReport bounds_report(const std::vector<StepRecord>& records, const SimConfig& cfg, double qv_star) {
  BoundsReport rep;
  rep.q_v_star = qv_star;
  rep.running_min.fill(std::numeric_limits<double>::infinity());
  rep.running_max.fill(-std::numeric_limits<double>::infinity());
  if (records.empty()) {
    rep.running_min.fill(0.0);
    rep.running_max.fill(0.0);
  }
  const std::array<double, 4> upper = {cfg.T_envelope_hi, qv_star + cfg.qv_tol, cfg.qc_envelope, cfg.qr_envelope};
  for (const StepRecord& r : records) {
    if (!r.finite) {
      rep.violations.push_back({r.time, Var::T, std::numeric_limits<double>::quiet_NaN(), 0.0, "nonfinite"});
      continue;
    }
    for (Var v : kAllVars) {
      const FieldStats& fs = r.fields[idx(v)];
      rep.running_min[idx(v)] = std::min(rep.running_min[idx(v)], fs.min);
      rep.running_max[idx(v)] = std::max(rep.running_max[idx(v)], fs.max);
      const double lower = v == Var::T ? cfg.T_envelope_lo : -cfg.nonneg_tol;
      if (fs.min < lower) rep.violations.push_back({r.time, v, fs.min, lower, "lower"});
      if (fs.max > upper[idx(v)]) rep.violations.push_back({r.time, v, fs.max, upper[idx(v)], "upper"});
    }
  }
  return rep;
}

std::string BoundsReport::to_text() const {
  std::ostringstream os;
  os << "q_v_star: " << format_double(q_v_star) << '\n';
  for (Var v : kAllVars) {
    os << var_name(v) << "_min: " << format_double(running_min[idx(v)]) << '\n';
    os << var_name(v) << "_max: " << format_double(running_max[idx(v)]) << '\n';
  }
  os << "violations: " << violations.size() << '\n';
  for (const Violation& x : violations) {
    os << "violation: t=" << format_double(x.time) << ' ' << var_name(x.var) << ' ' << x.kind
       << " value=" << format_double(x.value) << " bound=" << format_double(x.bound) << '\n';
  }
  return os.str();
}

RunResult run(const SimConfig& cfg, const StepObserver& observer, const std::optional<StateFields>& initial) {
  const Model model(cfg);
  StateFields state = initial ? *initial : model.initial_state();
  if (!(state.T.grid() == model.grid())) throw std::invalid_argument("run: initial state grid mismatch");
  const ScalarField H0 = transformed_state(state.T, state.qv, state.qc, state.qr, cfg.params).second;
  const double qv_star = q_v_star(cfg, state);

  RunResult out;
  out.records.push_back(record_of(model, state, H0, 0, 0.0));
  if (observer) observer(0, 0.0, state);
  const int N = cfg.steps();
  for (int n = 1; n <= N; ++n) {
    const double t = n * cfg.dt;
    StepResult sr;
    try {
      sr = picard_step(model, state, cfg.dt);
    } catch (const PicardError& e) {
      throw PicardError("t=" + format_double(t) + ": " + e.what(), e.iterations(), e.residual());
    } catch (const SolverError& e) {
      throw SolverError("t=" + format_double(t) + ": " + e.what(), e.iterations(), e.residual());
    }
    state = std::move(sr.state);
    StepRecord rec = record_of(model, state, H0, n, t);
    rec.picard_iters = sr.iterations;
    rec.residual = sr.residual;
    rec.clamped_mass = sr.clamped_mass;
    out.records.push_back(rec);
    if (observer) observer(n, t, state);
  }
  out.bounds = bounds_report(out.records, cfg, qv_star);
  out.final_state = std::move(state);
  return out;
}

namespace {

double state_distance(const StateFields& a, const StateFields& b) {
  double s = 0.0;
  for (Var v : kAllVars) {
    ScalarField d = a[v];
    d -= b[v];
    const double n = l2_norm(d);
    s += n * n;
  }
  return std::sqrt(s);
}

}  // namespace

DependenceReport continuous_dependence_experiment(const SimConfig& cfg, double eps, std::uint64_t seed, double pert_T,
                                                  double pert_q) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("continuous dependence: eps must be positive");
  const Model model(cfg);
  const StateFields base = model.initial_state();
  StateFields perturbed = base;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0), unit(0.0, 1.0);
  for (std::size_t n = 0; n < base.T.size(); ++n) {
    perturbed.T[n] += eps * pert_T * sym(rng);
    // Nonnegative moisture perturbations keep the data admissible.
    perturbed.qv[n] += eps * pert_q * unit(rng);
    perturbed.qc[n] += eps * pert_q * unit(rng);
    perturbed.qr[n] += eps * pert_q * unit(rng);
  }
  const double d0 = state_distance(base, perturbed);
  if (!(d0 > 0.0)) throw std::invalid_argument("continuous dependence: initial distance is zero");

  std::vector<StateFields> reference;
  run(cfg, [&](int, double, const StateFields& s) { reference.push_back(s); }, base);

  DependenceReport rep;
  rep.eps = eps;
  run(
      cfg,
      [&](int step, double t, const StateFields& s) {
        rep.times.push_back(t);
        rep.distance.push_back(state_distance(reference[step], s));
      },
      perturbed);
  rep.amplification = 0.0;
  for (std::size_t n = 0; n < rep.distance.size(); ++n) {
    const double a = rep.distance[n] / d0;
    if (a > rep.amplification) {
      rep.amplification = a;
      rep.t_of_max = rep.times[n];
    }
  }
  return rep;
}

}  // namespace moist
