#include "moist/rothe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace moist {

namespace {

bool is_lateral(Side s) { return Grid::tag(s) == BoundaryTag::GammaLateral; }

int max_iter_for(const Grid& g, const EllipticOptions& opts) {
  return opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * g.size());
}

double l2_vec(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

EllipticCoeffs EllipticCoeffs::constant(const Grid& g, double a, double b, double alpha, double beta) {
  EllipticCoeffs c{ScalarField(g, a), ScalarField(g, b), BoundaryField(g, alpha), BoundaryField(g, beta), a, a};
  return c;
}

void EllipticCoeffs::validate() const {
  const Grid& g = grid();
  if (!(b.grid() == g)) throw std::invalid_argument("elliptic coeffs: grid mismatch");
  if (!(lambda_lo > 0.0) || !(Lambda_hi >= lambda_lo)) throw std::invalid_argument("elliptic coeffs: need 0 < lambda <= Lambda");
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] >= lambda_lo && a[n] <= Lambda_hi)) throw std::invalid_argument("elliptic coeffs: a outside [lambda, Lambda]");
    if (!(b[n] >= 0.0) || !std::isfinite(b[n])) throw std::invalid_argument("elliptic coeffs: b must be nonnegative");
  }
  for (Side s : kAllSides) {
    if (alpha_ll[s].size() != g.side_face_count(s) || beta_01[s].size() != g.side_face_count(s)) {
      throw std::invalid_argument("elliptic coeffs: boundary coefficient size mismatch");
    }
    const auto& r = is_lateral(s) ? alpha_ll[s] : beta_01[s];
    for (double x : r) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("elliptic coeffs: Robin coefficients must be nonnegative");
    }
  }
}

std::vector<double> EllipticCoeffs::face_a() const {
  const Grid& g = grid();
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  std::vector<double> fa(plane * (g.nz + 1));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t col = i + static_cast<std::size_t>(g.nx) * j;
      for (int k = 1; k < g.nz; ++k) fa[col + plane * k] = 0.5 * (a(i, j, k - 1) + a(i, j, k));
      double top = a(i, j, 0), bottom = a(i, j, g.nz - 1);
      if (g.nz >= 2) {
        top += 0.5 * (a(i, j, 0) - a(i, j, 1));
        bottom += 0.5 * (a(i, j, g.nz - 1) - a(i, j, g.nz - 2));
      }
      fa[col] = std::clamp(top, lambda_lo, Lambda_hi);
      fa[col + plane * g.nz] = std::clamp(bottom, lambda_lo, Lambda_hi);
    }
  return fa;
}

StencilSpec EllipticCoeffs::stencil_spec() const {
  const Grid& g = grid();
  StencilSpec spec;
  spec.kx = 1.0;
  spec.ky = 1.0;
  spec.kz = face_a();
  spec.alpha = BoundaryField(g, 0.0);
  for (Side s : kAllSides) spec.alpha[s] = is_lateral(s) ? alpha_ll[s] : beta_01[s];
  spec.b.assign(b.values().begin(), b.values().end());
  return spec;
}

bool EllipticCoeffs::pure_neumann() const {
  for (std::size_t n = 0; n < b.size(); ++n)
    if (b[n] != 0.0) return false;
  for (Side s : kAllSides) {
    const auto& r = is_lateral(s) ? alpha_ll[s] : beta_01[s];
    for (double x : r)
      if (x != 0.0) return false;
  }
  return true;
}

EllipticSolution elliptic_solve(const EllipticCoeffs& c, const ScalarField& f, const BoundaryField& data,
                                const EllipticOptions& opts) {
  c.validate();
  const Grid& g = c.grid();
  if (!(f.grid() == g)) throw std::invalid_argument("elliptic_solve: forcing grid mismatch");
  const DiffusionStencil L(g, c.stencil_spec());
  ScalarField rhs = f;
  rhs += L.boundary_source(data);

  KrylovOptions kopt;
  kopt.tol = opts.tol;
  kopt.max_iter = max_iter_for(g, opts);
  if (c.pure_neumann()) {
    // Compatibility: the total source must vanish.
    double total = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < rhs.size(); ++n) {
      total += rhs[n];
      scale += std::abs(f[n]) + std::abs(rhs[n] - f[n]);
    }
    if (std::abs(total) > opts.compat_tol * std::max(scale, 1e-300)) {
      throw IncompatibleData("elliptic_solve: pure Neumann data violate the compatibility condition (net source " +
                             format_double(total * g.cell_volume()) + ")");
    }
    kopt.project_mean = true;
  }
  const std::vector<double> diag = L.diagonal();
  std::vector<double> inv(diag.size());
  for (std::size_t n = 0; n < diag.size(); ++n) inv[n] = 1.0 / diag[n];

  EllipticSolution sol{ScalarField(g), {}};
  auto op = [&L](std::span<const double> x, std::span<double> y) { L.apply(x, y); };
  sol.stats = pcg(op, inv, rhs.values(), sol.u.values(), kopt);
  return sol;
}

double elliptic_residual(const EllipticCoeffs& c, const ScalarField& u, const ScalarField& f, const BoundaryField& data) {
  const DiffusionStencil L(c.grid(), c.stencil_spec());
  ScalarField rhs = f;
  rhs += L.boundary_source(data);
  ScalarField r = L.apply(u);
  r -= rhs;
  if (c.pure_neumann()) {
    double mr = 0.0, mb = 0.0;
    for (std::size_t n = 0; n < r.size(); ++n) {
      mr += r[n];
      mb += rhs[n];
    }
    mr /= static_cast<double>(r.size());
    mb /= static_cast<double>(r.size());
    for (std::size_t n = 0; n < r.size(); ++n) {
      r[n] -= mr;
      rhs[n] -= mb;
    }
  }
  const double bn = l2_vec(rhs.values());
  const double rn = l2_vec(r.values());
  return bn > 0.0 ? rn / bn : rn;
}

ScalarField lift_boundary(const EllipticCoeffs& c, const BoundaryField& data, const EllipticOptions& opts) {
  return elliptic_solve(c, ScalarField(c.grid()), data, opts).u;
}

namespace {

ScalarField sample(const Grid& g, const SpaceTimeFn& fn, double t) {
  ScalarField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(i, j, k) = fn(g.x_center(i), g.y_center(j), g.p_center(k), t);
  return out;
}

}  // namespace

RotheTrajectory rothe_march(const LinearParabolicProblem& problem, int N, const EllipticOptions& opts) {
  if (N < 1) throw std::invalid_argument("rothe_march: N must be at least 1");
  if (!(problem.horizon > 0.0)) throw std::invalid_argument("rothe_march: horizon must be positive");
  const EllipticCoeffs& c = problem.coeffs;
  c.validate();
  const Grid& g = c.grid();
  if (!problem.forcing_fn && !problem.forcing_steps.empty() &&
      problem.forcing_steps.size() != static_cast<std::size_t>(N)) {
    throw std::invalid_argument("rothe_march: step forcing count differs from N");
  }

  RotheTrajectory traj;
  traj.h = problem.horizon / N;
  const double h = traj.h;
  const bool lifted = static_cast<bool>(problem.boundary_data);

  ScalarField U_prev(g);
  if (lifted) U_prev = lift_boundary(c, problem.boundary_data(0.0), opts);
  traj.v0 = problem.u0;
  traj.v0 -= U_prev;

  const DiffusionStencil L(g, c.stencil_spec());
  const std::vector<double> diag = L.diagonal(1.0 / h);
  std::vector<double> inv(diag.size());
  for (std::size_t n = 0; n < diag.size(); ++n) inv[n] = 1.0 / diag[n];
  auto op = [&L, h](std::span<const double> x, std::span<double> y) { L.apply(x, y, 1.0 / h); };
  KrylovOptions kopt;
  kopt.tol = opts.tol;
  kopt.max_iter = max_iter_for(g, opts);

  ScalarField v = traj.v0;
  for (int k = 0; k < N; ++k) {
    ScalarField gk(g);
    if (problem.forcing_fn) {
      gk = sample(g, problem.forcing_fn, (k + 0.5) * h);
    } else if (!problem.forcing_steps.empty()) {
      gk = problem.forcing_steps[k];
    }
    ScalarField U_next(g);
    if (lifted) {
      const double t_next = (k + 1 == N) ? problem.horizon : (k + 1) * h;
      try {
        U_next = lift_boundary(c, problem.boundary_data(t_next), opts);
      } catch (const SolverError& e) {
        throw SolverError("rothe step " + std::to_string(k + 1) + " (lifting): " + e.what(), e.iterations(), e.residual());
      }
      for (std::size_t n = 0; n < gk.size(); ++n) gk[n] -= (U_next[n] - U_prev[n]) / h;
    }
    ScalarField rhs = gk;
    for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] += v[n] / h;
    ScalarField next = v;  // warm start
    SolveStats st;
    try {
      st = pcg(op, inv, rhs.values(), next.values(), kopt);
    } catch (const SolverError& e) {
      throw SolverError("rothe step " + std::to_string(k + 1) + ": " + e.what(), e.iterations(), e.residual());
    }
    traj.stats.push_back(st);
    traj.g_steps.push_back(gk);
    ScalarField u = next;
    if (lifted) u += U_next;
    traj.u_steps.push_back(std::move(u));
    traj.v_steps.push_back(next);
    v = std::move(next);
    U_prev = std::move(U_next);
  }
  return traj;
}

EnergyReport energy_certificates(const RotheTrajectory& traj, const LinearParabolicProblem& problem) {
  const EllipticCoeffs& c = problem.coeffs;
  const DiffusionStencil L(c.grid(), c.stencil_spec());
  EnergyReport r;
  const double h = traj.h;
  const std::size_t N = traj.v_steps.size();
  r.lambda = std::min(1.0, c.lambda_lo);
  r.horizon = h * static_cast<double>(N);

  for (const auto& gk : traj.g_steps) {
    const double n = l2_norm(gk);
    r.g_norm_sq += h * n * n;
  }
  const double v0n = l2_norm(traj.v0);
  r.v0_norm_sq = v0n * v0n;
  r.v0_energy = L.energy(traj.v0, traj.v0);

  double grad_sum = 0.0, sup_l2 = 0.0, sup_energy = 0.0, diff_sum = 0.0, stepwise = 0.0;
  const ScalarField* prev = &traj.v0;
  for (std::size_t k = 0; k < N; ++k) {
    const ScalarField& cur = traj.v_steps[k];
    grad_sum += full_gradient_sq(cur);
    const double n = l2_norm(cur);
    sup_l2 = std::max(sup_l2, n * n);
    const double e = L.energy(cur, cur);
    sup_energy = std::max(sup_energy, e);
    ScalarField d = cur;
    d -= *prev;
    const double dn = l2_norm(d) / h;
    diff_sum += h * dn * dn;
    stepwise = std::max(stepwise, e + diff_sum);
    prev = &cur;
  }
  r.l2_bound_lhs = h * r.lambda * grad_sum + sup_l2;
  r.l2_bound_rhs = 8.0 * r.horizon * r.g_norm_sq + 4.0 * r.v0_norm_sq;
  r.energy_bound_lhs = sup_energy + diff_sum;
  r.energy_bound_rhs = r.g_norm_sq + r.v0_energy;
  r.energy_bound_stepwise_lhs = stepwise;
  return r;
}

std::string EnergyReport::to_text() const {
  std::ostringstream os;
  os << "lambda: " << format_double(lambda) << '\n'
     << "horizon: " << format_double(horizon) << '\n'
     << "g_norm_sq: " << format_double(g_norm_sq) << '\n'
     << "v0_norm_sq: " << format_double(v0_norm_sq) << '\n'
     << "v0_energy: " << format_double(v0_energy) << '\n'
     << "l2_bound_lhs: " << format_double(l2_bound_lhs) << '\n'
     << "l2_bound_rhs: " << format_double(l2_bound_rhs) << '\n'
     << "l2_bound_slack: " << format_double(l2_bound_slack()) << '\n'
     << "l2_bound_pass: " << (l2_bound_pass() ? "true" : "false") << '\n'
     << "energy_bound_lhs: " << format_double(energy_bound_lhs) << '\n'
     << "energy_bound_rhs: " << format_double(energy_bound_rhs) << '\n'
     << "energy_bound_slack: " << format_double(energy_bound_slack()) << '\n'
     << "energy_bound_pass: " << (energy_bound_pass() ? "true" : "false") << '\n'
     << "energy_bound_stepwise_lhs: " << format_double(energy_bound_stepwise_lhs) << '\n'
     << "energy_bound_stepwise_slack: " << format_double(energy_bound_stepwise_slack()) << '\n'
     << "energy_bound_stepwise_pass: " << (energy_bound_stepwise_pass() ? "true" : "false") << '\n';
  return os.str();
}

LinearParabolicProblem random_homogeneous_problem(const RandomProblemSpec& spec, std::uint64_t seed) {
  const Grid g = Grid::make(1.0, 1.0, 0.0, 1.0, spec.n, spec.n, spec.n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  LinearParabolicProblem p;
  p.coeffs.a = ScalarField(g);
  p.coeffs.b = ScalarField(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    p.coeffs.a[n] = draw(spec.a_lo, spec.a_hi);
    p.coeffs.b[n] = draw(0.0, spec.b_hi);
  }
  p.coeffs.lambda_lo = spec.a_lo;
  p.coeffs.Lambda_hi = std::max(spec.a_hi, std::max(spec.b_hi, spec.robin_hi));
  p.coeffs.alpha_ll = BoundaryField(g, 0.0);
  p.coeffs.beta_01 = BoundaryField(g, 0.0);
  for (Side s : kAllSides) {
    auto& target = is_lateral(s) ? p.coeffs.alpha_ll[s] : p.coeffs.beta_01[s];
    for (double& x : target) x = draw(0.0, spec.robin_hi);
  }
  p.u0 = ScalarField(g);
  for (std::size_t n = 0; n < g.size(); ++n) p.u0[n] = draw(-1.0, 1.0);
  p.forcing_steps.reserve(spec.N);
  for (int k = 0; k < spec.N; ++k) {
    ScalarField gk(g);
    for (std::size_t n = 0; n < g.size(); ++n) gk[n] = draw(-1.0, 1.0);
    p.forcing_steps.push_back(std::move(gk));
  }
  p.horizon = spec.horizon;
  return p;
}

}  // namespace moist
