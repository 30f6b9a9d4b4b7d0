#include "moist/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace moist {

VelocityField::VelocityField(const Grid& g)
    : grid(g),
      u(static_cast<std::size_t>(g.nx + 1) * g.ny * g.nz, 0.0),
      v(static_cast<std::size_t>(g.nx) * (g.ny + 1) * g.nz, 0.0),
      omega(static_cast<std::size_t>(g.nx) * g.ny * (g.nz + 1), 0.0) {}

bool VelocityField::is_zero() const {
  auto zero = [](const std::vector<double>& a) { return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; }); };
  return zero(u) && zero(v) && zero(omega);
}

double VelocityField::max_boundary_normal() const {
  const Grid& g = grid;
  double m = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j) m = std::max({m, std::abs(U(0, j, k)), std::abs(U(g.nx, j, k))});
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) m = std::max({m, std::abs(V(i, 0, k)), std::abs(V(i, g.ny, k))});
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m = std::max({m, std::abs(W(i, j, 0)), std::abs(W(i, j, g.nz))});
  return m;
}

ScalarField discrete_divergence(const VelocityField& vel) {
  const Grid& g = vel.grid;
  const double ax = g.dy() * g.dp(), ay = g.dx() * g.dp(), az = g.dx() * g.dy();
  const double inv_v = 1.0 / g.cell_volume();
  ScalarField div(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double net = (vel.U(i + 1, j, k) - vel.U(i, j, k)) * ax + (vel.V(i, j + 1, k) - vel.V(i, j, k)) * ay +
                           (vel.W(i, j, k + 1) - vel.W(i, j, k)) * az;
        div(i, j, k) = net * inv_v;
      }
  return div;
}

void validate_velocity(const VelocityField& vel, double div_tol) {
  const Grid& g = vel.grid;
  if (vel.u.size() != static_cast<std::size_t>(g.nx + 1) * g.ny * g.nz ||
      vel.v.size() != static_cast<std::size_t>(g.nx) * (g.ny + 1) * g.nz ||
      vel.omega.size() != static_cast<std::size_t>(g.nx) * g.ny * (g.nz + 1)) {
    throw VelocityError("velocity: array sizes do not match the grid");
  }
  const double bn = vel.max_boundary_normal();
  if (bn != 0.0) throw VelocityError("velocity: nonzero normal component on the boundary (" + format_double(bn) + ")");
  const double d = linf_norm(discrete_divergence(vel));
  if (!(d <= div_tol)) throw VelocityError("velocity: discrete divergence " + format_double(d) + " exceeds tolerance");
}

VelocityField make_convection_cell(const Grid& g, double amplitude) {
  VelocityField vel(g);
  if (amplitude == 0.0) return vel;
  const double pi = std::numbers::pi;
  // Streamfunction at cell corners of the (x, p) plane, exactly zero on the boundary.
  std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.nz + 1), 0.0);
  auto P = [&](int i, int k) -> double& { return psi[i + static_cast<std::size_t>(g.nx + 1) * k]; };
  for (int k = 1; k < g.nz; ++k)
    for (int i = 1; i < g.nx; ++i)
      P(i, k) = amplitude * std::sin(pi * i / g.nx) * std::sin(pi * k / g.nz);
  const double dx = g.dx(), dp = g.dp();
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) vel.U(i, j, k) = (P(i, k + 1) - P(i, k)) / dp;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) vel.W(i, j, k) = -(P(i + 1, k) - P(i, k)) / dx;
  return vel;
}

double cfl_number(const VelocityField& vel, double dt) {
  const Grid& g = vel.grid;
  const double ax = g.dy() * g.dp(), ay = g.dx() * g.dp(), az = g.dx() * g.dy();
  const double inv_v = 1.0 / g.cell_volume();
  double m = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double out = 0.0;
        out += std::max(vel.U(i + 1, j, k), 0.0) * ax + std::max(-vel.U(i, j, k), 0.0) * ax;
        out += std::max(vel.V(i, j + 1, k), 0.0) * ay + std::max(-vel.V(i, j, k), 0.0) * ay;
        out += std::max(vel.W(i, j, k + 1), 0.0) * az + std::max(-vel.W(i, j, k), 0.0) * az;
        m = std::max(m, dt * out * inv_v);
      }
  return m;
}

RobinBC RobinBC::uniform(const Grid& g, double alpha0, double b0, double alpha_ll, double b_ll) {
  RobinBC bc{BoundaryField(g, alpha_ll), BoundaryField(g, b_ll)};
  bc.alpha[Side::Bottom].assign(g.side_face_count(Side::Bottom), alpha0);
  bc.b[Side::Bottom].assign(g.side_face_count(Side::Bottom), b0);
  bc.alpha[Side::Top].assign(g.side_face_count(Side::Top), 0.0);
  bc.b[Side::Top].assign(g.side_face_count(Side::Top), 0.0);
  return bc;
}

RobinBC RobinBC::neumann(const Grid& g) { return RobinBC{BoundaryField(g, 0.0), BoundaryField(g, 0.0)}; }

void RobinBC::validate(const Grid& g) const {
  for (Side s : kAllSides) {
    if (alpha[s].size() != g.side_face_count(s) || b[s].size() != g.side_face_count(s)) {
      throw std::invalid_argument("robin bc: face count mismatch");
    }
    for (std::size_t f = 0; f < alpha[s].size(); ++f) {
      if (!(alpha[s][f] >= 0.0) || !std::isfinite(alpha[s][f])) throw std::invalid_argument("robin bc: alpha must be nonnegative");
      if (!(b[s][f] >= 0.0) || !std::isfinite(b[s][f])) throw std::invalid_argument("robin bc: data must be nonnegative");
    }
  }
  for (std::size_t f = 0; f < alpha[Side::Top].size(); ++f) {
    if (alpha[Side::Top][f] != 0.0) throw std::invalid_argument("robin bc: the top boundary is homogeneous Neumann");
  }
}

BoundaryField RobinBC::flux_data() const {
  BoundaryField d = alpha;
  for (Side s : kAllSides)
    for (std::size_t f = 0; f < d[s].size(); ++f) d[s][f] = alpha[s][f] * b[s][f];
  return d;
}

double robin_ghost(double f_in, double alpha, double b, double h) {
  const double ah = alpha * h;
  return (f_in * (1.0 - ah / 2.0) + ah * b) / (1.0 + ah / 2.0);
}

double robin_ghost(const ScalarField& f, const RobinBC& bc, Side s, std::size_t face) {
  const Grid& g = f.grid();
  return robin_ghost(f[boundary_cell(g, s, face)], bc.alpha[s][face], bc.b[s][face], g.side_spacing(s));
}

std::vector<double> weighted_face_coefficients(const Grid& g, double nu, const WeightProfile& w) {
  if (static_cast<int>(w.w.size()) != g.nz) throw std::invalid_argument("weight profile: level count mismatch");
  std::vector<double> kz(static_cast<std::size_t>(g.nx) * g.ny * (g.nz + 1));
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  for (int kf = 0; kf <= g.nz; ++kf) {
    double wf;
    if (kf == 0) {
      wf = w.w.front();
    } else if (kf == g.nz) {
      wf = w.w.back();
    } else {
      wf = 0.5 * (w.w[kf - 1] + w.w[kf]);
    }
    std::fill(kz.begin() + kf * plane, kz.begin() + (kf + 1) * plane, nu * wf * wf);
  }
  return kz;
}

StencilSpec moisture_stencil_spec(const Grid& g, double mu, double nu, const WeightProfile& w, const RobinBC& bc) {
  StencilSpec spec;
  spec.kx = mu;
  spec.ky = mu;
  spec.kz = weighted_face_coefficients(g, nu, w);
  spec.alpha = bc.alpha;
  return spec;
}

ScalarField apply_diffusion(const ScalarField& f, double mu, double nu, const WeightProfile& w, const RobinBC& bc) {
  const Grid& g = f.grid();
  if (static_cast<int>(w.w.size()) != g.nz) throw std::invalid_argument("weight profile: level count mismatch");
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  const double dx2 = g.dx() * g.dx(), dy2 = g.dy() * g.dy(), dp2 = g.dp() * g.dp();
  std::vector<double> wf2(nz + 1);
  wf2[0] = w.w.front() * w.w.front();
  wf2[nz] = w.w.back() * w.w.back();
  for (int k = 1; k < nz; ++k) {
    const double m = 0.5 * (w.w[k - 1] + w.w[k]);
    wf2[k] = m * m;
  }
  ScalarField out(g);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double c = f(i, j, k);
        const double fw = i > 0 ? f(i - 1, j, k) : robin_ghost(f, bc, Side::XLow, j + static_cast<std::size_t>(ny) * k);
        const double fe = i < nx - 1 ? f(i + 1, j, k) : robin_ghost(f, bc, Side::XHigh, j + static_cast<std::size_t>(ny) * k);
        const double fs = j > 0 ? f(i, j - 1, k) : robin_ghost(f, bc, Side::YLow, i + static_cast<std::size_t>(nx) * k);
        const double fn = j < ny - 1 ? f(i, j + 1, k) : robin_ghost(f, bc, Side::YHigh, i + static_cast<std::size_t>(nx) * k);
        const double ft = k > 0 ? f(i, j, k - 1) : robin_ghost(f, bc, Side::Top, i + static_cast<std::size_t>(nx) * j);
        const double fb = k < nz - 1 ? f(i, j, k + 1) : robin_ghost(f, bc, Side::Bottom, i + static_cast<std::size_t>(nx) * j);
        const double horiz = (fw - c + (fe - c)) / dx2 + (fs - c + (fn - c)) / dy2;
        const double vert = (wf2[k + 1] * (fb - c) - wf2[k] * (c - ft)) / dp2;
        out(i, j, k) = mu * horiz + nu * vert;
      }
  return out;
}

std::vector<double> exner_inverse_levels(const Grid& g, const PhysicalParams& params) {
  std::vector<double> e(g.nz);
  for (int k = 0; k < g.nz; ++k) {
    const double p = g.p_center(k);
    if (!(p > 0.0)) throw std::invalid_argument("potential temperature needs positive pressure levels");
    e[k] = exner_inverse(p, params);
  }
  return e;
}

ScalarField apply_theta_diffusion(const ScalarField& theta, double mu, double nu, const WeightProfile& w,
                                  const PhysicalParams& params, const RobinBC& bc_T) {
  const Grid& g = theta.grid();
  const std::vector<double> E = exner_inverse_levels(g, params);
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  ScalarField T(g);
  for (std::size_t n = 0; n < theta.size(); ++n) T[n] = theta[n] / E[n / plane];
  ScalarField out = apply_diffusion(T, mu, nu, w, bc_T);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] *= E[n / plane];
  return out;
}

ScalarField advect(const ScalarField& f, const VelocityField& vel) {
  const Grid& g = f.grid();
  if (!(vel.grid == g)) throw VelocityError("velocity: grid mismatch");
  validate_velocity(vel);
  const double ax = g.dy() * g.dp(), ay = g.dx() * g.dp(), az = g.dx() * g.dy();
  const double inv_v = 1.0 / g.cell_volume();
  ScalarField out(g);
  auto upwind = [](double flux, double left, double right) { return flux > 0.0 ? flux * left : flux * right; };
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double c = f(i, j, k);
        double net = 0.0;
        if (i + 1 < g.nx) net += upwind(vel.U(i + 1, j, k) * ax, c, f(i + 1, j, k));
        if (i > 0) net -= upwind(vel.U(i, j, k) * ax, f(i - 1, j, k), c);
        if (j + 1 < g.ny) net += upwind(vel.V(i, j + 1, k) * ay, c, f(i, j + 1, k));
        if (j > 0) net -= upwind(vel.V(i, j, k) * ay, f(i, j - 1, k), c);
        if (k + 1 < g.nz) net += upwind(vel.W(i, j, k + 1) * az, c, f(i, j, k + 1));
        if (k > 0) net -= upwind(vel.W(i, j, k) * az, f(i, j, k - 1), c);
        out(i, j, k) = net * inv_v;
      }
  return out;
}

namespace {

// Sedimentation flux V (p/Tbar) q_r through p-face kf of column (i, j).
double sedimentation_flux(const ScalarField& q_r, const PhysicalParams& params, const BackgroundProfile& profile, int i,
                          int j, int kf) {
  const Grid& g = q_r.grid();
  const double V = params.V_sed;
  if (V == 0.0) return 0.0;
  auto carried = [&](int k) { return V * (g.p_center(k) / profile.Tbar[k]) * q_r(i, j, k); };
  if (V > 0.0) {
    if (kf == 0) return 0.0;  // nothing enters through the top
    return carried(kf - 1);
  }
  if (kf == g.nz) return 0.0;  // nothing enters through the bottom
  return carried(kf);
}

}  // namespace

ScalarField apply_sedimentation(const ScalarField& q_r, const PhysicalParams& params, const BackgroundProfile& profile) {
  const Grid& g = q_r.grid();
  profile.validate(g);
  ScalarField out(g);
  if (params.V_sed == 0.0) return out;
  const double dp = g.dp();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double upper = sedimentation_flux(q_r, params, profile, i, j, 0);
      for (int k = 0; k < g.nz; ++k) {
        const double lower = sedimentation_flux(q_r, params, profile, i, j, k + 1);
        out(i, j, k) = (lower - upper) / dp;
        upper = lower;
      }
    }
  return out;
}

double sedimentation_outflow(const ScalarField& q_r, const PhysicalParams& params, const BackgroundProfile& profile) {
  const Grid& g = q_r.grid();
  profile.validate(g);
  const double area = g.dx() * g.dy();
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      total += sedimentation_flux(q_r, params, profile, i, j, g.nz) * area;
      total -= sedimentation_flux(q_r, params, profile, i, j, 0) * area;
    }
  return total;
}

}  // namespace moist
