#include "moist/mms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace moist {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double c1 = 0.3, c2 = 0.2, c3 = 0.4;
constexpr double kB = 1.0, kAlpha = 2.0, kBeta = 1.0;

double coeff_a(double z) { return 1.0 + 0.5 * z; }

double X(double x, double y, double z) {
  return std::cos(kPi * x + c1) * std::cos(kPi * y + c2) * std::cos(kPi * z + c3);
}

std::array<double, 3> gradX(double x, double y, double z) {
  const double C1 = std::cos(kPi * x + c1), C2 = std::cos(kPi * y + c2), C3 = std::cos(kPi * z + c3);
  const double S1 = std::sin(kPi * x + c1), S2 = std::sin(kPi * y + c2), S3 = std::sin(kPi * z + c3);
  return {-kPi * S1 * C2 * C3, -kPi * C1 * S2 * C3, -kPi * C1 * C2 * S3};
}

// -Delta_h X - d_z(a d_z X) + b X
double LX(double x, double y, double z) {
  const double dz = gradX(x, y, z)[2];
  return (2.0 * kPi * kPi + coeff_a(z) * kPi * kPi + kB) * X(x, y, z) - 0.5 * dz;
}

std::array<double, 3> outward_normal(Side s) {
  switch (s) {
    case Side::XLow:
      return {-1, 0, 0};
    case Side::XHigh:
      return {1, 0, 0};
    case Side::YLow:
      return {0, -1, 0};
    case Side::YHigh:
      return {0, 1, 0};
    case Side::Top:
      return {0, 0, -1};
    case Side::Bottom:
      return {0, 0, 1};
  }
  return {0, 0, 0};
}

BoundaryField robin_data_of_X(const Grid& g) {
  BoundaryField d(g, 0.0);
  for (Side s : kAllSides) {
    const auto n = outward_normal(s);
    const double coef = Grid::tag(s) == BoundaryTag::GammaLateral ? kAlpha : kBeta;
    for (std::size_t f = 0; f < d[s].size(); ++f) {
      const auto c = boundary_face_center(g, s, f);
      const auto gr = gradX(c[0], c[1], c[2]);
      d[s][f] = gr[0] * n[0] + gr[1] * n[1] + gr[2] * n[2] + coef * X(c[0], c[1], c[2]);
    }
  }
  return d;
}

EllipticCoeffs mms_coeffs(const Grid& g) {
  EllipticCoeffs c = EllipticCoeffs::constant(g, 1.0, kB, kAlpha, kBeta);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) c.a(i, j, k) = coeff_a(g.p_center(k));
  c.lambda_lo = 1.0;
  c.Lambda_hi = 1.5;
  return c;
}

ScalarField sample_X(const Grid& g, double scale) {
  ScalarField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(i, j, k) = scale * X(g.x_center(i), g.y_center(j), g.p_center(k));
  return out;
}

Grid cube(int n) { return Grid::make(1.0, 1.0, 0.0, 1.0, n, n, n); }

void fill_orders(LadderResult& r) {
  r.orders.clear();
  for (std::size_t n = 1; n < r.errors.size(); ++n) {
    const double ratio = static_cast<double>(r.levels[n]) / r.levels[n - 1];
    r.orders.push_back(std::log(r.errors[n - 1] / r.errors[n]) / std::log(ratio));
  }
}

}  // namespace

double LadderResult::min_order() const {
  if (orders.empty()) return std::numeric_limits<double>::quiet_NaN();
  return *std::min_element(orders.begin(), orders.end());
}

std::string LadderResult::to_text(const std::string& label) const {
  std::ostringstream os;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    os << label << ' ' << levels[n] << " error " << format_double(errors[n]);
    if (n > 0) os << " order " << format_double(orders[n - 1]);
    os << '\n';
  }
  return os.str();
}

LinearParabolicProblem mms_problem(int n, double decay, double horizon) {
  const Grid g = cube(n);
  LinearParabolicProblem p;
  p.coeffs = mms_coeffs(g);
  p.horizon = horizon;
  p.u0 = sample_X(g, 1.0);
  p.forcing_fn = [decay](double x, double y, double z, double t) {
    const double s = std::exp(-decay * t);
    return -decay * s * X(x, y, z) + s * LX(x, y, z);
  };
  const BoundaryField base = robin_data_of_X(g);
  p.boundary_data = [base, decay](double t) {
    BoundaryField d = base;
    const double s = std::exp(-decay * t);
    for (auto& side : d.side)
      for (double& v : side) v *= s;
    return d;
  };
  return p;
}

LadderResult mms_elliptic_ladder(const std::vector<int>& sizes, const EllipticOptions& opts) {
  LadderResult r;
  for (int n : sizes) {
    const Grid g = cube(n);
    ScalarField f(g);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j, k) = LX(g.x_center(i), g.y_center(j), g.p_center(k));
    const EllipticSolution sol = elliptic_solve(mms_coeffs(g), f, robin_data_of_X(g), opts);
    ScalarField err = sol.u;
    err -= sample_X(g, 1.0);
    r.levels.push_back(n);
    r.errors.push_back(l2_norm(err));
  }
  fill_orders(r);
  return r;
}

LadderResult mms_parabolic_spatial_ladder(const std::vector<int>& sizes, int N, double horizon,
                                          const EllipticOptions& opts) {
  LadderResult r;
  for (int n : sizes) {
    const LinearParabolicProblem p = mms_problem(n, 0.0, horizon);
    const RotheTrajectory traj = rothe_march(p, N, opts);
    ScalarField err = traj.u_steps.back();
    err -= sample_X(p.coeffs.grid(), 1.0);
    r.levels.push_back(n);
    r.errors.push_back(l2_norm(err));
  }
  fill_orders(r);
  return r;
}

LadderResult mms_temporal_ladder(int n, const std::vector<int>& steps, double horizon, const EllipticOptions& opts) {
  LadderResult r;
  for (int N : steps) {
    const LinearParabolicProblem p = mms_problem(n, 1.0, horizon);
    const RotheTrajectory traj = rothe_march(p, N, opts);
    ScalarField err = traj.u_steps.back();
    err -= sample_X(p.coeffs.grid(), std::exp(-horizon));
    r.levels.push_back(N);
    r.errors.push_back(l2_norm(err));
  }
  fill_orders(r);
  return r;
}

}  // namespace moist
