#include "moist/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace moist {

const char* var_name(Var v) {
  switch (v) {
    case Var::T:
      return "T";
    case Var::qv:
      return "qv";
    case Var::qc:
      return "qc";
    case Var::qr:
      return "qr";
  }
  return "?";
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("physical params: ") + what);
}

}  // namespace

void PhysicalParams::validate() const {
  require(R > 0 && R_v > 0 && c_p > 0 && L_latent > 0 && g > 0, "R, R_v, c_p, L, g must be positive");
  require(es0 > 0 && T0_ref > 0, "es0 and T0_ref must be positive");
  require(T_floor >= 0, "T_floor must be nonnegative");
  require(qvs_cap > 0, "qvs_cap must be positive");
  require(sat_frac_max > 0 && sat_frac_max < 1, "sat_frac_max must lie in (0,1)");
  require(p0_pt > 0, "p0_pt must be positive");
  require(q_ac_star >= 0, "q_ac_star must be nonnegative");
  require(C_ev >= 0 && C_cd >= 0 && C_cn >= 0 && C_ac >= 0 && C_cr >= 0, "rate constants must be nonnegative");
  require(beta_ev > 0 && beta_ev <= 1, "beta_ev must lie in (0,1]");
  for (Var v : kAllVars) {
    require(mu[idx(v)] > 0 && nu[idx(v)] > 0, "diffusivities must be strictly positive");
  }
}

BackgroundProfile BackgroundProfile::linear(const Grid& g, double T_top, double T_bottom) {
  BackgroundProfile b;
  b.Tbar.resize(g.nz);
  for (int k = 0; k < g.nz; ++k) {
    const double s = (g.p_center(k) - g.p1) / (g.p0 - g.p1);
    b.Tbar[k] = T_top + s * (T_bottom - T_top);
  }
  return b;
}

void BackgroundProfile::validate(const Grid& g) const {
  if (static_cast<int>(Tbar.size()) != g.nz) throw std::invalid_argument("background profile: level count mismatch");
  for (double t : Tbar) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("background profile: Tbar must be positive");
  }
}

double BackgroundProfile::min() const { return *std::min_element(Tbar.begin(), Tbar.end()); }
double BackgroundProfile::max() const { return *std::max_element(Tbar.begin(), Tbar.end()); }

WeightProfile make_weight_profile(const Grid& g, const PhysicalParams& params, const BackgroundProfile& profile) {
  profile.validate(g);
  WeightProfile w;
  w.w.resize(g.nz);
  for (int k = 0; k < g.nz; ++k) w.w[k] = params.g * g.p_center(k) / (params.R * profile.Tbar[k]);
  return w;
}

double saturation_vapor_pressure(double T, const PhysicalParams& params) {
  if (T <= params.T_floor) return 0.0;
  return params.es0 * std::exp((params.L_latent / params.R_v) * (1.0 / params.T0_ref - 1.0 / T));
}

double saturation_mixing_ratio(double p, double T, const PhysicalParams& params) {
  if (!(p > 0.0)) throw std::invalid_argument("saturation_mixing_ratio: pressure must be positive");
  if (T <= params.T_floor) return 0.0;
  const double es = saturation_vapor_pressure(T, params);
  if (es >= p * params.sat_frac_max) return params.qvs_cap;
  return std::min(params.epsilon() * es / (p - es), params.qvs_cap);
}

double lipschitz_bound_qvs(double p, double T_lo, double T_hi, const PhysicalParams& params) {
  if (!(T_lo < T_hi)) throw std::invalid_argument("lipschitz_bound_qvs: empty temperature interval");
  if (!(p > 0.0)) throw std::invalid_argument("lipschitz_bound_qvs: pressure must be positive");
  const double lv = params.L_latent / params.R_v;
  // e_s L/(R_v T^2) grows with T below L/(2 R_v), so dq/dT is largest at the
  // right end of the uncapped stretch.
  if (T_hi >= 0.5 * lv) throw std::invalid_argument("lipschitz_bound_qvs: interval beyond the monotone range");
  const double lo = std::max(T_lo, params.T_floor);
  if (lo >= T_hi) return 0.0;
  auto uncapped = [&](double T) {
    const double es = saturation_vapor_pressure(T, params);
    return es < p * params.sat_frac_max && params.epsilon() * es / (p - es) < params.qvs_cap;
  };
  double right = T_hi;
  if (!uncapped(lo)) return 0.0;
  if (!uncapped(T_hi)) {
    double a = lo, b = T_hi;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      (uncapped(m) ? a : b) = m;
    }
    right = b;
  }
  const double es = saturation_vapor_pressure(right, params);
  const double des = es * lv / (right * right);
  return params.epsilon() * p * des / ((p - es) * (p - es));
}

double exner_inverse(double p, const PhysicalParams& params) { return std::pow(params.p0_pt / p, params.kappa()); }

double theta_from_T(double T, double p, const PhysicalParams& params) {
  if (!(p > 0.0)) throw std::invalid_argument("theta_from_T: pressure must be positive");
  return T * exner_inverse(p, params);
}

double T_from_theta(double theta, double p, const PhysicalParams& params) {
  if (!(p > 0.0)) throw std::invalid_argument("T_from_theta: pressure must be positive");
  return theta / exner_inverse(p, params);
}

}  // namespace moist
