#pragma once

// Thermodynamic closures: Clausius-Clapeyron saturation pressure with a cold
// cutoff, capped saturation mixing ratio, potential temperature and the
// background temperature profile that linearizes the vertical diffusion.

#include <array>
#include <vector>

#include "moist/grid.hpp"

namespace moist {

/// Prognostic variables, used to index per-variable settings.
enum class Var { T = 0, qv = 1, qc = 2, qr = 3 };
inline constexpr std::array<Var, 4> kAllVars = {Var::T, Var::qv, Var::qc, Var::qr};
inline constexpr int idx(Var v) { return static_cast<int>(v); }
const char* var_name(Var v);

struct PhysicalParams {
  double R = 287.0;        // J/(kg K)
  double R_v = 461.5;      // J/(kg K)
  double c_p = 1004.0;     // J/(kg K)
  double L_latent = 2.5e6; // J/kg
  double g = 9.81;         // m/s^2
  double T0_ref = 273.15;  // K
  double es0 = 611.2;      // Pa
  double T_floor = 150.0;  // K, e_s = q_vs = 0 at and below
  double T_hi_valid = 330.0;
  double qvs_cap = 0.05;
  double sat_frac_max = 0.5;
  double p0_pt = 1.0e5;  // Pa
  double V_sed = 0.17;   // K/s, so V*(p/Tbar)*q_r is a pressure flux

  double C_ev = 1.0e-5;
  double C_cd = 1.0;
  double C_cn = 1.0e-2;
  double C_ac = 1.0e-3;
  double C_cr = 2.0;
  double beta_ev = 0.5;
  double q_ac_star = 5.0e-4;

  /// Horizontal and vertical diffusivities indexed by Var.
  std::array<double, 4> mu = {1e-4, 1e-4, 1e-4, 1e-4};
  std::array<double, 4> nu = {50.0, 50.0, 50.0, 50.0};

  double kappa() const { return R / c_p; }
  double epsilon() const { return R / R_v; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

struct BackgroundProfile {
  std::vector<double> Tbar;  // K, one per pressure level

  static BackgroundProfile linear(const Grid& g, double T_top, double T_bottom);
  void validate(const Grid& g) const;
  double min() const;
  double max() const;
};

WeightProfile make_weight_profile(const Grid& g, const PhysicalParams& params, const BackgroundProfile& profile);

double saturation_vapor_pressure(double T, const PhysicalParams& params);

/// Throws std::invalid_argument for p <= 0.
double saturation_mixing_ratio(double p, double T, const PhysicalParams& params);

/// Upper bound of dq_vs/dT on (max(T_lo, T_floor), T_hi] at pressure p. The
/// jump of size q_vs(T_floor+) at the cutoff is not included.
double lipschitz_bound_qvs(double p, double T_lo, double T_hi, const PhysicalParams& params);

/// (p0_pt / p)^kappa
double exner_inverse(double p, const PhysicalParams& params);
double theta_from_T(double T, double p, const PhysicalParams& params);
double T_from_theta(double theta, double p, const PhysicalParams& params);

}  // namespace moist
