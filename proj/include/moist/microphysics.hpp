#pragma once

// Kessler-type warm-rain source kernels and their per-equation assembly.

#include <utility>

#include "moist/grid.hpp"
#include "moist/thermo.hpp"

namespace moist {

enum class ThermoMode { Theta, Temperature };

struct PointState {
  double T = 0.0;  // temperature (K), also in theta mode
  double qv = 0.0;
  double qc = 0.0;
  double qr = 0.0;
};

struct SourceRates {
  double s_ev = 0.0;
  double s_cd = 0.0;
  double s_ac = 0.0;
  double s_cr = 0.0;
  double s_T = 0.0;
};

struct Tendencies {
  double d_qv = 0.0;
  double d_qc = 0.0;
  double d_qr = 0.0;
  double d_T = 0.0;  // d_theta in theta mode
  SourceRates rates;
};

/// C_ev * T * (q_r^+)^beta * (q_vs - q_v)^+
double s_ev(double T, double q_r, double q_v, double q_vs, const PhysicalParams& params);
/// C_cd * (q_v - q_vs) * q_c + C_cn * (q_v - q_vs)^+
double s_cd(double q_v, double q_vs, double q_c, const PhysicalParams& params);
/// C_ac * (q_c - q_ac*)^+
double s_ac(double q_c, const PhysicalParams& params);
/// C_cr * q_c * q_r
double s_cr(double q_c, double q_r, const PhysicalParams& params);

/// Per-equation sources at one point. The four rates are first rounded onto a
/// common binary grid 50 bits below the largest of them, which makes every
/// sum and difference below exact: s_ev cancels from d_qv + d_qr and all
/// rates cancel from d_T - (L/c_p)(d_qc + d_qr) bit for bit.
Tendencies assemble_tendencies(const PointState& s, double p, const PhysicalParams& params, ThermoMode mode);

/// Q = q_v + q_r and H = T - (L/c_p)(q_c + q_r), pointwise.
std::pair<ScalarField, ScalarField> transformed_state(const ScalarField& T, const ScalarField& qv,
                                                      const ScalarField& qc, const ScalarField& qr,
                                                      const PhysicalParams& params);

}  // namespace moist
