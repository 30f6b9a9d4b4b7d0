#include "moist/microphysics.hpp"

#include <algorithm>
#include <cmath>

namespace moist {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

double power_law(double x, double beta) {
  if (beta == 1.0) return x;
  return std::pow(x, beta);
}

// Round v to the nearest multiple of `quantum` (a power of two).
double snap(double v, int exponent) { return std::ldexp(std::nearbyint(std::ldexp(v, -exponent)), exponent); }

}  // namespace

double s_ev(double T, double q_r, double q_v, double q_vs, const PhysicalParams& params) {
  const double qr_pos = positive_part(q_r);
  const double deficit = positive_part(q_vs - q_v);
  if (qr_pos == 0.0 || deficit == 0.0) return 0.0;
  return params.C_ev * T * power_law(qr_pos, params.beta_ev) * deficit;
}

double s_cd(double q_v, double q_vs, double q_c, const PhysicalParams& params) {
  const double excess = q_v - q_vs;
  return params.C_cd * excess * q_c + params.C_cn * positive_part(excess);
}

double s_ac(double q_c, const PhysicalParams& params) { return params.C_ac * positive_part(q_c - params.q_ac_star); }

double s_cr(double q_c, double q_r, const PhysicalParams& params) { return params.C_cr * q_c * q_r; }

Tendencies assemble_tendencies(const PointState& s, double p, const PhysicalParams& params, ThermoMode mode) {
  const double q_vs = saturation_mixing_ratio(p, s.T, params);
  double ev = s_ev(s.T, s.qr, s.qv, q_vs, params);
  double cd = s_cd(s.qv, q_vs, s.qc, params);
  double ac = s_ac(s.qc, params);
  double cr = s_cr(s.qc, s.qr, params);

  const double largest = std::max({std::abs(ev), std::abs(cd), std::abs(ac), std::abs(cr)});
  if (largest > 0.0) {
    // All four rates become integer multiples of 2^e with magnitude <= 2^50,
    // so the sums of up to eight of them below are exact in double precision.
    const int e = std::ilogb(largest) + 1 - 50;
    ev = snap(ev, e);
    cd = snap(cd, e);
    ac = snap(ac, e);
    cr = snap(cr, e);
  }

  Tendencies t;
  t.rates = {ev, cd, ac, cr, 0.0};
  t.d_qv = ev - cd;
  t.d_qc = cd - ac - cr;
  t.d_qr = ac + cr - ev;
  t.rates.s_T = (params.L_latent / params.c_p) * (cd - ev);
  t.d_T = t.rates.s_T;
  if (mode == ThermoMode::Theta) t.d_T *= exner_inverse(p, params);
  return t;
}

std::pair<ScalarField, ScalarField> transformed_state(const ScalarField& T, const ScalarField& qv,
                                                      const ScalarField& qc, const ScalarField& qr,
                                                      const PhysicalParams& params) {
  ScalarField Q(T.grid()), H(T.grid());
  const double lc = params.L_latent / params.c_p;
  for (std::size_t n = 0; n < T.size(); ++n) {
    Q[n] = qv[n] + qr[n];
    H[n] = T[n] - lc * (qc[n] + qr[n]);
  }
  return {std::move(Q), std::move(H)};
}

}  // namespace moist
