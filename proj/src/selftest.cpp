#include "moist/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "moist/grid.hpp"
#include "moist/microphysics.hpp"

namespace moist {

namespace {

using Kernel = std::function<Tendencies(const PointState&, double, const PhysicalParams&, ThermoMode)>;

Tendencies mutant(const PointState& s, double p, const PhysicalParams& params, ThermoMode mode) {
  Tendencies t = assemble_tendencies(s, p, params, mode);
  t.d_qv = -t.rates.s_ev - t.rates.s_cd;
  return t;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  // Zero a quarter of the time, tiny a quarter of the time, else O(scale).
  double mixed(double scale) {
    const double r = uniform(0.0, 1.0);
    if (r < 0.25) return 0.0;
    if (r < 0.5) return scale * std::pow(10.0, uniform(-12.0, -3.0));
    return uniform(0.0, scale);
  }
  PointState state(double p, const PhysicalParams& params) {
    PointState s;
    s.T = uniform(200.0, 320.0);
    const double qvs = saturation_mixing_ratio(p, s.T, params);
    s.qv = qvs * uniform(0.0, 2.0);
    if (uniform(0.0, 1.0) < 0.1) s.qv = qvs;
    s.qc = mixed(3e-3);
    s.qr = mixed(3e-3);
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

PropertyResult cancellation_Q(const Kernel& k, const PhysicalParams& params, Sampler& rng, long n) {
  PropertyResult r{"cancellation_Q", true, 0, ""};
  double worst = 0.0;
  for (long i = 0; i < n; ++i) {
    const double p = rng.uniform(3e4, 1e5);
    const PointState s = rng.state(p, params);
    for (ThermoMode mode : {ThermoMode::Temperature, ThermoMode::Theta}) {
      const Tendencies t = k(s, p, params, mode);
      const double gap = (t.d_qv + t.d_qr) - (t.rates.s_ac + t.rates.s_cr - t.rates.s_cd);
      worst = std::max(worst, std::abs(gap));
      ++r.samples;
    }
  }
  r.pass = worst == 0.0;
  r.detail = "max|gap|=" + format_double(worst);
  return r;
}

PropertyResult cancellation_H(const Kernel& k, const PhysicalParams& params, Sampler& rng, long n) {
  PropertyResult r{"cancellation_H", true, 0, ""};
  const double lc = params.L_latent / params.c_p;
  double worst = 0.0;
  for (long i = 0; i < n; ++i) {
    const double p = rng.uniform(3e4, 1e5);
    const PointState s = rng.state(p, params);
    const Tendencies t = k(s, p, params, ThermoMode::Temperature);
    const double phase = lc * (t.d_qc + t.d_qr);
    const double scale = std::max(std::abs(t.d_T), std::abs(phase));
    if (scale > 0.0) worst = std::max(worst, std::abs(t.d_T - phase) / scale);
    ++r.samples;
  }
  r.pass = worst <= 1e-14;
  r.detail = "max relative=" + format_double(worst);
  return r;
}

PropertyResult monotonicity(double beta, const PhysicalParams& base, Sampler& rng, long n) {
  PhysicalParams params = base;
  params.beta_ev = beta;
  params.C_ev = 1.0;
  PropertyResult r{"monotonicity_beta_" + format_double(beta), true, 0, ""};
  double worst = 0.0;
  for (long i = 0; i < n; ++i) {
    const double a = rng.mixed(1e-2), b = rng.mixed(1e-2);
    // T = 1 and unit deficit leave a^beta.
    const double fa = s_ev(1.0, a, 0.0, 1.0, params), fb = s_ev(1.0, b, 0.0, 1.0, params);
    const double prod = (fa - fb) * (a - b);
    worst = std::min(worst, prod);
    ++r.samples;
  }
  r.pass = worst >= 0.0;
  r.detail = "min product=" + format_double(worst);
  return r;
}

PropertyResult sign_structure(const PhysicalParams& params, Sampler& rng, long n) {
  PropertyResult r{"sign_structure", true, 0, ""};
  long bad = 0;
  for (long i = 0; i < n; ++i) {
    const double p = rng.uniform(3e4, 1e5);
    const PointState s = rng.state(p, params);
    const double qvs = saturation_mixing_ratio(p, s.T, params);
    const bool ok = s_ev(s.T, s.qr, s.qv, qvs, params) >= 0.0 && s_ac(s.qc, params) >= 0.0 &&
                    s_cr(s.qc, s.qr, params) >= 0.0 && s_cd(s.qv, qvs, s.qc, params) * (s.qv - qvs) >= 0.0;
    if (!ok) ++bad;
    ++r.samples;
  }
  r.pass = bad == 0;
  r.detail = "failures=" + std::to_string(bad);
  return r;
}

PropertyResult cutoff(const PhysicalParams& params, Sampler& rng, long n) {
  PropertyResult r{"cutoff", true, 0, ""};
  long bad = 0;
  for (long i = 0; i < n; ++i) {
    const double p = rng.uniform(3e4, 1e5);
    const double T = rng.uniform(200.0, 320.0);
    const double qvs = saturation_mixing_ratio(p, T, params);
    const double qc_below = rng.uniform(-1e-3, params.q_ac_star);
    const double qr_nonpos = -rng.mixed(1e-3);
    const double qv_sat = qvs * rng.uniform(1.0, 2.0);
    bool ok = s_ac(qc_below, params) == 0.0;
    ok = ok && s_ev(T, qr_nonpos, 0.0, qvs, params) == 0.0;
    ok = ok && s_ev(T, rng.mixed(3e-3), qv_sat, qvs, params) == 0.0;
    if (!ok) ++bad;
    r.samples += 3;
  }
  r.pass = bad == 0;
  r.detail = "failures=" + std::to_string(bad);
  return r;
}

std::vector<PropertyResult> saturation(const PhysicalParams& params, Sampler& rng, long n) {
  std::vector<PropertyResult> out;

  PropertyResult mono{"saturation_monotone", true, 0, ""};
  const double lo = params.T_floor - 50.0, hi = params.T_hi_valid + 70.0;
  double prev_es = -1.0, prev_q = -1.0;
  long bad = 0;
  for (long i = 0; i < n; ++i) {
    const double T = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double es = saturation_vapor_pressure(T, params);
    const double q = saturation_mixing_ratio(5e4, T, params);
    if (es < prev_es || q < prev_q) ++bad;
    prev_es = es;
    prev_q = q;
    ++mono.samples;
  }
  mono.pass = bad == 0;
  mono.detail = "decreases=" + std::to_string(bad);
  out.push_back(mono);

  PropertyResult ref{"saturation_reference", true, 1, ""};
  const double es_ref = saturation_vapor_pressure(params.T0_ref, params);
  ref.pass = es_ref == params.es0;
  ref.detail = "e_s(T0_ref)=" + format_double(es_ref);
  out.push_back(ref);

  PropertyResult floor{"saturation_floor", true, 0, ""};
  bad = 0;
  for (long i = 0; i < n; ++i) {
    const double T = i == 0 ? params.T_floor : rng.uniform(0.0, params.T_floor);
    const double p = rng.uniform(1e3, 1.1e5);
    if (saturation_vapor_pressure(T, params) != 0.0 || saturation_mixing_ratio(p, T, params) != 0.0) ++bad;
    ++floor.samples;
  }
  floor.pass = bad == 0;
  floor.detail = "nonzero=" + std::to_string(bad);
  out.push_back(floor);

  PropertyResult range{"qvs_range", true, 0, ""};
  double qmin = 0.0, qmax = 0.0;
  for (long i = 0; i < n; ++i) {
    const double p = std::pow(10.0, rng.uniform(2.0, 5.1));
    const double T = rng.uniform(0.0, 400.0);
    const double q = saturation_mixing_ratio(p, T, params);
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
    ++range.samples;
  }
  range.pass = qmin >= 0.0 && qmax <= params.qvs_cap;
  range.detail = "min=" + format_double(qmin) + " max=" + format_double(qmax);
  out.push_back(range);

  PropertyResult lip{"qvs_lipschitz", true, 0, ""};
  double ratio = 0.0;
  for (long i = 0; i < n; ++i) {
    const double p = rng.uniform(3e4, 1e5);
    const double L = lipschitz_bound_qvs(p, params.T_floor, params.T_hi_valid, params);
    const double T1 = std::nextafter(params.T_floor, 1e9) + rng.uniform(0.0, params.T_hi_valid - params.T_floor);
    const double T2 = std::min(params.T_hi_valid, T1 + rng.uniform(-5.0, 5.0));
    if (T2 <= params.T_floor || T1 == T2) continue;
    const double dq = std::abs(saturation_mixing_ratio(p, T1, params) - saturation_mixing_ratio(p, T2, params));
    ratio = std::max(ratio, dq / (L * std::abs(T1 - T2)));
    ++lip.samples;
  }
  lip.pass = ratio <= 1.0 + 1e-9;
  lip.detail = "max slope/bound=" + format_double(ratio);
  out.push_back(lip);

  return out;
}

PropertyResult positive_part_lipschitz(const PhysicalParams& params, Sampler& rng, long n) {
  PropertyResult r{"positive_part_lipschitz", true, 0, ""};
  double ratio = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = params.q_ac_star + rng.uniform(-2e-3, 2e-3);
    const double y = params.q_ac_star + rng.uniform(-2e-3, 2e-3);
    if (x == y) continue;
    ratio = std::max(ratio, std::abs(s_ac(x, params) - s_ac(y, params)) / (params.C_ac * std::abs(x - y)));
    ++r.samples;
  }
  r.pass = ratio <= 1.0 + 1e-12;
  r.detail = "max slope/C_ac=" + format_double(ratio);
  return r;
}

}  // namespace

std::vector<PropertyResult> run_kernel_selftest(const PhysicalParams& params, const SelftestOptions& opts) {
  params.validate();
  const Kernel kernel = opts.inject_fault ? Kernel(mutant) : Kernel(assemble_tendencies);
  Sampler rng(opts.seed);
  const long n = std::max(2L, opts.samples);
  std::vector<PropertyResult> out;
  out.push_back(cancellation_Q(kernel, params, rng, n));
  out.push_back(cancellation_H(kernel, params, rng, n));
  for (double beta : {0.3, 0.5, 1.0}) out.push_back(monotonicity(beta, params, rng, n));
  out.push_back(sign_structure(params, rng, n));
  out.push_back(cutoff(params, rng, n));
  for (auto& p : saturation(params, rng, n)) out.push_back(std::move(p));
  out.push_back(positive_part_lipschitz(params, rng, n));
  return out;
}

}  // namespace moist
