#include <cmath>

#include "doctest.h"
#include "moist/thermo.hpp"
#include "oracle_values.hpp"

using namespace moist;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}  // namespace

TEST_CASE("saturation vapor pressure against the reference values") {
  const PhysicalParams p;
  CHECK(rel_close(saturation_vapor_pressure(300, p), oracle::kEs300, 1e-13));
  CHECK(rel_close(saturation_vapor_pressure(250, p), oracle::kEs250, 1e-13));
  CHECK(saturation_vapor_pressure(p.T0_ref, p) == p.es0);
  CHECK(saturation_vapor_pressure(p.T_floor, p) == 0.0);
  CHECK(saturation_vapor_pressure(p.T_floor - 20, p) == 0.0);
}

TEST_CASE("saturation mixing ratio, cap and cutoff") {
  const PhysicalParams p;
  CHECK(rel_close(saturation_mixing_ratio(8e4, 290, p), oracle::kQvs_80000_290, 1e-13));
  CHECK(saturation_mixing_ratio(3e4, 300, p) == oracle::kQvs_30000_300);
  CHECK(saturation_mixing_ratio(100, 320, p) == p.qvs_cap);
  CHECK(saturation_mixing_ratio(5e4, 140, p) == 0.0);
  CHECK_THROWS_AS(saturation_mixing_ratio(0, 280, p), std::invalid_argument);
}

TEST_CASE("Lipschitz bound of q_vs is the slope where the cap starts") {
  const PhysicalParams p;
  const double L = lipschitz_bound_qvs(8e4, p.T_floor, p.T_hi_valid, p);
  CHECK(rel_close(L, oracle::kLipschitzQvs_80000, 1e-9));
  // below the cap the bound is the slope at the right end
  const double L2 = lipschitz_bound_qvs(8e4, 200, 280, p);
  const double h = 1e-4;
  const double fd = (saturation_mixing_ratio(8e4, 280, p) - saturation_mixing_ratio(8e4, 280 - h, p)) / h;
  CHECK(rel_close(L2, fd, 1e-4));
  CHECK(L2 >= fd);
  CHECK(lipschitz_bound_qvs(8e4, 100, 140, p) == 0.0);
  CHECK_THROWS_AS(lipschitz_bound_qvs(8e4, 300, 200, p), std::invalid_argument);
}

TEST_CASE("potential temperature conversions") {
  const PhysicalParams p;
  CHECK(rel_close(exner_inverse(5e4, p), oracle::kExnerInv_50000, 1e-14));
  CHECK(exner_inverse(p.p0_pt, p) == 1.0);
  for (double pr : {3e4, 6.5e4, 1e5}) {
    const double th = theta_from_T(270.0, pr, p);
    CHECK(rel_close(T_from_theta(th, pr, p), 270.0, 1e-15));
  }
  CHECK_THROWS_AS(theta_from_T(270, -1, p), std::invalid_argument);
  CHECK_THROWS_AS(T_from_theta(270, 0, p), std::invalid_argument);
}

TEST_CASE("weight profile g p / (R Tbar)") {
  const PhysicalParams p;
  const Grid g = Grid::make(1, 1, 6e4, 1e5, 1, 1, 2);  // centers at 7e4 and 9e4
  BackgroundProfile bp;
  bp.Tbar = {280.0, 280.0};
  const WeightProfile w = make_weight_profile(g, p, bp);
  CHECK(rel_close(0.5 * (w.w[0] + w.w[1]), oracle::kWeight_80000_280, 1e-14));
  bp.Tbar = {280.0};
  CHECK_THROWS(make_weight_profile(g, p, bp));
}

TEST_CASE("linear background profile interpolates between the ends") {
  const Grid g = Grid::make(1, 1, 3e4, 1e5, 1, 1, 7);
  const BackgroundProfile b = BackgroundProfile::linear(g, 240, 290);
  CHECK(b.Tbar[3] == doctest::Approx(265));
  CHECK(b.min() > 240);
  CHECK(b.max() < 290);
}

TEST_CASE("parameter validation") {
  PhysicalParams p;
  CHECK_NOTHROW(p.validate());
  p.beta_ev = 0;
  CHECK_THROWS(p.validate());
  p = PhysicalParams{};
  p.mu[2] = 0;
  CHECK_THROWS(p.validate());
  p = PhysicalParams{};
  p.C_cr = -1;
  CHECK_THROWS(p.validate());
}
