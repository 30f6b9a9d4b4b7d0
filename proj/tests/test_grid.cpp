#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "moist/grid.hpp"

using namespace moist;

TEST_CASE("grid rejects bad extents and counts") {
  CHECK_THROWS_AS(Grid::make(1, 1, 0, 1, 0, 1, 1), GridError);
  CHECK_THROWS_AS(Grid::make(1, 1, 1, 1, 2, 2, 2), GridError);
  CHECK_THROWS_AS(Grid::make(-1, 1, 0, 1, 2, 2, 2), GridError);
  CHECK_NOTHROW(Grid::make(2, 3, 3e4, 1e5, 4, 5, 6));
}

TEST_CASE("x runs fastest, p slowest; k = 0 touches the top") {
  const Grid g = Grid::make(2, 3, 3e4, 1e5, 4, 5, 6);
  CHECK(g.index(1, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) == 4);
  CHECK(g.index(0, 0, 1) == 20);
  CHECK(g.p_center(0) < g.p_center(5));
  CHECK(g.p_face(0) == 3e4);
  CHECK(Grid::tag(Side::Top) == BoundaryTag::Gamma1);
  CHECK(Grid::tag(Side::Bottom) == BoundaryTag::Gamma0);
  CHECK(Grid::tag(Side::XLow) == BoundaryTag::GammaLateral);
}

TEST_CASE("boundary face layout matches the adjacent cell") {
  const Grid g = Grid::make(1, 1, 0, 1, 3, 4, 5);
  CHECK(g.side_face_count(Side::XLow) == 20);
  CHECK(g.side_face_count(Side::YHigh) == 15);
  CHECK(g.side_face_count(Side::Bottom) == 12);
  // x-sides j + ny k, y-sides i + nx k, p-sides i + nx j
  CHECK(boundary_cell(g, Side::XHigh, 2 + 4 * 3) == g.index(2, 2, 3));
  CHECK(boundary_cell(g, Side::YLow, 1 + 3 * 4) == g.index(1, 0, 4));
  CHECK(boundary_cell(g, Side::Bottom, 2 + 3 * 1) == g.index(2, 1, 4));
  CHECK(boundary_cell(g, Side::Top, 2 + 3 * 1) == g.index(2, 1, 0));
  const auto c = boundary_face_center(g, Side::Bottom, 0);
  CHECK(c[2] == 1.0);
  CHECK(c[0] == doctest::Approx(1.0 / 6));
}

TEST_CASE("norms of simple fields") {
  const Grid g = Grid::make(2, 1, 0, 3, 4, 2, 3);
  const ScalarField c(g, 2.0);
  CHECK(integrate(c) == doctest::Approx(12.0));
  CHECK(l2_norm(c) == doctest::Approx(std::sqrt(24.0)));
  CHECK(linf_norm(c) == 2.0);
  CHECK(lm_norm(c, 4) == doctest::Approx(std::pow(16.0 * 6.0, 0.25)));
  CHECK_THROWS_AS(lm_norm(c, 0.5), std::invalid_argument);
  CHECK(horizontal_gradient_sq(c) == 0.0);
}

TEST_CASE("horizontal gradient of a linear field") {
  const Grid g = Grid::make(2, 1, 0, 3, 4, 2, 3);
  ScalarField f(g);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 4; ++i) f(i, j, k) = 5.0 * g.x_center(i);
  // three interior x-face columns, each of area dy*dp*ny*nz = 3, jump 5 dx over dx
  CHECK(horizontal_gradient_sq(f) == doctest::Approx(25.0 * 3 * 3 * g.dx()));
}

TEST_CASE("field text round trip is exact") {
  const Grid g = Grid::make(1.5, 0.25, 3e4, 1e5, 3, 2, 4);
  ScalarField f(g);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = u(rng) * std::pow(10.0, 40 * u(rng));
  f[0] = std::numeric_limits<double>::denorm_min();
  f[1] = -0.0;
  std::stringstream ss;
  write_field(ss, f);
  const ScalarField back = read_field(ss);
  CHECK(back.grid() == g);
  for (std::size_t n = 0; n < f.size(); ++n) CHECK(back[n] == f[n]);
  CHECK(std::signbit(back[1]));
}

TEST_CASE("malformed field files are rejected") {
  std::stringstream short_header("2 2 2 1 1 0\n1 2 3 4 5 6 7 8\n");
  CHECK_THROWS(read_field(short_header));
  std::stringstream short_body("2 1 1 1 1 0 1\n1\n");
  CHECK_THROWS(read_field(short_body));
  std::stringstream junk("1 1 1 1 1 0 1\nabc\n");
  CHECK_THROWS(read_field(junk));
}

TEST_CASE("format_double is the shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-10) == "1e-10");
  CHECK(format_double(290) == "290");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
}
