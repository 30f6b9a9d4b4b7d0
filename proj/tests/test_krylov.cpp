#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "moist/krylov.hpp"

using namespace moist;

namespace {

// 1-D -u'' + shift u with Dirichlet ends, plus an optional convection term.
LinearMap tridiag(int n, double shift, double conv) {
  return [=](std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < n; ++i) {
      const double l = i > 0 ? x[i - 1] : 0.0, r = i + 1 < n ? x[i + 1] : 0.0;
      y[i] = (2 + shift) * x[i] - l - r + conv * (x[i] - l);
    }
  };
}

double residual(const LinearMap& A, const std::vector<double>& x, const std::vector<double>& b) {
  std::vector<double> y(x.size());
  A(x, y);
  double s = 0, nb = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += (b[i] - y[i]) * (b[i] - y[i]);
    nb += b[i] * b[i];
  }
  return std::sqrt(s / nb);
}

}  // namespace

TEST_CASE("pcg solves an SPD system to the requested tolerance") {
  const int n = 200;
  const LinearMap A = tridiag(n, 0.01, 0);
  std::vector<double> xt(n), b(n), x(n, 0.0), inv(n, 1.0 / 2.01);
  for (int i = 0; i < n; ++i) xt[i] = std::sin(0.1 * i) + 0.01 * i;
  A(xt, b);
  const SolveStats s = pcg(A, inv, b, x, KrylovOptions{1e-12, 1000, false});
  CHECK(s.residual <= 1e-12);
  CHECK(residual(A, x, b) <= 1e-11);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xt[i]).epsilon(1e-8));
}

TEST_CASE("zero right-hand side returns zero without iterating") {
  const LinearMap A = tridiag(10, 1, 0);
  std::vector<double> b(10, 0.0), x(10, 3.0), inv(10, 1.0 / 3);
  const SolveStats s = pcg(A, inv, b, x, {});
  CHECK(s.iterations == 0);
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("a warm start already within tolerance costs nothing") {
  const LinearMap A = tridiag(10, 1, 0);
  std::vector<double> xt(10, 1.0), b(10), inv(10, 1.0 / 3);
  A(xt, b);
  std::vector<double> x = xt;
  CHECK(pcg(A, inv, b, x, {}).iterations == 0);
}

TEST_CASE("iteration cap raises SolverError with the residual") {
  const int n = 100;
  const LinearMap A = tridiag(n, 0.0, 0);
  std::vector<double> b(n, 1.0), x(n, 0.0), inv(n, 0.5);
  try {
    pcg(A, inv, b, x, KrylovOptions{1e-12, 3, false});
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.residual() > 1e-12);
  }
}

TEST_CASE("bicgstab handles a nonsymmetric system") {
  const int n = 150;
  const LinearMap A = tridiag(n, 0.05, 0.7);
  std::vector<double> xt(n), b(n), x(n, 0.0), inv(n, 1.0 / 2.75);
  for (int i = 0; i < n; ++i) xt[i] = std::cos(0.05 * i);
  A(xt, b);
  const SolveStats s = bicgstab(A, inv, b, x, KrylovOptions{1e-12, 2000, false});
  CHECK(s.residual <= 1e-12);
  CHECK(residual(A, x, b) <= 1e-11);
}

TEST_CASE("mean projection solves the singular Neumann problem") {
  const int n = 64;
  const LinearMap A = [n](std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < n; ++i) {
      double s = 0;
      if (i > 0) s += x[i] - x[i - 1];
      if (i + 1 < n) s += x[i] - x[i + 1];
      y[i] = s;
    }
  };
  std::vector<double> b(n), x(n, 0.0), inv(n, 0.5);
  for (int i = 0; i < n; ++i) b[i] = std::cos(M_PI * (i + 0.5) / n);
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  for (double& v : b) v -= mean_b;
  pcg(A, inv, b, x, KrylovOptions{1e-11, 1000, true});
  CHECK(std::abs(std::accumulate(x.begin(), x.end(), 0.0)) <= 1e-9);
  CHECK(residual(A, x, b) <= 1e-10);
}
