#include "moist/krylov.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace moist {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void remove_mean(std::span<double> v) {
  if (v.empty()) return;
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= m;
}

}  // namespace

SolveStats pcg(const LinearMap& A, std::span<const double> inv_diag, std::span<const double> b_in, std::span<double> x,
               const KrylovOptions& opts) {
  const std::size_t n = b_in.size();
  std::vector<double> b(b_in.begin(), b_in.end());
  if (opts.project_mean) {
    remove_mean(b);
    remove_mean(x);
  }
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  A(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  if (opts.project_mean) remove_mean(r);
  double rnorm = norm(r);
  if (rnorm <= opts.tol * bnorm) return {0, rnorm / bnorm};

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  if (opts.project_mean) remove_mean(z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= opts.max_iter; ++it) {
    A(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw SolverError("pcg: operator is not positive definite on the search direction", it, rnorm / bnorm);
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (opts.project_mean) {
      remove_mean(r);
      remove_mean(x);
    }
    rnorm = norm(r);
    if (rnorm <= opts.tol * bnorm) return {it, rnorm / bnorm};
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    if (opts.project_mean) remove_mean(z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("pcg: no convergence after " + std::to_string(opts.max_iter) +
                        " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")",
                    opts.max_iter, rnorm / bnorm);
}

SolveStats bicgstab(const LinearMap& A, std::span<const double> inv_diag, std::span<const double> b, std::span<double> x,
                    const KrylovOptions& opts) {
  const std::size_t n = b.size();
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }
  std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  A(x, t);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
  double rnorm = norm(r);
  if (rnorm <= opts.tol * bnorm) return {0, rnorm / bnorm};
  r0 = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    const double rho_next = dot(r0, r);
    if (rho_next == 0.0) throw SolverError("bicgstab: breakdown (rho = 0)", it, rnorm / bnorm);
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) phat[i] = inv_diag[i] * p[i];
    A(phat, v);
    const double r0v = dot(r0, v);
    if (r0v == 0.0) throw SolverError("bicgstab: breakdown (r0.v = 0)", it, rnorm / bnorm);
    alpha = rho / r0v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    const double snorm = norm(s);
    if (snorm <= opts.tol * bnorm) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      return {it, snorm / bnorm};
    }
    for (std::size_t i = 0; i < n; ++i) shat[i] = inv_diag[i] * s[i];
    A(shat, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    rnorm = norm(r);
    if (rnorm <= opts.tol * bnorm) return {it, rnorm / bnorm};
    if (omega == 0.0) throw SolverError("bicgstab: breakdown (omega = 0)", it, rnorm / bnorm);
  }
  throw SolverError("bicgstab: no convergence after " + std::to_string(opts.max_iter) +
                        " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")",
                    opts.max_iter, rnorm / bnorm);
}

}  // namespace moist
