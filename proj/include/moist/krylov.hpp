#pragma once

// Matrix-free Krylov solvers with Jacobi preconditioning.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace moist {

using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovOptions {
  double tol = 1e-10;  // relative residual ||b - A x|| / ||b||
  int max_iter = 1000;
  /// Keep iterates, residuals and the right-hand side mean-free. Used for
  /// singular pure-Neumann systems on uniform grids.
  bool project_mean = false;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // relative
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Preconditioned conjugate gradients for symmetric positive (semi)definite A.
/// `x` holds the initial guess on entry. Throws SolverError if the tolerance
/// is not met within max_iter iterations.
SolveStats pcg(const LinearMap& A, std::span<const double> inv_diag, std::span<const double> b, std::span<double> x,
               const KrylovOptions& opts);

/// Jacobi-preconditioned BiCGSTAB for general nonsymmetric A.
SolveStats bicgstab(const LinearMap& A, std::span<const double> inv_diag, std::span<const double> b,
                    std::span<double> x, const KrylovOptions& opts);

}  // namespace moist
