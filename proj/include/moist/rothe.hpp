#pragma once

// Linear elliptic Robin problems on the box and their implicit-Euler (Rothe)
// time discretization:
//
//   -Delta_h u - d_z(a d_z u) + b u = f          in the box
//   d_n u + alpha u = phi                          on the lateral sides
//   d_nu u + beta u = psi                          on the top and bottom
//
// The vertical coordinate z is the grid's p axis. Boundary data live in one
// BoundaryField: phi on the four lateral sides, psi on Top and Bottom.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moist/grid.hpp"
#include "moist/krylov.hpp"
#include "moist/stencil.hpp"

namespace moist {

struct EllipticCoeffs {
  ScalarField a;          // lambda_lo <= a <= Lambda_hi
  ScalarField b;          // >= 0
  BoundaryField alpha_ll; // lateral sides only; top/bottom entries ignored
  BoundaryField beta_01;  // top/bottom only; lateral entries ignored
  double lambda_lo = 1.0;
  double Lambda_hi = 1.0;

  const Grid& grid() const { return a.grid(); }

  static EllipticCoeffs constant(const Grid& g, double a, double b, double alpha, double beta);
  /// Throws std::invalid_argument when a bound or sign condition fails.
  void validate() const;
  /// a on p-faces: mean of the two cells inside, linear extrapolation clamped to
  /// [lambda_lo, Lambda_hi] on the boundary faces.
  std::vector<double> face_a() const;
  StencilSpec stencil_spec() const;
  /// b, alpha and beta all vanish: the operator annihilates constants.
  bool pure_neumann() const;
};

class IncompatibleData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EllipticOptions {
  double tol = 1e-10;
  int max_iter = 0;              // 0 means 10 * cell count
  double compat_tol = 1e-8;      // relative, for the pure-Neumann branch
};

struct EllipticSolution {
  ScalarField u;
  SolveStats stats;
};

/// Solves the discrete problem. In the pure-Neumann case the data must satisfy
/// the compatibility condition (else IncompatibleData) and the mean-zero
/// solution is returned. Non-convergence throws SolverError.
EllipticSolution elliptic_solve(const EllipticCoeffs& c, const ScalarField& f, const BoundaryField& data,
                                const EllipticOptions& opts = {});

/// Relative residual || L u - f - B(data) || / || f + B(data) || of the discrete system.
double elliptic_residual(const EllipticCoeffs& c, const ScalarField& u, const ScalarField& f, const BoundaryField& data);

/// Solution of L U = 0 with the given boundary data.
ScalarField lift_boundary(const EllipticCoeffs& c, const BoundaryField& data, const EllipticOptions& opts = {});

using SpaceTimeFn = std::function<double(double x, double y, double z, double t)>;
using BoundaryFn = std::function<BoundaryField(double t)>;

struct LinearParabolicProblem {
  EllipticCoeffs coeffs;
  /// Analytic forcing, averaged over each step by midpoint sampling.
  SpaceTimeFn forcing_fn;
  /// Step forcing g^{k+1}, k = 0..N-1; used when forcing_fn is empty.
  std::vector<ScalarField> forcing_steps;
  /// Time-dependent boundary data; empty means homogeneous.
  BoundaryFn boundary_data;
  ScalarField u0;
  double horizon = 1.0;
};

struct RotheTrajectory {
  double h = 0.0;
  ScalarField v0;                   // homogeneous-data initial value
  std::vector<ScalarField> v_steps; // v^1..v^N
  std::vector<ScalarField> g_steps; // g^1..g^N (including the lifting correction)
  std::vector<ScalarField> u_steps; // v^k + lifting at t_k
  std::vector<SolveStats> stats;
};

/// Backward Euler with N steps of size horizon / N. Solver failures are
/// rethrown as SolverError naming the step.
RotheTrajectory rothe_march(const LinearParabolicProblem& problem, int N, const EllipticOptions& opts = {});

struct EnergyReport {
  double lambda = 0.0;
  double horizon = 0.0;
  double g_norm_sq = 0.0;    // h * sum ||g^{k+1}||^2
  double v0_norm_sq = 0.0;
  double v0_energy = 0.0;    // <v0, v0>_a
  double l2_bound_lhs = 0.0, l2_bound_rhs = 0.0;
  double energy_bound_lhs = 0.0, energy_bound_rhs = 0.0;
  /// max over M of <v^{M+1}, v^{M+1}>_a + h sum_{k<=M} ||(v^{k+1}-v^k)/h||^2
  double energy_bound_stepwise_lhs = 0.0;
  double rel_tol = 1e-10;

  double l2_bound_slack() const { return l2_bound_rhs - l2_bound_lhs; }
  double energy_bound_slack() const { return energy_bound_rhs - energy_bound_lhs; }
  double energy_bound_stepwise_slack() const { return energy_bound_rhs - energy_bound_stepwise_lhs; }
  bool l2_bound_pass() const { return l2_bound_slack() >= -rel_tol * l2_bound_rhs; }
  bool energy_bound_pass() const { return energy_bound_slack() >= -rel_tol * energy_bound_rhs; }
  bool energy_bound_stepwise_pass() const { return energy_bound_stepwise_slack() >= -rel_tol * energy_bound_rhs; }
  /// key: value lines
  std::string to_text() const;
};

EnergyReport energy_certificates(const RotheTrajectory& traj, const LinearParabolicProblem& problem);

struct RandomProblemSpec {
  int n = 16;
  int N = 32;
  double horizon = 1.0;
  double a_lo = 0.5, a_hi = 2.0;
  double b_hi = 1.0;
  double robin_hi = 2.0;
};

/// Homogeneous-data problem with cellwise random coefficients, initial value
/// and step forcing drawn from a generator seeded with `seed`.
LinearParabolicProblem random_homogeneous_problem(const RandomProblemSpec& spec, std::uint64_t seed);

}  // namespace moist
