#pragma once

// Spatial operators of the moisture model: weighted diffusion with Robin
// ghost closure, the potential-temperature variant, upwind transport by a
// prescribed velocity and rain sedimentation.

#include <stdexcept>
#include <vector>

#include "moist/grid.hpp"
#include "moist/stencil.hpp"
#include "moist/thermo.hpp"

namespace moist {

/// Face-normal velocities on a staggered layout.
///   u:     (nx+1)*ny*nz,  index i + (nx+1)*(j + ny*k)
///   v:     nx*(ny+1)*nz,  index i + nx*(j + (ny+1)*k)
///   omega: nx*ny*(nz+1),  index i + nx*(j + ny*k), positive toward larger p
struct VelocityField {
  Grid grid;
  std::vector<double> u, v, omega;

  VelocityField() = default;
  explicit VelocityField(const Grid& g);

  double& U(int i, int j, int k) { return u[i + static_cast<std::size_t>(grid.nx + 1) * (j + static_cast<std::size_t>(grid.ny) * k)]; }
  double& V(int i, int j, int k) { return v[i + static_cast<std::size_t>(grid.nx) * (j + static_cast<std::size_t>(grid.ny + 1) * k)]; }
  double& W(int i, int j, int k) { return omega[i + static_cast<std::size_t>(grid.nx) * (j + static_cast<std::size_t>(grid.ny) * k)]; }
  double U(int i, int j, int k) const { return u[i + static_cast<std::size_t>(grid.nx + 1) * (j + static_cast<std::size_t>(grid.ny) * k)]; }
  double V(int i, int j, int k) const { return v[i + static_cast<std::size_t>(grid.nx) * (j + static_cast<std::size_t>(grid.ny + 1) * k)]; }
  double W(int i, int j, int k) const { return omega[i + static_cast<std::size_t>(grid.nx) * (j + static_cast<std::size_t>(grid.ny) * k)]; }

  bool is_zero() const;
  /// Largest |normal component| over all exterior faces.
  double max_boundary_normal() const;
};

class VelocityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws VelocityError unless exterior normals are exactly zero and the
/// discrete divergence is below `div_tol` in max norm.
void validate_velocity(const VelocityField& vel, double div_tol = 1e-12);

/// Flux sum per cell divided by the cell volume.
ScalarField discrete_divergence(const VelocityField& vel);

/// Streamfunction cell in the (x, p) plane; v = 0. Normal components vanish on
/// the boundary and the discrete divergence telescopes to zero.
VelocityField make_convection_cell(const Grid& g, double amplitude);

/// max over cells of dt * (outgoing face flux) / cell volume.
double cfl_number(const VelocityField& vel, double dt);

/// Robin data for one prognostic variable:  d_n q = alpha (b - q)  on each side.
/// The top side (Gamma1) is homogeneous Neumann.
struct RobinBC {
  BoundaryField alpha;
  BoundaryField b;

  static RobinBC uniform(const Grid& g, double alpha0, double b0, double alpha_ll, double b_ll);
  static RobinBC neumann(const Grid& g);
  /// Throws std::invalid_argument on negative entries, size mismatch or nonzero top data.
  void validate(const Grid& g) const;
  /// alpha * b per face, the right-hand side of  d_n q + alpha q = alpha b.
  BoundaryField flux_data() const;
};

/// Ghost value across a face with interior value f_in and spacing h such that
/// the centered difference and face average satisfy  d_n u = alpha (b - u).
double robin_ghost(double f_in, double alpha, double b, double h);
double robin_ghost(const ScalarField& f, const RobinBC& bc, Side s, std::size_t face);

/// Vertical coefficient nu * w^2 per p-face; face weights are the mean of the
/// adjacent level weights, boundary faces take the adjacent level.
std::vector<double> weighted_face_coefficients(const Grid& g, double nu, const WeightProfile& w);

/// Stencil of -(mu Delta_h + nu d_p(w^2 d_p)) with the Robin coefficients of `bc`.
StencilSpec moisture_stencil_spec(const Grid& g, double mu, double nu, const WeightProfile& w, const RobinBC& bc);

/// mu Delta_h f + nu d_p(w^2 d_p f) with ghost-cell boundary closure.
ScalarField apply_diffusion(const ScalarField& f, double mu, double nu, const WeightProfile& w, const RobinBC& bc);

/// mu Delta_h theta + nu (p0/p)^kappa d_p(w^2 d_p((p/p0)^kappa theta)). The
/// boundary data in `bc_T` is expressed in temperature; the conditions are
/// imposed on T = (p/p0)^kappa theta.
ScalarField apply_theta_diffusion(const ScalarField& theta, double mu, double nu, const WeightProfile& w,
                                  const PhysicalParams& params, const RobinBC& bc_T);

/// Per-level (p0_pt/p)^kappa at the cell centers.
std::vector<double> exner_inverse_levels(const Grid& g, const PhysicalParams& params);

/// Upwind flux-form div(vel f). Throws VelocityError on an inadmissible field.
ScalarField advect(const ScalarField& f, const VelocityField& vel);

/// V d_p((p/Tbar) q_r), upwinded along the sign of V. With V > 0 rain moves
/// toward larger p: no flux through Gamma1 and free outflow through Gamma0.
ScalarField apply_sedimentation(const ScalarField& q_r, const PhysicalParams& params, const BackgroundProfile& profile);

/// Net sedimentation flux leaving the domain (integrated over the boundary).
double sedimentation_outflow(const ScalarField& q_r, const PhysicalParams& params, const BackgroundProfile& profile);

}  // namespace moist
