#pragma once

// Assembled seven-point diffusion stencil with Robin closure on every side:
//
//   (L u)_i = b_i u_i + (1/V) * sum_faces G_f (u_i - u_nb)        interior faces
//                     + (1/V) * sum_bfaces G_f u_i                 boundary faces
//
// Interior conductance G = K A / h. For a boundary face carrying the
// condition  d_n u + alpha u = data  the ghost-cell closure gives
// G = K A alpha / (1 + alpha h / 2) and a source K A data / (1 + alpha h / 2).
// L is symmetric positive semidefinite in the cell-volume inner product.

#include <array>
#include <span>
#include <vector>

#include "moist/grid.hpp"

namespace moist {

struct StencilSpec {
  double kx = 1.0;  // horizontal coefficients, uniform
  double ky = 1.0;
  /// Vertical coefficient on every p-face including the two boundary layers,
  /// index i + nx*(j + ny*kf) with kf in [0, nz].
  std::vector<double> kz;
  /// Robin coefficient per boundary face, in the form d_n u + alpha u = data.
  BoundaryField alpha;
  /// Zeroth-order coefficient per cell; empty means zero.
  std::vector<double> b;
};

class DiffusionStencil {
 public:
  DiffusionStencil(const Grid& g, const StencilSpec& spec);

  const Grid& grid() const { return grid_; }

  /// y = shift * x + L x (homogeneous boundary data).
  void apply(std::span<const double> x, std::span<double> y, double shift = 0.0) const;
  ScalarField apply(const ScalarField& x, double shift = 0.0) const;

  /// Diagonal of shift * I + L.
  std::vector<double> diagonal(double shift = 0.0) const;

  /// Cell-wise right-hand side generated by boundary data (per unit volume).
  ScalarField boundary_source(const BoundaryField& data) const;

  /// (L u, v) as a sum over faces; symmetric by construction.
  double energy(const ScalarField& u, const ScalarField& v) const;

  /// True if L has a nontrivial kernel (no zeroth-order term and all alpha zero).
  bool singular() const;

 private:
  Grid grid_;
  double inv_volume_;
  std::vector<double> gx_;  // (nx+1)*ny*nz
  std::vector<double> gy_;  // nx*(ny+1)*nz
  std::vector<double> gz_;  // nx*ny*(nz+1)
  std::array<std::vector<double>, 6> data_weight_;  // K A / (1 + alpha h / 2) per boundary face
  BoundaryField alpha_;
  std::vector<double> b_;
  bool singular_;

  std::size_t ix(int i, int j, int k) const;  // x-face index, i in [0,nx]
  std::size_t iy(int i, int j, int k) const;  // y-face index, j in [0,ny]
  std::size_t iz(int i, int j, int k) const;  // p-face index, k in [0,nz]
};

/// Sum over all interior faces (x, y and p) of area/h * jump^2: the discrete ||grad u||^2.
double full_gradient_sq(const ScalarField& u);

}  // namespace moist
