#include "moist/stencil.hpp"

#include <stdexcept>

namespace moist {

std::size_t DiffusionStencil::ix(int i, int j, int k) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid_.nx + 1) * (j + static_cast<std::size_t>(grid_.ny) * k);
}
std::size_t DiffusionStencil::iy(int i, int j, int k) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid_.nx) * (j + static_cast<std::size_t>(grid_.ny + 1) * k);
}
std::size_t DiffusionStencil::iz(int i, int j, int k) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid_.nx) * (j + static_cast<std::size_t>(grid_.ny) * k);
}

DiffusionStencil::DiffusionStencil(const Grid& g, const StencilSpec& spec) : grid_(g), alpha_(spec.alpha), b_(spec.b) {
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  const double dx = g.dx(), dy = g.dy(), dp = g.dp();
  if (spec.kz.size() != static_cast<std::size_t>(nx) * ny * (nz + 1)) throw std::invalid_argument("stencil: kz size mismatch");
  if (!b_.empty() && b_.size() != g.size()) throw std::invalid_argument("stencil: b size mismatch");
  for (Side s : kAllSides) {
    if (alpha_[s].size() != g.side_face_count(s)) throw std::invalid_argument("stencil: alpha size mismatch");
  }
  if (b_.empty()) b_.assign(g.size(), 0.0);
  inv_volume_ = 1.0 / g.cell_volume();

  gx_.assign(static_cast<std::size_t>(nx + 1) * ny * nz, 0.0);
  gy_.assign(static_cast<std::size_t>(nx) * (ny + 1) * nz, 0.0);
  gz_.assign(static_cast<std::size_t>(nx) * ny * (nz + 1), 0.0);

  const double ax = dy * dp, ay = dx * dp, az = dx * dy;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) gx_[ix(i, j, k)] = spec.kx * ax / dx;
  for (int k = 0; k < nz; ++k)
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) gy_[iy(i, j, k)] = spec.ky * ay / dy;
  for (int k = 1; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) gz_[iz(i, j, k)] = spec.kz[iz(i, j, k)] * az / dp;

  for (Side s : kAllSides) {
    const double h = g.side_spacing(s), area = g.side_face_area(s);
    const auto& al = alpha_[s];
    auto& dw = data_weight_[static_cast<int>(s)];
    dw.resize(al.size());
    for (std::size_t f = 0; f < al.size(); ++f) {
      double K = 0.0;
      std::size_t slot = 0;
      std::vector<double>* target = nullptr;
      switch (s) {
        case Side::XLow:
        case Side::XHigh: {
          const int j = static_cast<int>(f % ny), k = static_cast<int>(f / ny);
          K = spec.kx;
          slot = ix(s == Side::XLow ? 0 : nx, j, k);
          target = &gx_;
          break;
        }
        case Side::YLow:
        case Side::YHigh: {
          const int i = static_cast<int>(f % nx), k = static_cast<int>(f / nx);
          K = spec.ky;
          slot = iy(i, s == Side::YLow ? 0 : ny, k);
          target = &gy_;
          break;
        }
        default: {
          const int i = static_cast<int>(f % nx), j = static_cast<int>(f / nx);
          slot = iz(i, j, s == Side::Top ? 0 : nz);
          K = spec.kz[slot];
          target = &gz_;
          break;
        }
      }
      const double denom = 1.0 + al[f] * h / 2.0;
      dw[f] = K * area / denom;
      (*target)[slot] = K * area * al[f] / denom;
    }
  }

  singular_ = alpha_.all_zero();
  for (double v : b_) {
    if (v != 0.0) singular_ = false;
  }
}

void DiffusionStencil::apply(std::span<const double> x, std::span<double> y, double shift) const {
  const int nx = grid_.nx, ny = grid_.ny, nz = grid_.nz;
  const std::size_t sx = 1, sy = static_cast<std::size_t>(nx), sz = static_cast<std::size_t>(nx) * ny;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = grid_.index(i, j, k);
        const double xc = x[c];
        double flux = 0.0;
        const double gw = gx_[ix(i, j, k)], ge = gx_[ix(i + 1, j, k)];
        flux += gw * (i > 0 ? xc - x[c - sx] : xc);
        flux += ge * (i < nx - 1 ? xc - x[c + sx] : xc);
        const double gs = gy_[iy(i, j, k)], gn = gy_[iy(i, j + 1, k)];
        flux += gs * (j > 0 ? xc - x[c - sy] : xc);
        flux += gn * (j < ny - 1 ? xc - x[c + sy] : xc);
        const double gt = gz_[iz(i, j, k)], gb = gz_[iz(i, j, k + 1)];
        flux += gt * (k > 0 ? xc - x[c - sz] : xc);
        flux += gb * (k < nz - 1 ? xc - x[c + sz] : xc);
        y[c] = (shift + b_[c]) * xc + inv_volume_ * flux;
      }
    }
  }
}

ScalarField DiffusionStencil::apply(const ScalarField& x, double shift) const {
  ScalarField y(grid_);
  apply(x.values(), y.values(), shift);
  return y;
}

std::vector<double> DiffusionStencil::diagonal(double shift) const {
  const int nx = grid_.nx, ny = grid_.ny, nz = grid_.nz;
  std::vector<double> d(grid_.size());
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double sum = gx_[ix(i, j, k)] + gx_[ix(i + 1, j, k)] + gy_[iy(i, j, k)] + gy_[iy(i, j + 1, k)] +
                           gz_[iz(i, j, k)] + gz_[iz(i, j, k + 1)];
        const std::size_t c = grid_.index(i, j, k);
        d[c] = shift + b_[c] + inv_volume_ * sum;
      }
  return d;
}

ScalarField DiffusionStencil::boundary_source(const BoundaryField& data) const {
  ScalarField src(grid_);
  for (Side s : kAllSides) {
    const auto& dv = data[s];
    const auto& dw = data_weight_[static_cast<int>(s)];
    if (dv.size() != dw.size()) throw std::invalid_argument("stencil: boundary data size mismatch");
    for (std::size_t f = 0; f < dv.size(); ++f) src[boundary_cell(grid_, s, f)] += inv_volume_ * dw[f] * dv[f];
  }
  return src;
}

double DiffusionStencil::energy(const ScalarField& u, const ScalarField& v) const {
  const int nx = grid_.nx, ny = grid_.ny, nz = grid_.nz;
  double e = 0.0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const double G = gx_[ix(i, j, k)];
        if (G == 0.0) continue;
        if (i == 0) {
          e += G * u(0, j, k) * v(0, j, k);
        } else if (i == nx) {
          e += G * u(nx - 1, j, k) * v(nx - 1, j, k);
        } else {
          e += G * (u(i, j, k) - u(i - 1, j, k)) * (v(i, j, k) - v(i - 1, j, k));
        }
      }
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double G = gy_[iy(i, j, k)];
        if (G == 0.0) continue;
        if (j == 0) {
          e += G * u(i, 0, k) * v(i, 0, k);
        } else if (j == ny) {
          e += G * u(i, ny - 1, k) * v(i, ny - 1, k);
        } else {
          e += G * (u(i, j, k) - u(i, j - 1, k)) * (v(i, j, k) - v(i, j - 1, k));
        }
      }
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double G = gz_[iz(i, j, k)];
        if (G == 0.0) continue;
        if (k == 0) {
          e += G * u(i, j, 0) * v(i, j, 0);
        } else if (k == nz) {
          e += G * u(i, j, nz - 1) * v(i, j, nz - 1);
        } else {
          e += G * (u(i, j, k) - u(i, j, k - 1)) * (v(i, j, k) - v(i, j, k - 1));
        }
      }
  const double V = grid_.cell_volume();
  for (std::size_t c = 0; c < grid_.size(); ++c) e += V * b_[c] * u[c] * v[c];
  return e;
}

bool DiffusionStencil::singular() const { return singular_; }

double full_gradient_sq(const ScalarField& u) {
  const Grid& g = u.grid();
  const double dp = g.dp();
  double s = horizontal_gradient_sq(u);
  const double az = g.dx() * g.dy() / dp;
  for (int k = 1; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = u(i, j, k) - u(i, j, k - 1);
        s += az * d * d;
      }
  return s;
}

}  // namespace moist
