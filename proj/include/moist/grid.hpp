#pragma once

// Cell-centered tensor grid on the cylinder [0,Lx]x[0,Ly]x(p1,p0), scalar
// fields, boundary face storage and the discrete norms used throughout.
//
// Index convention: x fastest, then y, then p. Pressure index 0 sits next to
// the top face (p = p1, Gamma1) and index nz-1 next to the bottom face
// (p = p0, Gamma0).

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace moist {

enum class BoundaryTag { GammaLateral, Gamma0, Gamma1 };

/// The six exterior sides of the box. Top is p = p1, Bottom is p = p0.
enum class Side { XLow = 0, XHigh = 1, YLow = 2, YHigh = 3, Top = 4, Bottom = 5 };

inline constexpr std::array<Side, 6> kAllSides = {Side::XLow, Side::XHigh, Side::YLow,
                                                  Side::YHigh, Side::Top, Side::Bottom};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Grid {
  double Lx = 1.0;
  double Ly = 1.0;
  double p1 = 0.0;
  double p0 = 1.0;
  int nx = 1;
  int ny = 1;
  int nz = 1;

  /// Validating constructor; throws GridError on bad extents or counts.
  static Grid make(double Lx, double Ly, double p1, double p0, int nx, int ny, int nz);

  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  double dp() const { return (p0 - p1) / nz; }
  double cell_volume() const { return dx() * dy() * dp(); }
  double volume() const { return Lx * Ly * (p0 - p1); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * (j + static_cast<std::size_t>(ny) * k);
  }

  double x_center(int i) const { return (i + 0.5) * dx(); }
  double y_center(int j) const { return (j + 0.5) * dy(); }
  double p_center(int k) const { return p1 + (k + 0.5) * dp(); }
  double p_face(int k) const { return p1 + k * dp(); }
  std::vector<double> p_centers() const;

  static BoundaryTag tag(Side s);

  /// Number of cell faces lying on a given side.
  std::size_t side_face_count(Side s) const;
  std::size_t exterior_face_count() const;
  /// Area of a single face on the given side.
  double side_face_area(Side s) const;
  /// Distance between the cell center adjacent to a face on this side and its mirror ghost.
  double side_spacing(Side s) const;

  bool operator==(const Grid&) const = default;
};

/// Per-face values on every exterior side. Layout per side:
/// x-sides j + ny*k, y-sides i + nx*k, p-sides i + nx*j.
struct BoundaryField {
  std::array<std::vector<double>, 6> side;

  BoundaryField() = default;
  BoundaryField(const Grid& g, double value);

  std::vector<double>& operator[](Side s) { return side[static_cast<int>(s)]; }
  const std::vector<double>& operator[](Side s) const { return side[static_cast<int>(s)]; }

  double max_value() const;
  double min_value() const;
  bool all_zero() const;
};

/// Cell index and face slot of the interior cell adjacent to boundary face `f` on side `s`.
std::size_t boundary_cell(const Grid& g, Side s, std::size_t f);

/// Center coordinates (x, y, p) of boundary face `f` on side `s`.
std::array<double, 3> boundary_face_center(const Grid& g, Side s, std::size_t f);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0) : grid_(g), values_(g.size(), value) {}
  ScalarField(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  double min() const;
  double max() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// g*p/(R*Tbar(p)) per pressure level.
struct WeightProfile {
  std::vector<double> w;

  double w_min() const;
  double w_max() const;
};

double integrate(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double l2_norm(const ScalarField& f);
double linf_norm(const ScalarField& f);
/// Discrete L^m norm; throws std::invalid_argument for m < 1.
double lm_norm(const ScalarField& f, double m);

/// ||w * g_p||_{L2}, where g_p is a vertical-derivative field and w is
/// collocated with its pressure levels.
double weighted_vertical_seminorm(const ScalarField& g_p, const WeightProfile& w);

/// Cell-centered d/dp (central inside, one-sided at the top and bottom layers).
ScalarField vertical_derivative(const ScalarField& f);

/// Sum over interior faces of area/h * (jump)^2 for the horizontal directions
/// only, i.e. the discrete ||grad_h f||^2.
double horizontal_gradient_sq(const ScalarField& f);

/// Discrete ||grad_h f||^2 + ||d_p f||_w^2 using interior face differences,
/// the face weight being the mean of the adjacent level weights.
double h1w_seminorm_sq(const ScalarField& f, const WeightProfile& w);

/// Snapshot format: header `nx ny nz Lx Ly p1 p0`, then the values in
/// x-fastest order with round-trip precision.
void write_field(std::ostream& os, const ScalarField& f);
ScalarField read_field(std::istream& is);
void write_field_file(const std::string& path, const ScalarField& f);
ScalarField read_field_file(const std::string& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace moist
