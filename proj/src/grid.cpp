#include "moist/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace moist {

Grid Grid::make(double Lx, double Ly, double p1, double p0, int nx, int ny, int nz) {
  if (!(Lx > 0.0) || !(Ly > 0.0) || !std::isfinite(Lx) || !std::isfinite(Ly)) {
    throw GridError("grid: horizontal extents must be positive and finite");
  }
  if (!(p1 < p0) || !std::isfinite(p1) || !std::isfinite(p0)) {
    throw GridError("grid: pressure bounds must satisfy p1 < p0");
  }
  if (nx < 1 || ny < 1 || nz < 1) {
    throw GridError("grid: cell counts must be at least 1");
  }
  Grid g{Lx, Ly, p1, p0, nx, ny, nz};
  if (!(g.dx() > 0.0) || !(g.dy() > 0.0) || !(g.dp() > 0.0)) {
    throw GridError("grid: spacings underflow to zero");
  }
  return g;
}

std::vector<double> Grid::p_centers() const {
  std::vector<double> p(nz);
  for (int k = 0; k < nz; ++k) p[k] = p_center(k);
  return p;
}

BoundaryTag Grid::tag(Side s) {
  switch (s) {
    case Side::Top:
      return BoundaryTag::Gamma1;
    case Side::Bottom:
      return BoundaryTag::Gamma0;
    default:
      return BoundaryTag::GammaLateral;
  }
}

std::size_t Grid::side_face_count(Side s) const {
  switch (s) {
    case Side::XLow:
    case Side::XHigh:
      return static_cast<std::size_t>(ny) * nz;
    case Side::YLow:
    case Side::YHigh:
      return static_cast<std::size_t>(nx) * nz;
    default:
      return static_cast<std::size_t>(nx) * ny;
  }
}

std::size_t Grid::exterior_face_count() const {
  std::size_t n = 0;
  for (Side s : kAllSides) n += side_face_count(s);
  return n;
}

double Grid::side_face_area(Side s) const {
  switch (s) {
    case Side::XLow:
    case Side::XHigh:
      return dy() * dp();
    case Side::YLow:
    case Side::YHigh:
      return dx() * dp();
    default:
      return dx() * dy();
  }
}

double Grid::side_spacing(Side s) const {
  switch (s) {
    case Side::XLow:
    case Side::XHigh:
      return dx();
    case Side::YLow:
    case Side::YHigh:
      return dy();
    default:
      return dp();
  }
}

BoundaryField::BoundaryField(const Grid& g, double value) {
  for (Side s : kAllSides) (*this)[s].assign(g.side_face_count(s), value);
}

double BoundaryField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : side)
    for (double x : v) m = std::max(m, x);
  return m;
}

double BoundaryField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : side)
    for (double x : v) m = std::min(m, x);
  return m;
}

bool BoundaryField::all_zero() const {
  for (const auto& v : side)
    for (double x : v)
      if (x != 0.0) return false;
  return true;
}

std::size_t boundary_cell(const Grid& g, Side s, std::size_t f) {
  const int nx = g.nx, ny = g.ny;
  switch (s) {
    case Side::XLow:
    case Side::XHigh: {
      const int j = static_cast<int>(f % ny), k = static_cast<int>(f / ny);
      return g.index(s == Side::XLow ? 0 : nx - 1, j, k);
    }
    case Side::YLow:
    case Side::YHigh: {
      const int i = static_cast<int>(f % nx), k = static_cast<int>(f / nx);
      return g.index(i, s == Side::YLow ? 0 : ny - 1, k);
    }
    default: {
      const int i = static_cast<int>(f % nx), j = static_cast<int>(f / nx);
      return g.index(i, j, s == Side::Top ? 0 : g.nz - 1);
    }
  }
}

std::array<double, 3> boundary_face_center(const Grid& g, Side s, std::size_t f) {
  switch (s) {
    case Side::XLow:
    case Side::XHigh: {
      const int j = static_cast<int>(f % g.ny), k = static_cast<int>(f / g.ny);
      return {s == Side::XLow ? 0.0 : g.Lx, g.y_center(j), g.p_center(k)};
    }
    case Side::YLow:
    case Side::YHigh: {
      const int i = static_cast<int>(f % g.nx), k = static_cast<int>(f / g.nx);
      return {g.x_center(i), s == Side::YLow ? 0.0 : g.Ly, g.p_center(k)};
    }
    default: {
      const int i = static_cast<int>(f % g.nx), j = static_cast<int>(f / g.nx);
      return {g.x_center(i), g.y_center(j), s == Side::Top ? g.p1 : g.p0};
    }
  }
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.size()) throw GridError("field: value count does not match grid");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (o.size() != size()) throw GridError("field: size mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (o.size() != size()) throw GridError("field: size mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double WeightProfile::w_min() const { return *std::min_element(w.begin(), w.end()); }
double WeightProfile::w_max() const { return *std::max_element(w.begin(), w.end()); }

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (f.size() != g.size()) throw GridError("inner: size mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) s += f[n] * g[n];
  return s * f.grid().cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double linf_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double lm_norm(const ScalarField& f, double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("lm_norm: exponent must be >= 1");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), m);
  return std::pow(s * f.grid().cell_volume(), 1.0 / m);
}

double weighted_vertical_seminorm(const ScalarField& g_p, const WeightProfile& w) {
  const Grid& g = g_p.grid();
  if (static_cast<int>(w.w.size()) != g.nz) {
    throw std::invalid_argument("weighted_vertical_seminorm: weight has " + std::to_string(w.w.size()) +
                                " levels, field has " + std::to_string(g.nz));
  }
  double s = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double v = w.w[k] * g_p(i, j, k);
        s += v * v;
      }
  return std::sqrt(s * g.cell_volume());
}

ScalarField vertical_derivative(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField d(g, 0.0);
  if (g.nz < 2) return d;
  const double dp = g.dp();
  for (int k = 0; k < g.nz; ++k) {
    const int lo = std::max(k - 1, 0), hi = std::min(k + 1, g.nz - 1);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) d(i, j, k) = (f(i, j, hi) - f(i, j, lo)) / ((hi - lo) * dp);
  }
  return d;
}

double horizontal_gradient_sq(const ScalarField& f) {
  const Grid& g = f.grid();
  const double ax = g.dy() * g.dp() / g.dx();
  const double ay = g.dx() * g.dp() / g.dy();
  double s = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (i + 1 < g.nx) {
          const double d = f(i + 1, j, k) - f(i, j, k);
          s += ax * d * d;
        }
        if (j + 1 < g.ny) {
          const double d = f(i, j + 1, k) - f(i, j, k);
          s += ay * d * d;
        }
      }
  return s;
}

double h1w_seminorm_sq(const ScalarField& f, const WeightProfile& w) {
  const Grid& g = f.grid();
  if (static_cast<int>(w.w.size()) != g.nz) throw std::invalid_argument("h1w_seminorm_sq: level mismatch");
  const double az = g.dx() * g.dy() / g.dp();
  double s = horizontal_gradient_sq(f);
  for (int k = 0; k + 1 < g.nz; ++k) {
    const double wf = 0.5 * (w.w[k] + w.w[k + 1]);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = f(i, j, k + 1) - f(i, j, k);
        s += az * wf * wf * d * d;
      }
  }
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_field(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << g.nx << ' ' << g.ny << ' ' << g.nz << ' ' << format_double(g.Lx) << ' ' << format_double(g.Ly) << ' '
     << format_double(g.p1) << ' ' << format_double(g.p0) << '\n';
  std::size_t n = 0;
  for (double v : f.values()) {
    os << format_double(v);
    os << ((++n % static_cast<std::size_t>(g.nx) == 0) ? '\n' : ' ');
  }
}

namespace {

double parse_double_token(const std::string& tok) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw std::runtime_error("field file: malformed number '" + tok + "'");
  }
  return v;
}

}  // namespace

ScalarField read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("field file: missing header");
  std::istringstream hs(header);
  int nx = 0, ny = 0, nz = 0;
  std::string sLx, sLy, sp1, sp0, extra;
  if (!(hs >> nx >> ny >> nz >> sLx >> sLy >> sp1 >> sp0) || (hs >> extra)) {
    throw std::runtime_error("field file: header must be 'nx ny nz Lx Ly p1 p0'");
  }
  const Grid g = Grid::make(parse_double_token(sLx), parse_double_token(sLy), parse_double_token(sp1),
                            parse_double_token(sp0), nx, ny, nz);
  std::vector<double> values;
  values.reserve(g.size());
  std::string tok;
  while (is >> tok) values.push_back(parse_double_token(tok));
  if (values.size() != g.size()) {
    throw std::runtime_error("field file: expected " + std::to_string(g.size()) + " values, found " +
                             std::to_string(values.size()));
  }
  return ScalarField(g, std::move(values));
}

void write_field_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_field(os, f);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

ScalarField read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_field(is);
}

}  // namespace moist
