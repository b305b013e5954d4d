#include "cutlgf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cutlgf {

Grid::Grid(Vec2 origin_, double h_, int nx_, int ny_) : origin(origin_), h(h_), nx(nx_), ny(ny_) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("Grid: h must be positive");
  if (nx < 2 || ny < 2) throw std::invalid_argument("Grid: need at least 2 cells per direction");
}

Grid Grid::square(double lo, double hi, int cells) {
  if (!(hi > lo)) throw std::invalid_argument("Grid::square: empty box");
  return Grid(Vec2(lo, lo), (hi - lo) / cells, cells, cells);
}

// ---------------------------------------------------------------------------
// PolarCurve

Vec2 PolarCurve::point(double theta) const {
  return center + rho(theta) * Vec2(std::cos(theta), std::sin(theta));
}

Vec2 PolarCurve::tangent(double theta) const {
  const Vec2 er(std::cos(theta), std::sin(theta));
  const Vec2 et(-std::sin(theta), std::cos(theta));
  return drho(theta) * er + rho(theta) * et;
}

Vec2 PolarCurve::outward_normal(double theta) const {
  const Vec2 er(std::cos(theta), std::sin(theta));
  const Vec2 et(-std::sin(theta), std::cos(theta));
  const Vec2 n = rho(theta) * er - drho(theta) * et;
  return n.normalized();
}

double PolarCurve::curvature(double theta) const {
  const double r = rho(theta), r1 = drho(theta), r2 = d2rho(theta);
  const double s2 = r * r + r1 * r1;
  return (r * r + 2.0 * r1 * r1 - r * r2) / (s2 * std::sqrt(s2));
}

double PolarCurve::speed(double theta) const {
  return std::hypot(rho(theta), drho(theta));
}

double PolarCurve::angle_of(const Vec2& x) const {
  return std::atan2(x.y() - center.y(), x.x() - center.x());
}

namespace {

LevelSet polar_levelset(std::string name, PolarCurve curve) {
  LevelSet ls;
  ls.name = std::move(name);
  ls.psi = [curve](const Vec2& x) {
    const Vec2 d = x - curve.center;
    return d.norm() - curve.rho(std::atan2(d.y(), d.x()));
  };
  ls.grad = [curve](const Vec2& x) {
    const Vec2 d = x - curve.center;
    const double r = d.norm();
    if (r == 0.0) return Vec2(Vec2::Zero());
    const double theta = std::atan2(d.y(), d.x());
    const Vec2 er = d / r;
    const Vec2 et(-er.y(), er.x());
    return Vec2(er - (curve.drho(theta) / r) * et);
  };
  ls.curve = std::move(curve);
  return ls;
}

}  // namespace

LevelSet circle_levelset(Vec2 center, double radius) {
  PolarCurve c;
  c.center = center;
  c.rho = [radius](double) { return radius; };
  c.drho = [](double) { return 0.0; };
  c.d2rho = [](double) { return 0.0; };
  LevelSet ls = polar_levelset("circle", c);
  // Closed form avoids the atan2 round trip.
  ls.psi = [center, radius](const Vec2& x) { return (x - center).norm() - radius; };
  ls.grad = [center](const Vec2& x) {
    const Vec2 d = x - center;
    const double r = d.norm();
    return r == 0.0 ? Vec2(Vec2::Zero()) : Vec2(d / r);
  };
  return ls;
}

LevelSet shifted_circle_levelset(double beta, double h) {
  LevelSet ls = circle_levelset(Vec2(beta * h, 0.0), 1.0);
  ls.name = "shifted-circle";
  return ls;
}

LevelSet deformed_circle_levelset() {
  PolarCurve c;
  c.rho = [](double t) {
    return 1.0 + 0.16 * std::cos(2 * t + 0.4) + 0.1 * std::sin(3 * t - 0.7) +
           0.07 * std::cos(5 * t + 1.3) + 0.05 * std::sin(8 * t + 0.2);
  };
  c.drho = [](double t) {
    return -0.32 * std::sin(2 * t + 0.4) + 0.3 * std::cos(3 * t - 0.7) -
           0.35 * std::sin(5 * t + 1.3) + 0.4 * std::cos(8 * t + 0.2);
  };
  c.d2rho = [](double t) {
    return -0.64 * std::cos(2 * t + 0.4) - 0.9 * std::sin(3 * t - 0.7) -
           1.75 * std::cos(5 * t + 1.3) - 3.2 * std::sin(8 * t + 0.2);
  };
  return polar_levelset("deformed-circle", c);
}

// ---------------------------------------------------------------------------
// Gridded samples

GriddedSamples read_gridded_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open level-set file: " + path);
  GriddedSamples s;
  double ox = 0, oy = 0;
  if (!(in >> s.nx >> s.ny >> s.h >> ox >> oy))
    throw std::runtime_error("level-set file: malformed header in " + path);
  if (s.nx < 2 || s.ny < 2 || !(s.h > 0))
    throw std::runtime_error("level-set file: invalid header in " + path);
  s.origin = Vec2(ox, oy);
  const std::size_t count = static_cast<std::size_t>(s.nx + 1) * (s.ny + 1);
  s.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!(in >> s.values[k]))
      throw std::runtime_error("level-set file: expected " + std::to_string(count) + " values in " + path);
  }
  return s;
}

void write_gridded_samples(const std::string& path, const GriddedSamples& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write level-set file: " + path);
  out.precision(17);
  out << s.nx << ' ' << s.ny << ' ' << s.h << ' ' << s.origin.x() << ' ' << s.origin.y() << '\n';
  for (int j = 0; j <= s.ny; ++j) {
    for (int i = 0; i <= s.nx; ++i) out << s.values[static_cast<std::size_t>(j) * (s.nx + 1) + i] << ' ';
    out << '\n';
  }
}

LevelSet gridded_levelset(GriddedSamples samples) {
  auto data = std::make_shared<const GriddedSamples>(std::move(samples));
  // Locate the cell and local coordinates, clamped to the sampled box.
  auto locate = [data](const Vec2& x, int& i, int& j, double& s, double& t) {
    const Vec2 u = (x - data->origin) / data->h;
    i = std::clamp(static_cast<int>(std::floor(u.x())), 0, data->nx - 1);
    j = std::clamp(static_cast<int>(std::floor(u.y())), 0, data->ny - 1);
    s = u.x() - i;
    t = u.y() - j;
  };
  auto at = [data](int i, int j) {
    return data->values[static_cast<std::size_t>(j) * (data->nx + 1) + i];
  };
  LevelSet ls;
  ls.name = "gridded";
  ls.psi = [=](const Vec2& x) {
    int i, j;
    double s, t;
    locate(x, i, j, s, t);
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + s * t * at(i + 1, j + 1) +
           (1 - s) * t * at(i, j + 1);
  };
  ls.grad = [=](const Vec2& x) {
    int i, j;
    double s, t;
    locate(x, i, j, s, t);
    const double gx = (1 - t) * (at(i + 1, j) - at(i, j)) + t * (at(i + 1, j + 1) - at(i, j + 1));
    const double gy = (1 - s) * (at(i, j + 1) - at(i, j)) + s * (at(i + 1, j + 1) - at(i + 1, j));
    return Vec2(Vec2(gx, gy) / data->h);
  };
  return ls;
}

double min_gradient_on_curve(const LevelSet& levelset, int count) {
  if (!levelset.curve) return std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count;
    lo = std::min(lo, levelset.grad(levelset.curve->point(theta)).norm());
  }
  return lo;
}

}  // namespace cutlgf
