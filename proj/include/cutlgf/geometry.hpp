#pragma once

#include <Eigen/Core>

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cutlgf {

using Vec2 = Eigen::Vector2d;

/// Integer lattice coordinates of a grid vertex (or the lower-left vertex of a cell).
struct LatticeIndex {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

using CellIndex = LatticeIndex;

/// Uniform Cartesian background grid; vertex(i, j) = origin + (i h, j h).
struct Grid {
  Vec2 origin = Vec2::Zero();
  double h = 1.0;
  int nx = 2;
  int ny = 2;

  Grid() = default;
  Grid(Vec2 origin_, double h_, int nx_, int ny_);

  /// The square [lo, hi]^2 split into `cells` cells per side.
  static Grid square(double lo, double hi, int cells);

  Vec2 vertex(int i, int j) const { return origin + h * Vec2(i, j); }
  Vec2 vertex(LatticeIndex v) const { return vertex(v.i, v.j); }
  int vertex_id(LatticeIndex v) const { return v.j * (nx + 1) + v.i; }
  LatticeIndex vertex_at(int id) const { return {id % (nx + 1), id / (nx + 1)}; }
  int num_vertices() const { return (nx + 1) * (ny + 1); }
  bool contains(LatticeIndex v) const { return v.i >= 0 && v.j >= 0 && v.i <= nx && v.j <= ny; }
};

/// Star-shaped closed curve r = rho(theta) around `center`.
struct PolarCurve {
  Vec2 center = Vec2::Zero();
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> d2rho;

  Vec2 point(double theta) const;
  /// dX/dtheta.
  Vec2 tangent(double theta) const;
  Vec2 outward_normal(double theta) const;
  /// Signed curvature, positive for convex arcs (div of the outward normal).
  double curvature(double theta) const;
  /// |dX/dtheta|.
  double speed(double theta) const;
  /// Polar angle of x about the center.
  double angle_of(const Vec2& x) const;
};

/// Signed level set, negative inside the domain.
struct LevelSet {
  std::string name;
  std::function<double(const Vec2&)> psi;
  std::function<Vec2(const Vec2&)> grad;
  std::optional<PolarCurve> curve;
};

LevelSet circle_levelset(Vec2 center, double radius);

/// Unit circle centred at (beta h, 0).
LevelSet shifted_circle_levelset(double beta, double h);

/// The five-mode perturbation of the unit circle used in the deformed benchmark.
LevelSet deformed_circle_levelset();

/// Samples of psi on a uniform grid (row-major, j outer).
struct GriddedSamples {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  Vec2 origin = Vec2::Zero();
  std::vector<double> values;  // (nx + 1) * (ny + 1)
};

/// Plain-text format: header "nx ny h ox oy" then (nx+1)(ny+1) values, row-major.
GriddedSamples read_gridded_samples(const std::string& path);
void write_gridded_samples(const std::string& path, const GriddedSamples& samples);

/// Bilinear interpolant of gridded samples.
LevelSet gridded_levelset(GriddedSamples samples);

/// Minimum |grad psi| over `count` points sampled on the zero set of a curve-backed level set.
double min_gradient_on_curve(const LevelSet& levelset, int count);

}  // namespace cutlgf
