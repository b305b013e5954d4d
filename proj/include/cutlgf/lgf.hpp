#pragma once

#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cutlgf {

/// Lattice Green's function of the unit-spacing five-point Laplacian,
///
///   -Delta_1 g + sigma_h2 g = delta_0   on Z^2,
///
/// from the single integral over the tangential frequency
///
///   g(m, n) = (1/pi) int_0^pi cos(m t) exp(-|n| a(t)) / (2 sinh a(t)) dt,
///   cosh a(t) = 2 - cos t + sigma_h2 / 2.
///
/// For sigma_h2 = 0 the divergent zero mode is removed by subtracting the
/// integrand at (0, 0), which fixes g(0, 0) = 0 and g ~ -(ln r)/(2 pi) + c.
/// Adaptive Gauss-Kronrod; accurate to ~1e-14 absolute.
double lgf_eval(int m, int n, double sigma_h2);

/// g(m, n) for |m|, |n| <= window, stored once for the quadrant and mirrored.
class LgfTable {
 public:
  LgfTable() = default;

  static LgfTable build(int window, double sigma_h2);

  int window() const { return window_; }
  double sigma_h2() const { return sigma_h2_; }

  /// Throws WindowTooSmall outside the table.
  double operator()(int m, int n) const {
    const int am = m < 0 ? -m : m;
    const int an = n < 0 ? -n : n;
    if (am > window_ || an > window_) throw_outside(m, n);
    return values_[static_cast<std::size_t>(an) * (window_ + 1) + am];
  }
  double operator()(LatticeIndex offset) const { return (*this)(offset.i, offset.j); }

  /// Row n of the quadrant, g(0..window, n); callers must ensure 0 <= n <= window.
  const double* row(int n) const { return values_.data() + static_cast<std::size_t>(n) * (window_ + 1); }

  /// Copy with every value shifted by `c` (a different additive normalization).
  LgfTable shifted(double c) const;

  /// Binary dump: magic, window, sigma_h2, values.
  void save(const std::string& path) const;
  static std::optional<LgfTable> load(const std::string& path);

  /// Table from `cache_dir` when present with a large enough window, otherwise
  /// built and written there. An empty cache_dir disables caching.
  static LgfTable cached(const std::string& cache_dir, int window, double sigma_h2);

 private:
  [[noreturn]] void throw_outside(int m, int n) const;

  int window_ = 0;
  double sigma_h2_ = 0.0;
  std::vector<double> values_;
};

/// Largest lattice offset between active-strip vertices plus 4.
int default_window(const CutTopology& topology);

/// Scalar values on a subset of grid vertices.
struct LatticeField {
  Grid grid;
  std::vector<double> values;  // per grid vertex, 0 where undefined
  std::vector<char> defined;

  double at(LatticeIndex v) const { return values[grid.vertex_id(v)]; }
  bool has(LatticeIndex v) const { return grid.contains(v) && defined[grid.vertex_id(v)]; }
};

using ScalarField = std::function<double(const Vec2&)>;

/// Lattice convolution u(x) = sum_y g((x - y)/h) h^2 f(y) over sources y in the
/// interior {psi <= 0} and gamma2, gamma3. The table's sigma_h2 fixes the bulk
/// reaction: -L_h u + sigma u = f at every source vertex, where
/// L_h = h^-2 Delta_1. Evaluated on the sources and their five-point neighbors.
LatticeField particular_solution(const ScalarField& f, const CutTopology& topology, const LgfTable& table);

}  // namespace cutlgf
