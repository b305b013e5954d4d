#include "oracles.hpp"

#include "cutlgf/bench.hpp"
#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/errors.hpp"
#include "cutlgf/lgf.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

using namespace cutlgf;

TEST_CASE("free LGF at the origin and its neighbors") {
  CHECK(lgf_eval(0, 0, 0.0) == 0.0);
  CHECK(std::abs(lgf_eval(1, 0, 0.0) + 0.25) < 1e-13);
  CHECK(std::abs(lgf_eval(1, 1, 0.0) + 1.0 / std::numbers::pi) < 1e-13);
  CHECK(std::abs(lgf_eval(0, -1, 0.0) + 0.25) < 1e-13);
}

TEST_CASE("free LGF matches the exact potential-kernel recursion") {
  const oracle::ExactFreeLgf exact(20);
  CHECK(std::abs(exact(2, 0) - (-1.0 + 2.0 / std::numbers::pi)) < 1e-15);
  const LgfTable table = LgfTable::build(20, 0.0);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m) worst = std::max(worst, std::abs(table(m, n) - exact(m, n)));
  CHECK(worst < 1e-12);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(-16, 16);
  for (int k = 0; k < 20; ++k) {
    const int m = pick(rng), n = pick(rng);
    CHECK(std::abs(lgf_eval(m, n, 0.0) - exact(m, n)) < 1e-12);
  }
}

TEST_CASE("screened LGF matches the trapezoid Fourier oracle") {
  for (double sigma : {0.5, 1.0, 4.0}) {
    const oracle::TrapezoidLgf reference(sigma, 128);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(-16, 16);
    for (int k = 0; k < 20; ++k) {
      const int m = pick(rng), n = pick(rng);
      CHECK(std::abs(lgf_eval(m, n, sigma) - reference(m, n)) < 1e-12);
    }
    CHECK(std::abs(lgf_eval(0, 0, sigma) - reference(0, 0)) < 1e-12);
  }
  CHECK(lgf_eval(0, 0, 1.0) > 0.0);
}

TEST_CASE("table satisfies the five-point identity and symmetries") {
  for (double sigma : {0.0, 0.5, 4.0}) {
    const LgfTable t = LgfTable::build(24, sigma);
    double worst = 0.0;
    for (int n = -23; n <= 23; ++n) {
      for (int m = -23; m <= 23; ++m) {
        const double lap = 4 * t(m, n) - t(m + 1, n) - t(m - 1, n) - t(m, n + 1) - t(m, n - 1) + sigma * t(m, n);
        worst = std::max(worst, std::abs(lap - (m == 0 && n == 0 ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-12);
    CHECK(std::abs(t(3, 1) - t(1, 3)) < 1e-14);
    CHECK(t(-3, 2) == t(3, -2));
  }
  const LgfTable t0 = LgfTable::build(2, 0.0);
  CHECK(std::abs(4 * t0(0, 0) - 4 * t0(1, 0) - 1.0) < 1e-13);
}

TEST_CASE("screened decay rate follows the characteristic root") {
  const LgfTable t = LgfTable::build(16, 4.0);
  const double expected = std::exp(std::acosh(3.0));
  double previous = INFINITY;
  for (int m = 2; m <= 12; ++m) {
    const double gap = std::abs(t(m, 0) / t(m + 1, 0) - expected);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.05 * expected);
  CHECK(std::abs(std::acosh(3.0) - 1.76275) < 1e-5);
}

TEST_CASE("window errors") {
  const LgfTable t = LgfTable::build(4, 0.0);
  CHECK_THROWS_AS(t(5, 0), WindowTooSmall);
  CHECK_THROWS_AS(t(0, -5), WindowTooSmall);
  CHECK_NOTHROW(t(4, -4));
}

TEST_CASE("table cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "cutlgf_test_cache";
  std::filesystem::remove_all(dir);
  const LgfTable built = LgfTable::cached(dir.string(), 12, 0.5);
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  const LgfTable again = LgfTable::cached(dir.string(), 10, 0.5);
  CHECK(again.window() >= 10);
  for (int n = 0; n <= 10; ++n)
    for (int m = 0; m <= 10; ++m) CHECK(again(m, n) == built(m, n));
  std::filesystem::remove_all(dir);
}

TEST_CASE("particular solution solves the screened lattice equation") {
  ProblemSpec spec;
  spec.geometry = Geometry::Deformed;
  spec.N = 32;
  spec.sigma_bulk = 2.0;
  const ManufacturedProblem p = manufactured_problem(spec);
  const CutTopology topo = build_topology(p.levelset, p.grid);
  const double h = topo.grid.h;
  const LgfTable table = LgfTable::build(topo.grid.nx + 2, spec.sigma_bulk * h * h);
  const LatticeField up = particular_solution(p.f, topo, table);

  double fmax = 0.0, worst = 0.0;
  int checked = 0;
  for (int j = 1; j < topo.grid.ny; ++j) {
    for (int i = 1; i < topo.grid.nx; ++i) {
      const LatticeIndex v{i, j};
      const VertexClass c = topo.class_of(v);
      const bool source = topo.inside(v) || c == VertexClass::Gamma2 || c == VertexClass::Gamma3;
      if (!source || !up.has(v)) continue;
      bool stencil = true;
      for (auto d : kFivePoint) stencil = stencil && up.has({i + d.i, j + d.j});
      if (!stencil) continue;
      double lap = 4 * up.at(v);
      for (auto d : kFivePoint) lap -= up.at({i + d.i, j + d.j});
      const double fx = p.f(topo.grid.vertex(v));
      fmax = std::max(fmax, std::abs(fx));
      worst = std::max(worst, std::abs(lap / (h * h) + spec.sigma_bulk * up.at(v) - fx));
      ++checked;
    }
  }
  CHECK(checked > 100);
  CHECK(worst < 1e-11 * fmax);
}

TEST_CASE("particular solution of zero data vanishes") {
  const LevelSet ls = circle_levelset(Vec2::Zero(), 1.0);
  const CutTopology topo = build_topology(ls, Grid::square(-1.5, 1.5, 16));
  const LgfTable table = LgfTable::build(20, 0.0);
  const LatticeField up = particular_solution([](const Vec2&) { return 0.0; }, topo, table);
  for (double v : up.values) CHECK(v == 0.0);
}
