#include "oracles.hpp"

#include "cutlgf/bench.hpp"
#include "cutlgf/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace cutlgf;

namespace {

constexpr double kPi = std::numbers::pi;

// Sixth-order central first derivative.
template <class F>
auto d1(const F& f, double t, double step) {
  return (-f(t - 3 * step) + 9.0 * f(t - 2 * step) - 45.0 * f(t - step) + 45.0 * f(t + step) - 9.0 * f(t + 2 * step) +
          f(t + 3 * step)) /
         (60.0 * step);
}

Vec2 deformed_point(double t) {
  const double r = 1.0 + 0.16 * std::cos(2 * t + 0.4) + 0.1 * std::sin(3 * t - 0.7) + 0.07 * std::cos(5 * t + 1.3) +
                   0.05 * std::sin(8 * t + 0.2);
  return r * Vec2(std::cos(t), std::sin(t));
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("circle manufactured data") {
  ProblemSpec spec;
  spec.geometry = Geometry::Circle;
  const ManufacturedProblem p = manufactured_problem(spec);
  CHECK(p.g(Vec2(1.0, 0.0)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(p.g(Vec2(0.0, 1.0)) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK_FALSE(p.bulk_source);
  CHECK(p.mean_zero);
  // -u'' = 4 cos(2 theta) along the unit circle.
  for (double t : {0.1, 0.9, 2.3, 4.0}) {
    const auto along = [&](double s) { return p.u(Vec2(std::cos(s), std::sin(s))); };
    const double second = d1([&](double s) { return d1(along, s, 1e-3); }, t, 1e-3);
    CHECK(std::abs(-second - p.g(Vec2(std::cos(t), std::sin(t)))) < 1e-8);
  }
  // The centered Gamma_h inherits the symmetries of the circle, so g integrates to 0 on it.
  for (int N : {64, 128, 256}) {
    spec.N = N;
    const ManufacturedProblem q = manufactured_problem(spec);
    const CutTopology topo = build_topology(q.levelset, q.grid);
    CHECK(std::abs(interface_integral(topo, q.g)) < 1e-12);
    CHECK(interface_integral(topo, [](const Vec2&) { return 1.0; }) == doctest::Approx(2.0 * kPi).epsilon(1e-2));
  }
  ProblemSpec screened = spec;
  screened.sigma_surface = 3.0;
  screened.sigma_bulk = 2.0;
  const ManufacturedProblem s = manufactured_problem(screened);
  CHECK(s.g(Vec2(1.0, 0.0)) == doctest::Approx(7.0));
  CHECK(s.f(Vec2(1.0, 0.0)) == doctest::Approx(2.0));
  CHECK(s.bulk_source);
}

TEST_CASE("deformed surface data satisfies the surface equation") {
  ProblemSpec spec;
  spec.geometry = Geometry::Deformed;
  spec.sigma_surface = 0.7;
  const ManufacturedProblem p = manufactured_problem(spec);
  CHECK_FALSE(p.mean_zero);
  const double step = 2e-3;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = 2.0 * kPi * (k + 0.37) / 100.0;
    const auto speed = [&](double s) { return d1([](double r) { return deformed_point(r); }, s, step).norm(); };
    // Delta_Gamma u = (1/|X'|) d/dt ((1/|X'|) d/dt u(X(t))).
    const auto tangential = [&](double s) { return d1([&](double r) { return p.u(deformed_point(r)); }, s, step) / speed(s); };
    const double lb = d1(tangential, t, step) / speed(t);
    const Vec2 X = deformed_point(t);
    worst = std::max(worst, std::abs(-lb + 0.7 * p.u(X) - p.g(X)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("deformed bulk source") {
  ProblemSpec spec;
  spec.geometry = Geometry::Deformed;
  spec.sigma_bulk = 1.5;
  const ManufacturedProblem p = manufactured_problem(spec);
  const double e = 1e-3;
  for (const Vec2 x : {Vec2(0.1, 0.2), Vec2(-0.5, 0.3), Vec2(0.7, -0.6)}) {
    const double lap = d1([&](double s) { return d1([&](double r) { return p.u(Vec2(r, x.y())); }, s, e); }, x.x(), e) +
                       d1([&](double s) { return d1([&](double r) { return p.u(Vec2(x.x(), r)); }, s, e); }, x.y(), e);
    CHECK(std::abs(-lap + 1.5 * p.u(x) - p.f(x)) < 1e-7);
    const Vec2 g(d1([&](double r) { return p.u(Vec2(r, x.y())); }, x.x(), e),
                 d1([&](double r) { return p.u(Vec2(x.x(), r)); }, x.y(), e));
    CHECK((g - p.grad_u(x)).norm() < 1e-10);
  }
}

TEST_CASE("problem validation") {
  ProblemSpec spec;
  spec.solution = "cubic";
  CHECK_THROWS_AS(manufactured_problem(spec), UnknownSolution);
  spec.geometry = Geometry::Deformed;
  spec.solution = "quadratic";
  CHECK_THROWS_AS(manufactured_problem(spec), UnknownSolution);
  const CaseResult r = run_case(spec);
  CHECK_FALSE(r.ok);
  CHECK(r.error.find("quadratic") != std::string::npos);

  ProblemSpec bad;
  bad.N = 100;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.N = 128;
  bad.beta = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.beta = 0.0;
  bad.sigma_bulk = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(parse_geometry("deformed") == Geometry::Deformed);
  CHECK_THROWS_AS(parse_geometry("square"), std::invalid_argument);
  CHECK(parse_mode(to_string(Mode::FDouble)) == Mode::FDouble);
}

TEST_CASE("surface errors of exact data") {
  ProblemSpec spec;
  spec.N = 64;
  const ManufacturedProblem p = manufactured_problem(spec);
  const CutTopology topo = build_topology(p.levelset, p.grid);
  Eigen::VectorXd exact(topo.size());
  for (int g = 0; g < topo.size(); ++g) exact(g) = p.u(topo.grid.vertex(topo.vertex_order(g)));
  const SurfaceErrors e = surface_errors(topo, exact, p.u, p.grad_u);
  CHECK(e.l2 < 1e-2);
  CHECK(e.h1 >= e.l2);
  const SurfaceErrors shifted = surface_errors(topo, (exact.array() + 0.5).matrix(), p.u, p.grad_u);
  CHECK(shifted.l2 == doctest::Approx(0.5 * std::sqrt(topo.interface_length())).epsilon(0.05));
}

TEST_CASE("rates and slopes") {
  CHECK(convergence_rate(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
  CHECK(oracle::fitted_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("convergence csv") {
  ProblemSpec base;
  base.geometry = Geometry::Circle;
  const ExperimentReport rep = run_convergence(base, {8, 32, 64});
  std::ostringstream out;
  write_convergence_csv(out, rep);
  const std::string csv = out.str();
  CHECK(csv.find("# mode=F-single") != std::string::npos);
  CHECK(csv.find("# error N=8") != std::string::npos);
  const auto lines = data_lines(csv);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "N,iter,cond,e_bulk_L2,rate_bulk,e_surf_L2,rate_L2,e_surf_H1,rate_H1");
  CHECK(lines[1] == "8,NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN");
  const auto first = split(lines[2]), second = split(lines[3]);
  REQUIRE(first.size() == 9);
  REQUIRE(second.size() == 9);
  CHECK(first[4] == "NaN");
  CHECK(first[6] == "NaN");
  // Rates follow from the printed error columns alone.
  for (int col : {3, 5, 7}) {
    const double rate = std::log2(std::stod(first[col]) / std::stod(second[col]));
    CHECK(std::abs(rate - std::stod(second[col + 1])) <= 1e-3);
  }
  CHECK_FALSE(rep.all_ok());

  const ExperimentReport again = run_convergence(base, {8, 32, 64});
  std::ostringstream out2;
  write_convergence_csv(out2, again);
  CHECK(out2.str() == csv);
}

TEST_CASE("sweep csv") {
  ProblemSpec base;
  SweepGrid grid;
  grid.beta = {-1.0, 0.0, 0.5};
  grid.sigma_bulk = {0.0};
  grid.sigma_surface = {0.0, 1.0};
  grid.N = {64};
  const ExperimentReport rep = run_sweep(base, grid);
  CHECK(rep.all_ok());
  REQUIRE(rep.cases.size() == 6);
  for (const auto& c : rep.cases) {
    CHECK(c.cond > 1.0);
    CHECK(c.min_diag_K > 0.0);
    CHECK(c.min_diag_K <= c.max_diag_K);
    CHECK(c.residual_history.empty());
  }
  std::ostringstream out;
  write_sweep_csv(out, rep);
  const auto lines = data_lines(out.str());
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "N,beta,sigma_bulk,sigma_surface,cond,alpha,min_diag_K,max_diag_K");
  CHECK(out.str().find("# summary N=64 sigma_bulk=0 sigma_surface=1") != std::string::npos);
}

TEST_CASE("modes give the same discrete solution") {
  std::vector<CaseResult> runs;
  for (Mode mode : {Mode::E, Mode::FSingle}) {
    ProblemSpec spec;
    spec.geometry = Geometry::Deformed;
    spec.N = 64;
    spec.mode = mode;
    spec.condition = false;
    runs.push_back(run_case(spec));
    REQUIRE(runs.back().ok);
    CHECK(runs.back().converged);
  }
  CHECK(runs[0].e_surf_L2 == doctest::Approx(runs[1].e_surf_L2).epsilon(1e-6));
  CHECK(runs[0].e_bulk_L2 == doctest::Approx(runs[1].e_bulk_L2).epsilon(1e-6));
  CHECK(runs[0].gauge_target == runs[1].gauge_target);
  CHECK(runs[0].gauge_target != 0.0);
}
