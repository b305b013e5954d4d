#include "cutlgf/bench.hpp"

#include "cutlgf/errors.hpp"
#include "cutlgf/layer_ops.hpp"
#include "cutlgf/trace_assembly.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cutlgf {

namespace {

constexpr double kPi = std::numbers::pi;

// Tables are shared between cases with the same sigma h^2.
std::shared_ptr<const LgfTable> shared_table(const std::string& cache_dir, int window, double sigma_h2) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::shared_ptr<const LgfTable>> tables;
  const std::uint64_t key = std::bit_cast<std::uint64_t>(sigma_h2);
  {
    std::lock_guard lock(mutex);
    auto it = tables.find(key);
    if (it != tables.end() && it->second->window() >= window) return it->second;
  }
  auto table = std::make_shared<const LgfTable>(LgfTable::cached(cache_dir, window, sigma_h2));
  std::lock_guard lock(mutex);
  auto& slot = tables[key];
  if (!slot || slot->window() < table->window()) slot = table;
  return slot;
}

ManufacturedProblem circle_problem(const ProblemSpec& spec, double h) {
  if (spec.solution != "default" && spec.solution != "quadratic")
    throw UnknownSolution("solution '" + spec.solution + "' is not available on the circle (use 'quadratic')");
  ManufacturedProblem p;
  const double cx = spec.geometry == Geometry::ShiftedCircle ? spec.beta * h : 0.0;
  p.levelset = spec.geometry == Geometry::ShiftedCircle ? shifted_circle_levelset(spec.beta, h)
                                                        : circle_levelset(Vec2::Zero(), 1.0);
  // u = (x - cx)^2 - y^2 equals cos(2 theta) on the circle, so -Delta_Gamma u = 4 u there.
  auto u = [cx](const Vec2& x) { return (x.x() - cx) * (x.x() - cx) - x.y() * x.y(); };
  p.u = u;
  p.grad_u = [cx](const Vec2& x) { return Vec2(2.0 * (x.x() - cx), -2.0 * x.y()); };
  const double sb = spec.sigma_bulk, ss = spec.sigma_surface;
  p.f = [u, sb](const Vec2& x) { return sb * u(x); };
  p.g = [u, ss](const Vec2& x) { return (4.0 + ss) * u(x); };
  p.bulk_source = sb != 0.0;
  p.mean_zero = true;
  return p;
}

struct TrigSolution {
  static double u(const Vec2& p) {
    const double x = p.x(), y = p.y();
    return std::sin(kPi * x) * std::cos(2 * kPi * y) + 0.25 * std::cos(2 * x + y) + 0.15 * x * y + 0.1 * x;
  }
  static Vec2 grad(const Vec2& p) {
    const double x = p.x(), y = p.y();
    return {kPi * std::cos(kPi * x) * std::cos(2 * kPi * y) - 0.5 * std::sin(2 * x + y) + 0.15 * y + 0.1,
            -2 * kPi * std::sin(kPi * x) * std::sin(2 * kPi * y) - 0.25 * std::sin(2 * x + y) + 0.15 * x};
  }
  static Eigen::Matrix2d hessian(const Vec2& p) {
    const double x = p.x(), y = p.y();
    const double sc = std::sin(kPi * x) * std::cos(2 * kPi * y);
    const double c = std::cos(2 * x + y);
    Eigen::Matrix2d H;
    H(0, 0) = -kPi * kPi * sc - c;
    H(1, 1) = -4 * kPi * kPi * sc - 0.25 * c;
    H(0, 1) = H(1, 0) = -2 * kPi * kPi * std::cos(kPi * x) * std::sin(2 * kPi * y) - 0.5 * c + 0.15;
    return H;
  }
};

ManufacturedProblem deformed_problem(const ProblemSpec& spec) {
  if (spec.solution != "default" && spec.solution != "trigonometric")
    throw UnknownSolution("solution '" + spec.solution + "' is not available on the deformed circle (use 'trigonometric')");
  ManufacturedProblem p;
  p.levelset = deformed_circle_levelset();
  p.u = &TrigSolution::u;
  p.grad_u = &TrigSolution::grad;
  const double sb = spec.sigma_bulk, ss = spec.sigma_surface;
  p.f = [sb](const Vec2& x) { return -TrigSolution::hessian(x).trace() + sb * TrigSolution::u(x); };
  // Surface data at the radial projection onto the exact curve:
  // Delta_Gamma u = Delta u - n^T (D^2 u) n - kappa du/dn.
  const PolarCurve curve = *p.levelset.curve;
  p.g = [curve, ss](const Vec2& x) {
    const double theta = curve.angle_of(x);
    const Vec2 X = curve.point(theta);
    const Vec2 n = curve.outward_normal(theta);
    const Eigen::Matrix2d H = TrigSolution::hessian(X);
    const double lb = H.trace() - n.dot(H * n) - curve.curvature(theta) * n.dot(TrigSolution::grad(X));
    return -lb + ss * TrigSolution::u(X);
  };
  p.bulk_source = true;
  p.mean_zero = false;
  return p;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  std::ostringstream s;
  s << std::setprecision(6) << std::scientific << v;
  return s.str();
}

std::string format_rate(double v) {
  if (std::isnan(v)) return "NaN";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

}  // namespace

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::Circle: return "circle";
    case Geometry::ShiftedCircle: return "shifted-circle";
    case Geometry::Deformed: return "deformed";
  }
  return "?";
}

Geometry parse_geometry(const std::string& text) {
  if (text == "circle") return Geometry::Circle;
  if (text == "shifted-circle") return Geometry::ShiftedCircle;
  if (text == "deformed" || text == "deformed-circle") return Geometry::Deformed;
  throw std::invalid_argument("unknown geometry '" + text + "' (expected circle, shifted-circle or deformed)");
}

void ProblemSpec::validate() const {
  if (N < 4 || (N & (N - 1)) != 0) throw std::invalid_argument("N must be a power of two >= 4");
  if (!(std::abs(beta) <= 1.0)) throw std::invalid_argument("beta must lie in [-1, 1]");
  if (!(sigma_surface >= 0.0) || !(sigma_bulk >= 0.0)) throw std::invalid_argument("sigma values must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

ManufacturedProblem manufactured_problem(const ProblemSpec& spec) {
  const bool deformed = spec.geometry == Geometry::Deformed;
  const double half = spec.half_width > 0.0 ? spec.half_width : (deformed ? 1.5 : 1.2);
  const Grid grid = Grid::square(-half, half, spec.N);
  ManufacturedProblem p = deformed ? deformed_problem(spec) : circle_problem(spec, grid.h);
  p.grid = grid;
  return p;
}

double interface_integral(const CutTopology& topo, const ScalarField& u) {
  double total = 0.0;
  for (const auto& seg : topo.segments)
    for (const auto& q : seg.quad) total += q.weight * u(q.x);
  return total;
}

SurfaceErrors surface_errors(const CutTopology& topo, const Eigen::VectorXd& u_gamma, const ScalarField& u,
                             const VectorField& grad_u) {
  double l2 = 0.0, semi = 0.0;
  for (const auto& seg : topo.segments) {
    for (const auto& q : seg.quad) {
      const double e = u(q.x) - trace_value(topo, seg.cell, u_gamma, q.x);
      const Vec2 ge = grad_u(q.x) - trace_gradient(topo, seg.cell, u_gamma, q.x);
      const Vec2 pge = ge - q.normal.dot(ge) * q.normal;
      l2 += q.weight * e * e;
      semi += q.weight * pge.squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

CaseResult run_case(const ProblemSpec& spec) {
  CaseResult res;
  res.spec = spec;
  const auto start = std::chrono::steady_clock::now();
  try {
    spec.validate();
    const ManufacturedProblem prob = manufactured_problem(spec);
    const Grid& grid = prob.grid;
    const CutTopology topo = build_topology(prob.levelset, grid);
    res.n1 = topo.n1();
    res.n2 = topo.n2();
    res.n3 = topo.n3();

    const double sigma_h2 = spec.sigma_bulk * grid.h * grid.h;
    const auto table = shared_table(spec.lgf_cache, default_window(topo), sigma_h2);

    const SurfaceSystem surface = assemble(topo, prob.g, spec.sigma_surface);
    {
      // Raw stiffness diagonal, without the surface reaction.
      SurfaceSystem raw = assemble(topo, {}, 0.0);
      const Eigen::VectorXd d = raw.K.diagonal();
      res.min_diag_K = d.minCoeff();
      res.max_diag_K = d.maxCoeff();
    }

    Eigen::VectorXd up_gamma;
    LatticeField up;
    if (prob.bulk_source) {
      up = particular_solution(prob.f, topo, *table);
      up_gamma.resize(topo.size());
      for (int k = 0; k < topo.size(); ++k) up_gamma(k) = up.at(topo.vertex_order(k));
    }

    auto blocks = std::make_shared<const LayerBlocks>(build_layer(layer_kind(spec.mode), topo, *table));
    auto extrap = std::make_shared<const Extrapolation>(build_extrapolation(topo));
    ReconstructionMap map = spec.mode == Mode::E ? ReconstructionMap::E(blocks, extrap)
                                                 : ReconstructionMap::F(blocks, extrap);

    res.gauge_target = prob.mean_zero ? 0.0 : interface_integral(topo, prob.u);
    ReducedOptions opts;
    opts.seed = spec.seed;
    const ReducedSystem sys(surface, std::move(map), res.gauge_target, prob.bulk_source ? &up_gamma : nullptr, opts);
    res.alpha = sys.gauge().alpha;

    if (spec.condition) {
      if (sys.dim() <= 4096) {
        res.cond = condition_number_dense(sys.materialize(true));
      } else {
        LanczosOptions lo;
        lo.seed = spec.seed;
        res.cond = condition_number_lanczos([&](const Eigen::VectorXd& v) { return sys.apply(v); }, sys.dim(), lo);
      }
    }

    if (spec.solve) {
      PcgOptions po;
      po.tol = spec.tol;
      po.max_iter = spec.max_iter;
      const SolveReport rep = pcg([&](const Eigen::VectorXd& v) { return sys.apply(v); }, sys.rhs(), po);
      res.iterations = rep.iterations;
      res.converged = rep.converged;
      res.residual_history = rep.residual_history;

      const Eigen::VectorXd q = sys.gauge().active ? sys.enforce_gauge(rep.solution) : rep.solution;
      const Eigen::VectorXd u_gamma = sys.reconstruct(q);
      const SurfaceErrors se = surface_errors(topo, u_gamma, prob.u, prob.grad_u);
      res.e_surf_L2 = se.l2;
      res.e_surf_H1 = se.h1;

      const std::vector<LatticeIndex> interior = topo.interior_vertices();
      const Eigen::VectorXd layer = bulk_evaluate(*blocks, sys.map().density(q), interior, *table);
      double sum = 0.0;
      for (std::size_t k = 0; k < interior.size(); ++k) {
        const double uh = layer(static_cast<Eigen::Index>(k)) + (prob.bulk_source ? up.at(interior[k]) : 0.0);
        const double e = prob.u(grid.vertex(interior[k])) - uh;
        sum += e * e;
      }
      res.e_bulk_L2 = std::sqrt(grid.h * grid.h * sum);
      if (!rep.converged) throw NotConverged("PCG did not reach the tolerance within max_iter");
    }
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

double convergence_rate(double coarse, double fine) { return std::log2(coarse / fine); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool ExperimentReport::all_ok() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.ok; });
}

namespace {

std::map<std::string, std::string> base_metadata(const ProblemSpec& base) {
  std::ostringstream ss, sb, tol;
  ss << base.sigma_surface;
  sb << base.sigma_bulk;
  tol << base.tol;
  return {{"geometry", to_string(base.geometry)},
          {"mode", to_string(base.mode)},
          {"sigma_surface", ss.str()},
          {"sigma_bulk", sb.str()},
          {"tol", tol.str()},
          {"seed", std::to_string(base.seed)},
          {"version", kVersion}};
}

}  // namespace

ExperimentReport run_convergence(const ProblemSpec& base, const std::vector<int>& Ns) {
  ExperimentReport rep;
  rep.metadata = base_metadata(base);
  std::vector<int> sorted = Ns;
  std::sort(sorted.begin(), sorted.end());
  for (int N : sorted) {
    ProblemSpec s = base;
    s.N = N;
    rep.cases.push_back(run_case(s));
  }
  return rep;
}

void write_convergence_csv(std::ostream& out, const ExperimentReport& report) {
  for (const auto& [k, v] : report.metadata) out << "# " << k << '=' << v << '\n';
  out << "N,iter,cond,e_bulk_L2,rate_bulk,e_surf_L2,rate_L2,e_surf_H1,rate_H1\n";
  const CaseResult* prev = nullptr;
  for (const auto& c : report.cases) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto rate = [&](double CaseResult::*field) {
      if (!prev || !prev->ok || !c.ok) return nan;
      return convergence_rate(prev->*field, c.*field);
    };
    if (c.ok) {
      out << c.spec.N << ',' << c.iterations << ',' << format_double(c.cond) << ',' << format_double(c.e_bulk_L2)
          << ',' << format_rate(rate(&CaseResult::e_bulk_L2)) << ',' << format_double(c.e_surf_L2) << ','
          << format_rate(rate(&CaseResult::e_surf_L2)) << ',' << format_double(c.e_surf_H1) << ','
          << format_rate(rate(&CaseResult::e_surf_H1)) << '\n';
    } else {
      out << c.spec.N << ",NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN\n";
      out << "# error N=" << c.spec.N << ": " << c.error << '\n';
    }
    prev = &c;
  }
  out << "# note: cond is the condition number of the gauge-fixed reduced operator; reference values for it are "
         "order-of-magnitude targets (factor 3), not exact-match targets\n";
}

ExperimentReport run_sweep(const ProblemSpec& base, const SweepGrid& grid) {
  ExperimentReport rep;
  rep.metadata = base_metadata(base);
  rep.metadata.erase("sigma_surface");
  rep.metadata.erase("sigma_bulk");
  rep.metadata["geometry"] = to_string(Geometry::ShiftedCircle);
  std::vector<ProblemSpec> specs;
  for (int N : grid.N)
    for (double sb : grid.sigma_bulk)
      for (double ss : grid.sigma_surface)
        for (double beta : grid.beta) {
          ProblemSpec s = base;
          s.geometry = Geometry::ShiftedCircle;
          s.N = N;
          s.sigma_bulk = sb;
          s.sigma_surface = ss;
          s.beta = beta;
          s.solve = false;
          s.condition = true;
          specs.push_back(s);
        }
  rep.cases.resize(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < specs.size(); ++k) rep.cases[k] = run_case(specs[k]);
  return rep;
}

void write_sweep_csv(std::ostream& out, const ExperimentReport& report) {
  for (const auto& [k, v] : report.metadata) out << "# " << k << '=' << v << '\n';
  out << "N,beta,sigma_bulk,sigma_surface,cond,alpha,min_diag_K,max_diag_K\n";
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::vector<const CaseResult*>> groups;
  for (const auto& c : report.cases) {
    const auto& s = c.spec;
    out << s.N << ',' << s.beta << ',' << s.sigma_bulk << ',' << s.sigma_surface << ',';
    if (c.ok) {
      out << format_double(c.cond) << ',' << format_double(c.alpha) << ',' << format_double(c.min_diag_K) << ','
          << format_double(c.max_diag_K) << '\n';
    } else {
      out << "NaN,NaN,NaN,NaN\n# error N=" << s.N << " beta=" << s.beta << ": " << c.error << '\n';
    }
    groups[{s.N, s.sigma_bulk, s.sigma_surface}].push_back(&c);
  }
  for (const auto& [key, cases] : groups) {
    double cmin = INFINITY, cmax = 0, dmin = INFINITY, dmax = 0;
    for (const auto* c : cases) {
      if (!c->ok) continue;
      cmin = std::min(cmin, c->cond);
      cmax = std::max(cmax, c->cond);
      dmin = std::min(dmin, c->min_diag_K);
      dmax = std::max(dmax, c->min_diag_K);
    }
    out << "# summary N=" << std::get<0>(key) << " sigma_bulk=" << std::get<1>(key)
        << " sigma_surface=" << std::get<2>(key) << " cond_min=" << format_double(cmin)
        << " cond_max=" << format_double(cmax) << " cond_ratio=" << format_double(cmax / cmin)
        << " min_diag_K_ratio=" << format_double(dmax / dmin) << '\n';
  }
}

}  // namespace cutlgf
