#pragma once

#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/geometry.hpp"
#include "cutlgf/krylov.hpp"
#include "cutlgf/lgf.hpp"
#include "cutlgf/reduction.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace cutlgf {

inline constexpr const char* kVersion = "1.0.0";

enum class Geometry { Circle, ShiftedCircle, Deformed };

std::string to_string(Geometry geometry);
Geometry parse_geometry(const std::string& text);

struct ProblemSpec {
  Geometry geometry = Geometry::Circle;
  double beta = 0.0;               // shifted circle: center (beta h, 0)
  std::string solution = "default";
  double sigma_surface = 0.0;
  double sigma_bulk = 0.0;
  Mode mode = Mode::FSingle;
  int N = 128;                     // cells per side
  double half_width = 0.0;         // box [-a, a]^2; 0 picks 1.2 (circles) or 1.5 (deformed)
  double tol = 1e-10;
  int max_iter = 2000;
  bool solve = true;               // run PCG and measure errors
  bool condition = true;           // condition number of the gauge-fixed operator
  std::string lgf_cache;           // directory, empty for no caching
  std::uint64_t seed = 20240521;

  /// Throws std::invalid_argument on N not a power of two, |beta| > 1 or negative sigmas.
  void validate() const;
};

using VectorField = std::function<Vec2(const Vec2&)>;

struct ManufacturedProblem {
  LevelSet levelset;
  Grid grid;
  ScalarField u;
  VectorField grad_u;
  ScalarField f;   // bulk source, -Delta u + sigma_bulk u
  ScalarField g;   // surface source, -Delta_Gamma u + sigma_surface u
  bool bulk_source = false;  // f is not identically zero
  bool mean_zero = true;     // gauge target 0 instead of the exact mean
};

/// Throws UnknownSolution for a solution name the geometry does not provide.
ManufacturedProblem manufactured_problem(const ProblemSpec& spec);

/// int_{Gamma_h} u ds_h with the segment quadrature.
double interface_integral(const CutTopology& topology, const ScalarField& u);

struct SurfaceErrors {
  double l2 = 0.0;
  double h1 = 0.0;  // full norm: sqrt(L2^2 + |P grad e|^2)
};

/// Errors of the Q1 trace u_gamma against the ambient exact u on Gamma_h.
SurfaceErrors surface_errors(const CutTopology& topology, const Eigen::VectorXd& u_gamma, const ScalarField& u,
                             const VectorField& grad_u);

struct CaseResult {
  ProblemSpec spec;
  bool ok = false;
  std::string error;
  int n1 = 0, n2 = 0, n3 = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  double cond = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.0;
  double gauge_target = 0.0;
  double e_bulk_L2 = std::numeric_limits<double>::quiet_NaN();
  double e_surf_L2 = std::numeric_limits<double>::quiet_NaN();
  double e_surf_H1 = std::numeric_limits<double>::quiet_NaN();
  double min_diag_K = 0.0;
  double max_diag_K = 0.0;
  double seconds = 0.0;
};

/// Full pipeline for one mesh. Never throws for stage failures; they are
/// recorded in `error` with ok = false.
CaseResult run_case(const ProblemSpec& spec);

/// log2(e_coarse / e_fine).
double convergence_rate(double coarse, double fine);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentReport {
  std::map<std::string, std::string> metadata;
  std::vector<CaseResult> cases;
  bool all_ok() const;
};

/// One case per N (ascending), sharing everything else with `base`.
ExperimentReport run_convergence(const ProblemSpec& base, const std::vector<int>& Ns);

/// Columns N, iter, cond, e_bulk_L2, rate_bulk, e_surf_L2, rate_L2, e_surf_H1, rate_H1.
void write_convergence_csv(std::ostream& out, const ExperimentReport& report);

struct SweepGrid {
  std::vector<double> beta;
  std::vector<double> sigma_bulk;
  std::vector<double> sigma_surface;
  std::vector<int> N;
};

/// Condition numbers over every (N, sigma_bulk, sigma_surface, beta); no solve.
ExperimentReport run_sweep(const ProblemSpec& base, const SweepGrid& grid);

/// Columns N, beta, sigma_bulk, sigma_surface, cond, alpha, min_diag_K, max_diag_K,
/// followed by per-(N, sigma) summary comment lines.
void write_sweep_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace cutlgf
