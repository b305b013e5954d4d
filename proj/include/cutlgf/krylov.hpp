#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace cutlgf {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // relative residuals, entry 0 is the initial one
  bool converged = false;
  double final_residual = 0.0;  // true relative residual ||b - A x|| / ||b||
  Eigen::VectorXd solution;
};

struct PcgOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  /// Optional preconditioner z = P r; identity when empty.
  LinearOperator preconditioner;
};

/// Conjugate gradients from x0 = 0. Throws Breakdown if p^T A p <= 0.
SolveReport pcg(const LinearOperator& A, const Eigen::VectorXd& rhs, const PcgOptions& options = {});

/// lambda_max / lambda_min of a symmetric matrix (absolute values, as for cond()).
double condition_number_dense(const Eigen::MatrixXd& A);

struct LanczosOptions {
  int steps = 200;
  double rel_tol = 1e-2;
  std::uint64_t seed = 7;
};

struct LanczosEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double bound_min = 0.0;  // residual bounds of the extreme Ritz pairs
  double bound_max = 0.0;
  int steps = 0;
  double condition() const { return lambda_max / lambda_min; }
};

/// Lanczos with full reorthogonalization. Throws NotConverged if an extreme
/// Ritz value is not resolved to rel_tol.
LanczosEstimate lanczos_extremes(const LinearOperator& A, Eigen::Index dim, const LanczosOptions& options = {});

inline double condition_number_lanczos(const LinearOperator& A, Eigen::Index dim, const LanczosOptions& options = {}) {
  return lanczos_extremes(A, dim, options).condition();
}

}  // namespace cutlgf
