#include "cutlgf/krylov.hpp"

#include "cutlgf/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cutlgf {

SolveReport pcg(const LinearOperator& A, const Eigen::VectorXd& rhs, const PcgOptions& options) {
  SolveReport rep;
  const Eigen::Index n = rhs.size();
  rep.solution = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    return rep;
  }
  auto precondition = [&](const Eigen::VectorXd& r) {
    return options.preconditioner ? options.preconditioner(r) : r;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = precondition(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  rep.residual_history.push_back(1.0);

  for (int k = 0; k < options.max_iter; ++k) {
    const Eigen::VectorXd Ap = A(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      std::ostringstream s;
      s << "CG breakdown at iteration " << k + 1 << ": p^T A p = " << pAp;
      throw Breakdown(s.str());
    }
    const double a = rz / pAp;
    x += a * p;
    r -= a * Ap;
    const double rel = r.norm() / bnorm;
    rep.residual_history.push_back(rel);
    rep.iterations = k + 1;
    if (rel <= options.tol) {
      // Confirm against the true residual; restart the recurrence if it drifted.
      const Eigen::VectorXd rt = rhs - A(x);
      if (rt.norm() / bnorm <= options.tol) break;
      r = rt;
      z = precondition(r);
      p = z;
      rz = r.dot(z);
      continue;
    }
    z = precondition(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  rep.solution = x;
  rep.final_residual = (rhs - A(x)).norm() / bnorm;
  rep.converged = rep.final_residual <= options.tol;
  return rep;
}

double condition_number_dense(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  return ev.maxCoeff() / ev.minCoeff();
}

LanczosEstimate lanczos_extremes(const LinearOperator& A, Eigen::Index dim, const LanczosOptions& options) {
  const int steps = static_cast<int>(std::min<Eigen::Index>(options.steps, dim));
  Eigen::MatrixXd V(dim, steps + 1);
  std::vector<double> alpha, beta;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
  V.col(0) = v.normalized();

  int m = 0;
  double last_beta = 0.0;
  for (; m < steps; ++m) {
    Eigen::VectorXd w = A(V.col(m));
    alpha.push_back(V.col(m).dot(w));
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(m + 1) * (V.leftCols(m + 1).transpose() * w);
    last_beta = w.norm();
    if (m + 1 == steps || last_beta <= 1e-14 * std::abs(alpha.back())) {
      ++m;
      break;
    }
    beta.push_back(last_beta);
    V.col(m + 1) = w / last_beta;
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const Eigen::VectorXd theta = es.eigenvalues();
  const Eigen::MatrixXd S = es.eigenvectors();

  LanczosEstimate est;
  est.steps = m;
  est.lambda_min = theta(0);
  est.lambda_max = theta(m - 1);
  est.bound_min = std::abs(last_beta * S(m - 1, 0));
  est.bound_max = std::abs(last_beta * S(m - 1, m - 1));
  const bool exhausted = m == dim;
  if (!exhausted && (est.bound_min > options.rel_tol * std::abs(est.lambda_min) ||
                     est.bound_max > options.rel_tol * std::abs(est.lambda_max))) {
    std::ostringstream s;
    s << "Lanczos extremes not resolved after " << m << " steps: lambda_min " << est.lambda_min << " +- "
      << est.bound_min << ", lambda_max " << est.lambda_max << " +- " << est.bound_max;
    throw NotConverged(s.str());
  }
  return est;
}

}  // namespace cutlgf
