#pragma once

#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/lgf.hpp"

#include <Eigen/Dense>

#include <vector>

namespace cutlgf {

enum class LayerKind { Single, Double };

/// Layer potential matrices with sources on gamma2, restricted to targets in
/// gamma1 (P1) and gamma2 (P2). Rows and columns follow the gamma ordering.
///
///   single: S_ij = g((x_i - x_j)/h)
///   double: D_ij = sum_{k ~ j, x_k not active} [g(x_i - x_k) - g(x_i - x_j)]
struct LayerBlocks {
  LayerKind kind = LayerKind::Single;
  Eigen::MatrixXd P1;
  Eigen::MatrixXd P2;
  std::vector<LatticeIndex> sources;                // gamma2
  std::vector<std::vector<LatticeIndex>> outside;   // double layer only: neighbors of each source off the strip

  /// Kernel of source column j at an arbitrary lattice target.
  double kernel(const LgfTable& table, LatticeIndex target, int j) const;
};

LayerBlocks build_single_layer(const CutTopology& topology, const LgfTable& table);

/// Outside neighbors of a source are its inactive five-point neighbors, or its
/// gamma3 neighbors when it has no inactive one. Throws IsolatedSource when
/// neither exists.
LayerBlocks build_double_layer(const CutTopology& topology, const LgfTable& table);

LayerBlocks build_layer(LayerKind kind, const CutTopology& topology, const LgfTable& table);

/// Dense LU of P2 with partial pivoting. Throws SingularP2 when a pivot falls
/// below 1e-13 ||P2||_inf.
class P2Factorization {
 public:
  explicit P2Factorization(const Eigen::MatrixXd& P2);

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }
  Eigen::MatrixXd solve_transpose(const Eigen::MatrixXd& rhs) const { return lu_.transpose().solve(rhs); }
  double min_pivot() const { return min_pivot_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double min_pivot_ = 0.0;
};

/// H = P1 P2^{-1}, applied as solve-then-multiply.
class HarmonicExtension {
 public:
  explicit HarmonicExtension(const LayerBlocks& blocks) : P1_(&blocks.P1), lu_(blocks.P2) {}

  Eigen::MatrixXd apply(const Eigen::MatrixXd& u2) const { return *P1_ * lu_.solve(u2); }
  Eigen::MatrixXd apply_transpose(const Eigen::MatrixXd& z1) const {
    return lu_.solve_transpose(P1_->transpose() * z1);
  }
  const P2Factorization& factorization() const { return lu_; }

 private:
  const Eigen::MatrixXd* P1_;
  P2Factorization lu_;
};

/// One-shot H u2 (factorizes P2 on every call).
Eigen::VectorXd apply_H(const LayerBlocks& blocks, const Eigen::VectorXd& u2);

/// Layer field sum_j kernel(target - x_j) density_j at each target.
Eigen::VectorXd bulk_evaluate(const LayerBlocks& blocks, const Eigen::VectorXd& density,
                              const std::vector<LatticeIndex>& targets, const LgfTable& table);

}  // namespace cutlgf
