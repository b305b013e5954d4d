#pragma once

#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/layer_ops.hpp"
#include "cutlgf/trace_assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cutlgf {

/// Extrapolation record of one gamma3 vertex: the axis directions e used in
/// v(eta) = 2 v(eta - h e) - v(eta - 2 h e), averaged when two are used.
struct ExtrapolationStencil {
  LatticeIndex vertex;
  std::vector<LatticeIndex> directions;
};

/// Rows encode R1 u1 + R2 u2 + u3 = 0.
struct Extrapolation {
  SparseMatrix R1;  // n3 x n1
  SparseMatrix R2;  // n3 x n2
  std::vector<ExtrapolationStencil> stencils;

  /// R1 u1 + R2 u2 + u3 for a vector in gamma ordering.
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const;
};

/// Per axis prefers +e over -e. Throws NoAdmissibleDirection.
Extrapolation build_extrapolation(const CutTopology& topology);

enum class Mode { E, FSingle, FDouble };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
LayerKind layer_kind(Mode mode);

/// Linear map from reduced coefficients (length n2) to gamma-ordered values.
///   E: u2 -> (H u2, u2, -(R1 H + R2) u2)
///   F: q  -> (P1 q, P2 q, -(R1 P1 + R2 P2) q)
/// Both act on blocks of columns.
class ReconstructionMap {
 public:
  static ReconstructionMap E(std::shared_ptr<const LayerBlocks> blocks, std::shared_ptr<const Extrapolation> extrap);
  static ReconstructionMap F(std::shared_ptr<const LayerBlocks> blocks, std::shared_ptr<const Extrapolation> extrap);

  bool is_E() const { return harmonic_ != nullptr; }
  Eigen::Index rows() const { return n1_ + n2_ + n3_; }
  Eigen::Index cols() const { return n2_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& q) const;
  Eigen::MatrixXd apply_transpose(const Eigen::MatrixXd& y) const;
  Eigen::MatrixXd materialize() const { return apply(Eigen::MatrixXd::Identity(n2_, n2_)); }

  /// Coefficients whose image is the constant 1 on gamma: 1 for E, P2^{-1} 1 for F.
  Eigen::VectorXd constant_generator() const;
  /// Density of the layer field for a coefficient vector (E: P2^{-1} u2, F: q).
  Eigen::VectorXd density(const Eigen::VectorXd& q) const;

  const LayerBlocks& blocks() const { return *blocks_; }
  const Extrapolation& extrapolation() const { return *extrap_; }

 private:
  ReconstructionMap() = default;
  std::shared_ptr<const LayerBlocks> blocks_;
  std::shared_ptr<const Extrapolation> extrap_;
  std::shared_ptr<const HarmonicExtension> harmonic_;
  Eigen::Index n1_ = 0, n2_ = 0, n3_ = 0;
};

enum class TraceMethod { Auto, Exact, Hutchinson };

struct ReducedOptions {
  TraceMethod trace = TraceMethod::Auto;
  int hutchinson_probes = 64;
  std::uint64_t seed = 20240521;
  /// Auto uses the exact trace up to this reduced dimension.
  Eigen::Index exact_trace_limit = 4096;
  /// nullopt: gauge term iff sigma_surface == 0.
  std::optional<bool> gauge;
  /// Multiplies the trace-matched alpha.
  double alpha_scale = 1.0;
};

struct Gauge {
  bool active = false;
  Eigen::VectorXd m;  // M^T w
  double alpha = 0.0;
  double target = 0.0;
};

/// (M^T K M + alpha m m^T) q = M^T b - M^T K u^p + alpha m (target - w^T u^p),
/// alpha = tr(M^T K M) / (n m^T m), n = |gamma2|.
class ReducedSystem {
 public:
  ReducedSystem(const SurfaceSystem& surface, ReconstructionMap map, double gauge_target = 0.0,
                const Eigen::VectorXd* u_particular = nullptr, const ReducedOptions& options = {});

  Eigen::Index dim() const { return map_.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& q) const;
  /// M^T K M q without the gauge term.
  Eigen::VectorXd apply_unfixed(const Eigen::VectorXd& q) const;
  Eigen::MatrixXd materialize(bool with_gauge = true) const;

  const Eigen::VectorXd& rhs() const { return rhs_; }
  const Gauge& gauge() const { return gauge_; }
  double trace() const { return trace_; }
  const ReconstructionMap& map() const { return map_; }

  /// u_gamma = u^p + M q.
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& q) const;

  /// q plus the multiple of the constant generator that makes w^T u_gamma equal
  /// the gauge target exactly. Removes the constant drift that an O(h^2)
  /// compatibility defect of the data leaves in the solution.
  Eigen::VectorXd enforce_gauge(const Eigen::VectorXd& q) const;

 private:
  SparseMatrix K_;
  Eigen::VectorXd w_;
  ReconstructionMap map_;
  Eigen::VectorXd up_;
  Eigen::VectorXd rhs_;
  Gauge gauge_;
  double trace_ = 0.0;
};

/// Hutchinson estimate of tr(A) with Rademacher probes.
double hutchinson_trace(const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& apply, Eigen::Index dim,
                        int probes, std::uint64_t seed);

}  // namespace cutlgf
