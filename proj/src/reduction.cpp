#include "cutlgf/reduction.hpp"

#include "cutlgf/errors.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace cutlgf {

Eigen::VectorXd Extrapolation::residual(const Eigen::VectorXd& u) const {
  const Eigen::Index n1 = R1.cols(), n2 = R2.cols(), n3 = R1.rows();
  if (u.size() != n1 + n2 + n3) throw std::invalid_argument("Extrapolation::residual: size mismatch");
  return R1 * u.head(n1) + R2 * u.segment(n1, n2) + u.tail(n3);
}

Extrapolation build_extrapolation(const CutTopology& topo) {
  const int n1 = topo.n1();
  Extrapolation ex;
  std::vector<Eigen::Triplet<double>> t1, t2;
  auto strip = [&](LatticeIndex v) {
    const VertexClass c = topo.class_of(v);
    return c == VertexClass::Gamma1 || c == VertexClass::Gamma2;
  };
  for (int r = 0; r < topo.n3(); ++r) {
    const LatticeIndex eta = topo.gamma3[r];
    ExtrapolationStencil st{eta, {}};
    for (const auto& axis : {std::pair<LatticeIndex, LatticeIndex>{{1, 0}, {-1, 0}}, {{0, 1}, {0, -1}}}) {
      for (LatticeIndex e : {axis.first, axis.second}) {
        if (strip({eta.i - e.i, eta.j - e.j}) && strip({eta.i - 2 * e.i, eta.j - 2 * e.j})) {
          st.directions.push_back(e);
          break;
        }
      }
    }
    if (st.directions.empty()) {
      std::ostringstream s;
      s << "gamma3 vertex (" << eta.i << ", " << eta.j << ") has no admissible extrapolation direction";
      throw NoAdmissibleDirection(s.str());
    }
    const double scale = 1.0 / static_cast<double>(st.directions.size());
    auto put = [&](LatticeIndex v, double value) {
      const int g = topo.index_of(v);
      if (g < n1)
        t1.emplace_back(r, g, value);
      else
        t2.emplace_back(r, g - n1, value);
    };
    for (const auto& e : st.directions) {
      put({eta.i - e.i, eta.j - e.j}, -2.0 * scale);
      put({eta.i - 2 * e.i, eta.j - 2 * e.j}, 1.0 * scale);
    }
    ex.stencils.push_back(std::move(st));
  }
  ex.R1.resize(topo.n3(), n1);
  ex.R1.setFromTriplets(t1.begin(), t1.end());
  ex.R2.resize(topo.n3(), topo.n2());
  ex.R2.setFromTriplets(t2.begin(), t2.end());
  return ex;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::E: return "E";
    case Mode::FSingle: return "F-single";
    case Mode::FDouble: return "F-double";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  if (text == "E") return Mode::E;
  if (text == "F-single") return Mode::FSingle;
  if (text == "F-double") return Mode::FDouble;
  throw std::invalid_argument("unknown mode '" + text + "' (expected E, F-single or F-double)");
}

LayerKind layer_kind(Mode mode) { return mode == Mode::FDouble ? LayerKind::Double : LayerKind::Single; }

// ---------------------------------------------------------------------------

ReconstructionMap ReconstructionMap::E(std::shared_ptr<const LayerBlocks> blocks,
                                       std::shared_ptr<const Extrapolation> extrap) {
  ReconstructionMap m = F(std::move(blocks), std::move(extrap));
  m.harmonic_ = std::make_shared<const HarmonicExtension>(*m.blocks_);
  return m;
}

ReconstructionMap ReconstructionMap::F(std::shared_ptr<const LayerBlocks> blocks,
                                       std::shared_ptr<const Extrapolation> extrap) {
  if (!blocks || !extrap) throw std::invalid_argument("ReconstructionMap: null blocks or extrapolation");
  ReconstructionMap m;
  m.n1_ = blocks->P1.rows();
  m.n2_ = blocks->P2.rows();
  m.n3_ = extrap->R1.rows();
  if (extrap->R1.cols() != m.n1_ || extrap->R2.cols() != m.n2_)
    throw std::invalid_argument("ReconstructionMap: layer blocks and extrapolation disagree in size");
  m.blocks_ = std::move(blocks);
  m.extrap_ = std::move(extrap);
  return m;
}

Eigen::MatrixXd ReconstructionMap::apply(const Eigen::MatrixXd& q) const {
  if (q.rows() != n2_) throw std::invalid_argument("ReconstructionMap::apply: size mismatch");
  Eigen::MatrixXd out(rows(), q.cols());
  if (harmonic_) {
    out.topRows(n1_) = harmonic_->apply(q);
    out.middleRows(n1_, n2_) = q;
  } else {
    out.topRows(n1_).noalias() = blocks_->P1 * q;
    out.middleRows(n1_, n2_).noalias() = blocks_->P2 * q;
  }
  out.bottomRows(n3_) = -(extrap_->R1 * out.topRows(n1_) + extrap_->R2 * out.middleRows(n1_, n2_));
  return out;
}

Eigen::MatrixXd ReconstructionMap::apply_transpose(const Eigen::MatrixXd& y) const {
  if (y.rows() != rows()) throw std::invalid_argument("ReconstructionMap::apply_transpose: size mismatch");
  const Eigen::MatrixXd y3 = y.bottomRows(n3_);
  const Eigen::MatrixXd z1 = y.topRows(n1_) - Eigen::MatrixXd(extrap_->R1.transpose() * y3);
  const Eigen::MatrixXd z2 = y.middleRows(n1_, n2_) - Eigen::MatrixXd(extrap_->R2.transpose() * y3);
  if (harmonic_) return harmonic_->apply_transpose(z1) + z2;
  Eigen::MatrixXd out = blocks_->P1.transpose() * z1;
  out.noalias() += blocks_->P2.transpose() * z2;
  return out;
}

Eigen::VectorXd ReconstructionMap::constant_generator() const {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n2_);
  if (harmonic_) return ones;
  return P2Factorization(blocks_->P2).solve(ones);
}

Eigen::VectorXd ReconstructionMap::density(const Eigen::VectorXd& q) const {
  if (harmonic_) return harmonic_->factorization().solve(q);
  return q;
}

// ---------------------------------------------------------------------------

double hutchinson_trace(const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& apply, Eigen::Index dim,
                        int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd Z(dim, probes);
  for (Eigen::Index c = 0; c < probes; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) Z(r, c) = coin(rng) ? 1.0 : -1.0;
  const Eigen::MatrixXd AZ = apply(Z);
  return Z.cwiseProduct(AZ).sum() / probes;
}

ReducedSystem::ReducedSystem(const SurfaceSystem& surface, ReconstructionMap map, double gauge_target,
                             const Eigen::VectorXd* u_particular, const ReducedOptions& options)
    : K_(surface.K), w_(surface.w), map_(std::move(map)) {
  const Eigen::Index n = map_.rows();
  if (K_.rows() != n) throw std::invalid_argument("ReducedSystem: surface system and map disagree in size");
  up_ = u_particular ? *u_particular : Eigen::VectorXd::Zero(n);
  if (up_.size() != n) throw std::invalid_argument("ReducedSystem: particular solution has the wrong size");

  const bool exact = options.trace == TraceMethod::Exact ||
                     (options.trace == TraceMethod::Auto && dim() <= options.exact_trace_limit);
  if (exact) {
    const Eigen::MatrixXd M = map_.materialize();
    const Eigen::MatrixXd KM = K_ * M;
    trace_ = M.cwiseProduct(KM).sum();
  } else {
    trace_ = hutchinson_trace([this](const Eigen::MatrixXd& Z) { return map_.apply_transpose(K_ * map_.apply(Z)); },
                              dim(), options.hutchinson_probes, options.seed);
  }

  gauge_.active = options.gauge.value_or(surface.sigma_surface == 0.0);
  gauge_.target = gauge_target;
  gauge_.m = map_.apply_transpose(w_);
  const double mm = gauge_.m.squaredNorm();
  gauge_.alpha = gauge_.active && mm > 0.0 ? options.alpha_scale * trace_ / (static_cast<double>(dim()) * mm) : 0.0;

  rhs_ = map_.apply_transpose(surface.b - K_ * up_);
  if (gauge_.active) rhs_ += gauge_.alpha * (gauge_target - w_.dot(up_)) * gauge_.m;
}

Eigen::VectorXd ReducedSystem::apply_unfixed(const Eigen::VectorXd& q) const {
  return map_.apply_transpose(K_ * map_.apply(q));
}

Eigen::VectorXd ReducedSystem::apply(const Eigen::VectorXd& q) const {
  Eigen::VectorXd y = apply_unfixed(q);
  if (gauge_.active) y += gauge_.alpha * gauge_.m.dot(q) * gauge_.m;
  return y;
}

Eigen::MatrixXd ReducedSystem::materialize(bool with_gauge) const {
  const Eigen::MatrixXd M = map_.materialize();
  const Eigen::MatrixXd KM = K_ * M;
  Eigen::MatrixXd A = M.transpose() * KM;
  A = 0.5 * (A + A.transpose()).eval();
  if (with_gauge && gauge_.active) A += gauge_.alpha * gauge_.m * gauge_.m.transpose();
  return A;
}

Eigen::VectorXd ReducedSystem::reconstruct(const Eigen::VectorXd& q) const { return up_ + map_.apply(q); }

Eigen::VectorXd ReducedSystem::enforce_gauge(const Eigen::VectorXd& q) const {
  const double mean = w_.dot(reconstruct(q));
  return q + ((gauge_.target - mean) / w_.sum()) * map_.constant_generator();
}

}  // namespace cutlgf
