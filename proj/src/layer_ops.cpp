#include "cutlgf/layer_ops.hpp"

#include "cutlgf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutlgf {

namespace {

LatticeIndex offset(LatticeIndex a, LatticeIndex b) { return {a.i - b.i, a.j - b.j}; }

void check_window(const CutTopology& topo, const LgfTable& table, int margin) {
  int imin = topo.grid.nx, imax = 0, jmin = topo.grid.ny, jmax = 0;
  for (const auto* set : {&topo.gamma1, &topo.gamma2}) {
    for (const auto& v : *set) {
      imin = std::min(imin, v.i);
      imax = std::max(imax, v.i);
      jmin = std::min(jmin, v.j);
      jmax = std::max(jmax, v.j);
    }
  }
  const int reach = std::max(imax - imin, jmax - jmin) + margin;
  if (reach > table.window()) (void)table(reach, 0);
}

void fill_blocks(LayerBlocks& b, const CutTopology& topo, const LgfTable& table) {
  const Eigen::Index n1 = topo.n1(), n2 = topo.n2();
  b.P1.resize(n1, n2);
  b.P2.resize(n2, n2);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n2; ++j) {
    for (Eigen::Index i = 0; i < n1; ++i) b.P1(i, j) = b.kernel(table, topo.gamma1[i], static_cast<int>(j));
    for (Eigen::Index i = 0; i < n2; ++i) b.P2(i, j) = b.kernel(table, topo.gamma2[i], static_cast<int>(j));
  }
}

}  // namespace

double LayerBlocks::kernel(const LgfTable& table, LatticeIndex target, int j) const {
  const LatticeIndex xj = sources[j];
  if (kind == LayerKind::Single) return table(offset(target, xj));
  const double gj = table(offset(target, xj));
  double sum = 0.0;
  for (const auto& xk : outside[j]) sum += table(offset(target, xk)) - gj;
  return sum;
}

LayerBlocks build_single_layer(const CutTopology& topo, const LgfTable& table) {
  check_window(topo, table, 0);
  LayerBlocks b;
  b.kind = LayerKind::Single;
  b.sources = topo.gamma2;
  fill_blocks(b, topo, table);
  return b;
}

LayerBlocks build_double_layer(const CutTopology& topo, const LgfTable& table) {
  check_window(topo, table, 1);
  LayerBlocks b;
  b.kind = LayerKind::Double;
  b.sources = topo.gamma2;
  b.outside.resize(b.sources.size());
  for (std::size_t j = 0; j < b.sources.size(); ++j) {
    const LatticeIndex v = b.sources[j];
    // Off the active set if possible, otherwise off the gamma1/gamma2 strip.
    for (VertexClass c : {VertexClass::Inactive, VertexClass::Gamma3}) {
      for (auto d : kFivePoint) {
        const LatticeIndex w{v.i + d.i, v.j + d.j};
        if (topo.grid.contains(w) && topo.class_of(w) == c) b.outside[j].push_back(w);
      }
      if (!b.outside[j].empty()) break;
    }
    if (b.outside[j].empty()) {
      std::ostringstream s;
      s << "gamma2 vertex (" << v.i << ", " << v.j << ") has no five-point neighbor outside the gamma1/gamma2 strip";
      throw IsolatedSource(s.str());
    }
  }
  fill_blocks(b, topo, table);
  return b;
}

LayerBlocks build_layer(LayerKind kind, const CutTopology& topo, const LgfTable& table) {
  return kind == LayerKind::Single ? build_single_layer(topo, table) : build_double_layer(topo, table);
}

P2Factorization::P2Factorization(const Eigen::MatrixXd& P2) {
  if (P2.rows() == 0 || P2.rows() != P2.cols()) throw SingularP2("P2 must be a non-empty square matrix");
  lu_.compute(P2);
  const double scale = P2.cwiseAbs().rowwise().sum().maxCoeff();
  min_pivot_ = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot_ >= 1e-13 * scale)) {
    std::ostringstream s;
    s << "P2 is numerically singular: pivot " << min_pivot_ << " against ||P2||_inf = " << scale;
    throw SingularP2(s.str());
  }
}

Eigen::VectorXd apply_H(const LayerBlocks& blocks, const Eigen::VectorXd& u2) {
  return HarmonicExtension(blocks).apply(u2);
}

Eigen::VectorXd bulk_evaluate(const LayerBlocks& blocks, const Eigen::VectorXd& density,
                              const std::vector<LatticeIndex>& targets, const LgfTable& table) {
  if (density.size() != static_cast<Eigen::Index>(blocks.sources.size()))
    throw std::invalid_argument("bulk_evaluate: density size does not match the sources");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(targets.size()));
  std::vector<int> active;
  for (Eigen::Index j = 0; j < density.size(); ++j)
    if (density(j) != 0.0) active.push_back(static_cast<int>(j));
  if (active.empty()) return out;
  // Surface a window failure before the parallel loop.
  int imin = blocks.sources[0].i, imax = imin, jmin = blocks.sources[0].j, jmax = jmin;
  for (const auto& s : blocks.sources) {
    imin = std::min(imin, s.i);
    imax = std::max(imax, s.i);
    jmin = std::min(jmin, s.j);
    jmax = std::max(jmax, s.j);
  }
  int reach = 0;
  for (const auto& t : targets)
    reach = std::max({reach, std::abs(t.i - imin), std::abs(t.i - imax), std::abs(t.j - jmin), std::abs(t.j - jmax)});
  reach += blocks.kind == LayerKind::Double ? 1 : 0;
  if (reach > table.window()) (void)table(reach, 0);

#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < targets.size(); ++k) {
    double acc = 0.0;
    for (int j : active) acc += blocks.kernel(table, targets[k], j) * density(j);
    out(static_cast<Eigen::Index>(k)) = acc;
  }
  return out;
}

}  // namespace cutlgf
