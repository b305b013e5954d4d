#include "cutlgf/trace_assembly.hpp"

#include <vector>

namespace cutlgf {

std::array<LatticeIndex, 4> cell_vertices(CellIndex c) {
  return {{{c.i, c.j}, {c.i + 1, c.j}, {c.i + 1, c.j + 1}, {c.i, c.j + 1}}};
}

Eigen::Vector4d q1_values(const Grid& grid, CellIndex cell, const Vec2& x) {
  const double s = (x.x() - grid.origin.x()) / grid.h - cell.i;
  const double t = (x.y() - grid.origin.y()) / grid.h - cell.j;
  return {(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t};
}

Eigen::Matrix<double, 4, 2> q1_gradients(const Grid& grid, CellIndex cell, const Vec2& x) {
  const double s = (x.x() - grid.origin.x()) / grid.h - cell.i;
  const double t = (x.y() - grid.origin.y()) / grid.h - cell.j;
  Eigen::Matrix<double, 4, 2> g;
  g << -(1 - t), -(1 - s),
       (1 - t), -s,
       t, s,
       -t, (1 - s);
  return g / grid.h;
}

LocalSystem local_stiffness(const InterfaceSegment& seg, const Grid& grid, const ScalarField& g) {
  LocalSystem out;
  out.stiffness.setZero();
  out.mass.setZero();
  out.load.setZero();
  out.weight.setZero();
  for (const auto& q : seg.quad) {
    const Eigen::Vector4d phi = q1_values(grid, seg.cell, q.x);
    const Eigen::Matrix<double, 4, 2> grad = q1_gradients(grid, seg.cell, q.x);
    const Eigen::Matrix2d P = Eigen::Matrix2d::Identity() - q.normal * q.normal.transpose();
    const Eigen::Matrix<double, 4, 2> tg = grad * P;
    // Upper triangle mirrored so both matrices are exactly symmetric.
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) {
        const double k = q.weight * tg.row(a).dot(tg.row(b));
        const double m = q.weight * phi(a) * phi(b);
        out.stiffness(a, b) += k;
        out.mass(a, b) += m;
        if (b != a) {
          out.stiffness(b, a) += k;
          out.mass(b, a) += m;
        }
      }
    }
    out.weight += q.weight * phi;
    if (g) out.load += q.weight * g(q.x) * phi;
  }
  return out;
}

SurfaceSystem assemble(const CutTopology& topo, const ScalarField& g, double sigma_surface) {
  const std::size_t cells = topo.segments.size();
  std::vector<LocalSystem> local(cells);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < cells; ++c) local[c] = local_stiffness(topo.segments[c], topo.grid, g);

  const int n = topo.size();
  SurfaceSystem sys;
  sys.sigma_surface = sigma_surface;
  sys.b = Eigen::VectorXd::Zero(n);
  sys.w = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(cells * 16);
  mt.reserve(cells * 16);
  // Sequential scatter in cell order keeps the result bit-reproducible.
  for (std::size_t c = 0; c < cells; ++c) {
    const auto verts = cell_vertices(topo.segments[c].cell);
    std::array<int, 4> idx;
    for (int a = 0; a < 4; ++a) idx[a] = topo.index_of(verts[a]);
    const LocalSystem& L = local[c];
    for (int a = 0; a < 4; ++a) {
      sys.b(idx[a]) += L.load(a);
      sys.w(idx[a]) += L.weight(a);
      for (int bb = 0; bb < 4; ++bb) {
        kt.emplace_back(idx[a], idx[bb], L.stiffness(a, bb) + sigma_surface * L.mass(a, bb));
        mt.emplace_back(idx[a], idx[bb], L.mass(a, bb));
      }
    }
  }
  sys.K.resize(n, n);
  sys.K.setFromTriplets(kt.begin(), kt.end());
  sys.M.resize(n, n);
  sys.M.setFromTriplets(mt.begin(), mt.end());
  return sys;
}

double trace_value(const CutTopology& topo, CellIndex cell, const Eigen::VectorXd& u, const Vec2& x) {
  const Eigen::Vector4d phi = q1_values(topo.grid, cell, x);
  const auto verts = cell_vertices(cell);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += phi(a) * u(topo.index_of(verts[a]));
  return v;
}

Vec2 trace_gradient(const CutTopology& topo, CellIndex cell, const Eigen::VectorXd& u, const Vec2& x) {
  const Eigen::Matrix<double, 4, 2> grad = q1_gradients(topo.grid, cell, x);
  const auto verts = cell_vertices(cell);
  Vec2 v = Vec2::Zero();
  for (int a = 0; a < 4; ++a) v += u(topo.index_of(verts[a])) * grad.row(a).transpose();
  return v;
}

}  // namespace cutlgf
