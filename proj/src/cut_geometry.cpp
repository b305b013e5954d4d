#include "cutlgf/cut_geometry.hpp"

#include "cutlgf/errors.hpp"
#include "cutlgf/quadrature.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace cutlgf {

namespace {

constexpr double kDegenerateTol = 1e-12;  // relative to h
constexpr double kRootTol = 1e-13;        // edge parameter, i.e. 1e-13 h in length

std::string where(LatticeIndex v) {
  std::ostringstream s;
  s << "(" << v.i << ", " << v.j << ")";
  return s.str();
}

// Zero crossing of psi on the edge p0 -> p1, given the snapped endpoint values.
Vec2 edge_root(const LevelSet& ls, const Vec2& p0, const Vec2& p1, double psi0) {
  const bool inside0 = psi0 <= 0.0;
  auto at = [&](double t) { return Vec2(p0 + t * (p1 - p0)); };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    if ((ls.psi(at(mid)) <= 0.0) == inside0)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  // One Newton polish, kept only if it stays inside the final bracket.
  const Vec2 x = at(t);
  const double slope = ls.grad(x).dot(p1 - p0);
  if (slope != 0.0) {
    const double tn = t - ls.psi(x) / slope;
    if (tn >= lo - kRootTol && tn <= hi + kRootTol && tn >= 0.0 && tn <= 1.0) t = tn;
  }
  return at(t);
}

}  // namespace

LatticeIndex CutTopology::vertex_order(int global) const {
  if (global < n1()) return gamma1[global];
  global -= n1();
  if (global < n2()) return gamma2[global];
  return gamma3.at(global - n2());
}

std::vector<LatticeIndex> CutTopology::interior_vertices() const {
  std::vector<LatticeIndex> out;
  for (int id = 0; id < grid.num_vertices(); ++id)
    if (vertex_psi[id] <= 0.0) out.push_back(grid.vertex_at(id));
  return out;
}

double CutTopology::interface_length() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.length;
  return total;
}

CutTopology classify_vertices(const LevelSet& levelset, const Grid& grid, const ClassifyOptions& options) {
  CutTopology topo;
  topo.grid = grid;
  const int nv = grid.num_vertices();
  topo.vertex_psi.resize(nv);
  const double snap = kDegenerateTol * grid.h;
  for (int id = 0; id < nv; ++id) {
    double v = levelset.psi(grid.vertex(grid.vertex_at(id)));
    if (!std::isfinite(v)) throw DegenerateCut("level set is not finite at vertex " + where(grid.vertex_at(id)));
    if (std::abs(v) < snap) {
      if (!options.perturb_degenerate)
        throw DegenerateCut("level set vanishes at vertex " + where(grid.vertex_at(id)));
      v = snap;
    }
    topo.vertex_psi[id] = v;
  }

  auto inside = [&](int i, int j) { return topo.vertex_psi[grid.vertex_id({i, j})] <= 0.0; };
  std::vector<char> active_vertex(nv, 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::array<bool, 4> s = {inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)};
      int changes = 0;
      for (int e = 0; e < 4; ++e) changes += s[e] != s[(e + 1) % 4];
      if (changes == 0) continue;
      if (changes != 2)
        throw DegenerateCut("cell " + where({i, j}) + " is cut by more than one interface piece");
      if (i < 2 || j < 2 || i + 3 > grid.nx || j + 3 > grid.ny)
        throw Error("background grid does not cover the interface neighborhood near cell " + where({i, j}));
      topo.active_cells.push_back({i, j});
      for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {1, 1}, {0, 1}})
        active_vertex[grid.vertex_id({i + di, j + dj})] = 1;
    }
  }
  if (topo.active_cells.empty()) throw EmptyInterface("no cell of the grid is cut by the interface");

  topo.vertex_class.assign(nv, VertexClass::Inactive);
  for (int id = 0; id < nv; ++id)
    if (active_vertex[id] && topo.vertex_psi[id] <= 0.0) topo.vertex_class[id] = VertexClass::Gamma1;
  for (int id = 0; id < nv; ++id) {
    if (!active_vertex[id] || topo.vertex_psi[id] <= 0.0) continue;
    const LatticeIndex v = grid.vertex_at(id);
    bool touches = false;
    for (auto d : kFivePoint) {
      const LatticeIndex w{v.i + d.i, v.j + d.j};
      touches = touches || (grid.contains(w) && topo.vertex_class[grid.vertex_id(w)] == VertexClass::Gamma1);
    }
    topo.vertex_class[id] = touches ? VertexClass::Gamma2 : VertexClass::Gamma3;
  }

  for (int id = 0; id < nv; ++id) {
    switch (topo.vertex_class[id]) {
      case VertexClass::Gamma1: topo.gamma1.push_back(grid.vertex_at(id)); break;
      case VertexClass::Gamma2: topo.gamma2.push_back(grid.vertex_at(id)); break;
      case VertexClass::Gamma3: topo.gamma3.push_back(grid.vertex_at(id)); break;
      case VertexClass::Inactive: break;
    }
  }
  topo.global_index.assign(nv, -1);
  int next = 0;
  for (const auto* set : {&topo.gamma1, &topo.gamma2, &topo.gamma3})
    for (const auto& v : *set) topo.global_index[grid.vertex_id(v)] = next++;
  return topo;
}

std::vector<InterfaceSegment> extract_interface(const LevelSet& levelset, const CutTopology& topo, int quad_order) {
  const Grid& g = topo.grid;
  const QuadratureRule& rule = gauss_legendre(quad_order);
  std::vector<InterfaceSegment> segments(topo.active_cells.size());

#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < topo.active_cells.size(); ++c) {
    const CellIndex cell = topo.active_cells[c];
    // Edges run from the lower to the higher vertex id so shared edges agree.
    const std::array<std::pair<LatticeIndex, LatticeIndex>, 4> edges = {{
        {{cell.i, cell.j}, {cell.i + 1, cell.j}},
        {{cell.i + 1, cell.j}, {cell.i + 1, cell.j + 1}},
        {{cell.i, cell.j + 1}, {cell.i + 1, cell.j + 1}},
        {{cell.i, cell.j}, {cell.i, cell.j + 1}},
    }};
    std::vector<Vec2> crossings;
    for (const auto& [u, v] : edges) {
      const double pu = topo.vertex_psi[g.vertex_id(u)];
      const double pv = topo.vertex_psi[g.vertex_id(v)];
      if ((pu <= 0.0) != (pv <= 0.0)) crossings.push_back(edge_root(levelset, g.vertex(u), g.vertex(v), pu));
    }
    InterfaceSegment& seg = segments[c];
    seg.cell = cell;
    if (crossings.size() != 2) {
      // Reported after the parallel loop.
      seg.length = -1.0;
      continue;
    }
    seg.a = crossings[0];
    seg.b = crossings[1];
    seg.length = (seg.b - seg.a).norm();
    const Vec2 mid = 0.5 * (seg.a + seg.b);
    const Vec2 half = 0.5 * (seg.b - seg.a);
    seg.quad.resize(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      SegmentQuadPoint& p = seg.quad[q];
      p.x = mid + rule.nodes[q] * half;
      p.weight = 0.5 * rule.weights[q] * seg.length;
      const Vec2 grad = levelset.grad(p.x);
      const double norm = grad.norm();
      p.normal = norm > 0.0 ? Vec2(grad / norm) : Vec2(Vec2::Zero());
    }
  }
  for (const auto& seg : segments) {
    if (seg.length < 0.0)
      throw DegenerateCut("active cell " + where(seg.cell) + " does not have exactly two edge crossings");
    for (const auto& p : seg.quad)
      if (p.normal.squaredNorm() == 0.0)
        throw DegenerateCut("level-set gradient vanishes on the interface in cell " + where(seg.cell));
  }
  return segments;
}

CutTopology build_topology(const LevelSet& levelset, const Grid& grid, int quad_order, const ClassifyOptions& options) {
  CutTopology topo = classify_vertices(levelset, grid, options);
  topo.segments = extract_interface(levelset, topo, quad_order);
  return topo;
}

}  // namespace cutlgf
