#pragma once

#include "cutlgf/geometry.hpp"

#include <cstdint>
#include <vector>

namespace cutlgf {

enum class VertexClass : std::uint8_t { Inactive, Gamma1, Gamma2, Gamma3 };

struct SegmentQuadPoint {
  Vec2 x;
  double weight = 0.0;
  Vec2 normal;  // grad psi / |grad psi| at x
};

/// Straight piece of the discrete interface inside one active cell.
struct InterfaceSegment {
  CellIndex cell;
  Vec2 a;
  Vec2 b;
  double length = 0.0;
  std::vector<SegmentQuadPoint> quad;
};

struct ClassifyOptions {
  /// Snap |psi| < 1e-12 h at a vertex to +1e-12 h instead of failing.
  bool perturb_degenerate = true;
};

/// Active cells and the ordered vertex partition gamma1 | gamma2 | gamma3.
///
/// gamma1: active vertices with psi <= 0.
/// gamma2: active vertices with psi > 0 and a five-point neighbor in gamma1.
/// gamma3: the remaining active vertices.
/// Each set is ordered row-major (j, then i); the global numbering is the
/// concatenation (gamma1, gamma2, gamma3).
struct CutTopology {
  Grid grid;
  std::vector<double> vertex_psi;  // per grid vertex, after degeneracy snapping
  std::vector<CellIndex> active_cells;
  std::vector<LatticeIndex> gamma1;
  std::vector<LatticeIndex> gamma2;
  std::vector<LatticeIndex> gamma3;
  std::vector<int> global_index;  // per grid vertex: position in vertex_order or -1
  std::vector<VertexClass> vertex_class;
  std::vector<InterfaceSegment> segments;  // parallel to active_cells once extracted

  int n1() const { return static_cast<int>(gamma1.size()); }
  int n2() const { return static_cast<int>(gamma2.size()); }
  int n3() const { return static_cast<int>(gamma3.size()); }
  int size() const { return n1() + n2() + n3(); }

  /// Lattice vertex of a global (gamma-ordered) index.
  LatticeIndex vertex_order(int global) const;
  int index_of(LatticeIndex v) const {
    return grid.contains(v) ? global_index[grid.vertex_id(v)] : -1;
  }
  VertexClass class_of(LatticeIndex v) const {
    return grid.contains(v) ? vertex_class[grid.vertex_id(v)] : VertexClass::Inactive;
  }
  bool inside(LatticeIndex v) const { return vertex_psi[grid.vertex_id(v)] <= 0.0; }
  /// All lattice vertices with psi <= 0, row-major.
  std::vector<LatticeIndex> interior_vertices() const;
  double interface_length() const;
};

/// Partition the vertices of cells with a sign change of psi.
/// Throws EmptyInterface when no cell is cut and DegenerateCut for vertices on
/// the interface (when snapping is off) or saddle cells with four crossings.
CutTopology classify_vertices(const LevelSet& levelset, const Grid& grid,
                              const ClassifyOptions& options = {});

/// One segment per active cell between the two edge zero crossings, with a
/// `quad_order`-point Gauss rule and level-set normals at the nodes.
std::vector<InterfaceSegment> extract_interface(const LevelSet& levelset,
                                                const CutTopology& topology, int quad_order = 3);

/// classify_vertices followed by extract_interface.
CutTopology build_topology(const LevelSet& levelset, const Grid& grid, int quad_order = 3,
                           const ClassifyOptions& options = {});

/// The five-point neighbor offsets +-e1, +-e2.
inline constexpr LatticeIndex kFivePoint[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

}  // namespace cutlgf
