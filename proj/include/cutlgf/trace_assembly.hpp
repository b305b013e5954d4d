#pragma once

#include "cutlgf/cut_geometry.hpp"
#include "cutlgf/lgf.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>

namespace cutlgf {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Bilinear basis on a cell, local order (i,j), (i+1,j), (i+1,j+1), (i,j+1).
std::array<LatticeIndex, 4> cell_vertices(CellIndex cell);
Eigen::Vector4d q1_values(const Grid& grid, CellIndex cell, const Vec2& x);
/// Rows are the gradients of the four basis functions.
Eigen::Matrix<double, 4, 2> q1_gradients(const Grid& grid, CellIndex cell, const Vec2& x);

struct LocalSystem {
  Eigen::Matrix4d stiffness;  // int (P grad phi_a) . (P grad phi_b)
  Eigen::Matrix4d mass;       // int phi_a phi_b
  Eigen::Vector4d load;       // int g phi_a
  Eigen::Vector4d weight;     // int phi_a
};

/// Segment integrals on one active cell; P = I - n n^T at each quadrature node.
/// An empty `g` gives a zero load.
LocalSystem local_stiffness(const InterfaceSegment& segment, const Grid& grid, const ScalarField& g = {});

/// Surface Galerkin system over the active Q1 space in gamma ordering.
struct SurfaceSystem {
  SparseMatrix K;  // stiffness + sigma_surface * mass
  SparseMatrix M;  // consistent surface mass
  Eigen::VectorXd b;
  Eigen::VectorXd w;  // w_i = int phi_i ds_h
  double sigma_surface = 0.0;
};

SurfaceSystem assemble(const CutTopology& topology, const ScalarField& g, double sigma_surface);

/// Finite element function sum_a u_a phi_a evaluated at x in `cell`;
/// `u` is indexed by the gamma ordering.
double trace_value(const CutTopology& topology, CellIndex cell, const Eigen::VectorXd& u, const Vec2& x);
Vec2 trace_gradient(const CutTopology& topology, CellIndex cell, const Eigen::VectorXd& u, const Vec2& x);

}  // namespace cutlgf
