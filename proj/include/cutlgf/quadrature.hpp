#pragma once

#include <vector>

namespace cutlgf {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with `points` nodes (cached per order).
const QuadratureRule& gauss_legendre(int points);

}  // namespace cutlgf
