#include "cutlgf/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cutlgf {

namespace {

QuadratureRule make_rule(int points) {
  // legendre_p_zeros returns the non-negative half of the zeros.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(points);
  QuadratureRule rule;
  auto weight = [points](double x) {
    const double dp = boost::math::legendre_p_prime<double>(points, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (double x : half) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
    if (x != 0.0) {
      rule.nodes.push_back(-x);
      rule.weights.push_back(weight(x));
    }
  }
  std::vector<std::size_t> order(rule.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted;
  for (auto i : order) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  return sorted;
}

}  // namespace

const QuadratureRule& gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: points must be >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, make_rule(points)).first;
  return it->second;
}

}  // namespace cutlgf
