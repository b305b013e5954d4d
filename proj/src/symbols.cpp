#include "cutlgf/symbols.hpp"

#include "cutlgf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cutlgf {

double stiffness_symbol(double theta, double h, double sigma_surface) {
  const double s = std::sin(0.5 * theta);
  return 4.0 / h * s * s + sigma_surface * h;
}

LayerSymbols layer_symbols(double theta, double h, double sigma_bulk) {
  if (theta == 0.0 && sigma_bulk == 0.0)
    throw DivergentMode("single-layer symbol diverges at zero frequency without screening");
  // cosh a - 1 = 2 sin^2(theta/2) + sigma h^2 / 2, kept free of cancellation.
  const double s = std::sin(0.5 * theta);
  const double t = 2.0 * s * s + 0.5 * sigma_bulk * h * h;
  const double sh = std::sqrt(t * (2.0 + t));
  LayerSymbols out;
  out.alpha = std::log1p(t + sh);
  out.s_hat = h / (2.0 * sh);
  out.d_hat = out.s_hat * -std::expm1(-out.alpha) / h;
  return out;
}

double composite_symbol(Mode mode, double theta, double h, double sigma_surface, double sigma_bulk) {
  const double k = stiffness_symbol(theta, h, sigma_surface);
  if (mode == Mode::E) return k;
  const LayerSymbols l = layer_symbols(theta, h, sigma_bulk);
  return mode == Mode::FSingle ? k * l.s_hat * l.s_hat : k * l.d_hat * l.d_hat;
}

std::vector<double> resolved_frequencies(double h) {
  std::vector<double> out;
  const double step = 2.0 * std::numbers::pi * h;
  for (int k = 1; k * step <= std::numbers::pi * (1.0 + 1e-12); ++k) out.push_back(k * step);
  if (out.empty()) out.push_back(std::numbers::pi);
  return out;
}

double predicted_condition(Mode mode, double h, double sigma_surface, double sigma_bulk) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double theta : resolved_frequencies(h)) {
    const double c = composite_symbol(mode, theta, h, sigma_surface, sigma_bulk);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return hi / lo;
}

SymbolProfile symbol_profile(double h, double sigma_surface, double sigma_bulk) {
  SymbolProfile p;
  p.h = h;
  p.sigma_surface = sigma_surface;
  p.sigma_bulk = sigma_bulk;
  p.theta = resolved_frequencies(h);
  for (double theta : p.theta) {
    const LayerSymbols l = layer_symbols(theta, h, sigma_bulk);
    p.k_hat.push_back(stiffness_symbol(theta, h, sigma_surface));
    p.s_hat.push_back(l.s_hat);
    p.d_hat.push_back(l.d_hat);
  }
  return p;
}

void write_symbol_csv(std::ostream& out, const std::vector<SymbolProfile>& profiles, bool header) {
  const auto precision = out.precision(12);
  if (header) out << "h,theta,k_hat,s_hat,d_hat,composite_E,composite_F_single,composite_F_double\n";
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
      const double k = p.k_hat[i], s = p.s_hat[i], d = p.d_hat[i];
      out << p.h << ',' << p.theta[i] << ',' << k << ',' << s << ',' << d << ',' << k << ',' << k * s * s << ','
          << k * d * d << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace cutlgf
