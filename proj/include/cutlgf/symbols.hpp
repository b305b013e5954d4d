#pragma once

#include "cutlgf/reduction.hpp"

#include <ostream>
#include <vector>

namespace cutlgf {

/// Fourier symbols of the discrete operators on a straight interface with
/// tangential frequency theta (radians per cell).
///
///   k(theta) = (4/h) sin^2(theta/2) + sigma_surface h
///   cosh a   = 2 - cos theta + sigma_bulk h^2 / 2
///   s(theta) = h / (2 sinh a)                  single layer
///   d(theta) = s(theta) (1 - e^{-a}) / h        double layer
///
/// s and d are the exact symbols of the row-adjacent blocks for the kernel
/// h g(x/h) and its one-sided normal difference; d -> 1/2 as theta -> 0.
double stiffness_symbol(double theta, double h, double sigma_surface);

struct LayerSymbols {
  double alpha = 0.0;
  double s_hat = 0.0;
  double d_hat = 0.0;
};

/// Throws DivergentMode at theta = 0 with sigma_bulk = 0.
LayerSymbols layer_symbols(double theta, double h, double sigma_bulk);

/// Symbol of the reduced operator. E: k;  F-single: k s^2;  F-double: k d^2.
double composite_symbol(Mode mode, double theta, double h, double sigma_surface, double sigma_bulk);

/// Resolved frequencies 2 pi h k in (0, pi], k = 1, 2, ...
std::vector<double> resolved_frequencies(double h);

/// max / min of the composite symbol over the resolved frequencies.
double predicted_condition(Mode mode, double h, double sigma_surface, double sigma_bulk);

struct SymbolProfile {
  double h = 0.0;
  double sigma_surface = 0.0;
  double sigma_bulk = 0.0;
  std::vector<double> theta;
  std::vector<double> k_hat;
  std::vector<double> s_hat;
  std::vector<double> d_hat;
};

SymbolProfile symbol_profile(double h, double sigma_surface, double sigma_bulk);

/// CSV rows h,theta,k_hat,s_hat,d_hat,composite_E,composite_F_single,composite_F_double.
void write_symbol_csv(std::ostream& out, const std::vector<SymbolProfile>& profiles, bool header = true);

}  // namespace cutlgf
