#pragma once

// Reference values computed independently of the library.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// Free lattice Green's function g(m, n), -Delta_1 g = delta, g(0, 0) = 0, from
// the exact recursion on the potential kernel a = -4 g. Every value has the form
// p + q / pi with rational p, q; the diagonal is a(k, k) = (4/pi) sum_{j<=k} 1/(2j-1).
class ExactFreeLgf {
 public:
  explicit ExactFreeLgf(int radius) : r_(radius), p_(size()), q_(size()) {
    using boost::multiprecision::cpp_rational;
    cpp_rational diag = 0;
    for (int k = 1; k <= r_ + 1; ++k) {
      diag += cpp_rational(1, 2 * k - 1);
      set(k, k, 0, 4 * diag);
    }
    set(0, 0, 0, 0);
    set(1, 0, 1, 0);
    // a(m+1, n) from the five-point identity at (m, n), 0 <= n <= m.
    for (int m = 1; m <= r_; ++m) {
      for (int n = 0; n < m; ++n) {
        cpp_rational p = 4 * P(m, n) - P(m - 1, n) - P(m, n + 1) - P(m, n == 0 ? 1 : n - 1);
        cpp_rational q = 4 * Q(m, n) - Q(m - 1, n) - Q(m, n + 1) - Q(m, n == 0 ? 1 : n - 1);
        set(m + 1, n, p, q);
      }
      set(m + 1, m, 2 * P(m, m) - P(m, m - 1), 2 * Q(m, m) - Q(m, m - 1));
    }
  }

  int radius() const { return r_; }

  double operator()(int m, int n) const {
    m = std::abs(m);
    n = std::abs(n);
    if (n > m) std::swap(m, n);
    // p and q grow geometrically and cancel; combine them in extended precision.
    using Float = boost::multiprecision::cpp_bin_float_100;
    const Float a = Float(P(m, n)) + Float(Q(m, n)) / boost::math::constants::pi<Float>();
    return static_cast<double>(-a / 4);
  }

 private:
  using Rational = boost::multiprecision::cpp_rational;
  std::size_t size() const { return static_cast<std::size_t>(r_ + 2) * (r_ + 2); }
  std::size_t at(int m, int n) const { return static_cast<std::size_t>(m) * (r_ + 2) + n; }
  const Rational& P(int m, int n) const { return n > m ? p_[at(n, m)] : p_[at(m, n)]; }
  const Rational& Q(int m, int n) const { return n > m ? q_[at(n, m)] : q_[at(m, n)]; }
  void set(int m, int n, const Rational& p, const Rational& q) {
    p_[at(m, n)] = p;
    q_[at(m, n)] = q;
  }

  int r_;
  std::vector<Rational> p_, q_;
};

// Screened g(m, n) for sigma_h2 > 0 from the periodic trapezoid rule on the
// double Fourier integral (1/4pi^2) int int cos(m s + n t) / (4 - 2cos s - 2cos t + sigma).
// The integrand is analytic and periodic, so the error is the aliasing sum
// over g(m + kM, n + lM).
class TrapezoidLgf {
 public:
  TrapezoidLgf(double sigma_h2, int points) : M_(points), inv_(points * points) {
    for (int a = 0; a < M_; ++a) {
      for (int b = 0; b < M_; ++b) {
        const double s = 2.0 * std::numbers::pi * a / M_, t = 2.0 * std::numbers::pi * b / M_;
        inv_[a * M_ + b] = 1.0 / (4.0 - 2.0 * std::cos(s) - 2.0 * std::cos(t) + sigma_h2);
      }
    }
  }

  double operator()(int m, int n) const {
    double sum = 0.0;
    for (int a = 0; a < M_; ++a) {
      for (int b = 0; b < M_; ++b) {
        const long phase = (static_cast<long>(m) * a + static_cast<long>(n) * b) % M_;
        sum += std::cos(2.0 * std::numbers::pi * phase / M_) * inv_[a * M_ + b];
      }
    }
    return sum / (static_cast<double>(M_) * M_);
  }

 private:
  int M_;
  std::vector<double> inv_;
};

// Least-squares slope of log(y) against log(x).
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
