#include "cutlgf/errors.hpp"
#include "cutlgf/symbols.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace cutlgf;

TEST_CASE("stiffness symbol") {
  CHECK(stiffness_symbol(std::numbers::pi, 0.1, 0.0) == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(stiffness_symbol(0.0, 0.1, 0.0) == 0.0);
  CHECK(stiffness_symbol(0.0, 0.1, 7.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(stiffness_symbol(-1.3, 0.1, 0.0) == stiffness_symbol(1.3, 0.1, 0.0));
}

TEST_CASE("layer symbols") {
  const double h = 1.0 / 128;
  CHECK(layer_symbols(std::numbers::pi, h, 0.0).alpha == doctest::Approx(std::acosh(3.0)).epsilon(1e-14));
  CHECK(std::abs(std::acosh(3.0) - 1.76275) < 1e-5);
  for (double theta : {1e-2, 1e-3, 1e-4, 1e-6})
    CHECK(std::abs(layer_symbols(theta, h, 0.0).alpha / theta - 1.0) < theta);
  for (double sigma : {0.0, 0.1, 10.0, 1e3}) {
    for (double theta : resolved_frequencies(h)) {
      const LayerSymbols l = layer_symbols(theta, h, sigma);
      const double rhs = 2.0 - std::cos(theta) + 0.5 * sigma * h * h;
      CHECK(std::abs(std::cosh(l.alpha) - rhs) <= 1e-14 * rhs);
      CHECK(l.s_hat > 0.0);
      CHECK(l.d_hat > 0.0);
      CHECK(std::isfinite(l.s_hat));
    }
  }
  CHECK_THROWS_AS(layer_symbols(0.0, h, 0.0), DivergentMode);
  CHECK_NOTHROW(layer_symbols(0.0, h, 1.0));
  // Double-layer symbol tends to 1/2 on long waves.
  CHECK(layer_symbols(1e-6, h, 0.0).d_hat == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("single-layer composite symbol is flat") {
  for (double h : {1.0 / 64, 1.0 / 256, 1.0 / 1024}) {
    double lo = INFINITY, hi = 0.0;
    for (double theta : resolved_frequencies(h)) {
      const double v = composite_symbol(Mode::FSingle, theta, h, 0.0, 0.0) / h;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // k s^2 / h runs from 1/8 at theta = pi up to 1/4 on long waves.
    CHECK(lo >= 0.125 - 1e-12);
    CHECK(hi <= 0.25);
  }
}

TEST_CASE("predicted condition numbers") {
  for (int n : {128, 256, 512, 1024}) CHECK(predicted_condition(Mode::FSingle, 1.0 / n, 0.0, 0.0) < 20.0);
  for (int n : {128, 256, 512}) {
    const double h = 1.0 / n;
    const double growth = predicted_condition(Mode::FDouble, h / 2, 0.0, 0.0) / predicted_condition(Mode::FDouble, h, 0.0, 0.0);
    CHECK(growth == doctest::Approx(4.0).epsilon(0.3));
    const double e = predicted_condition(Mode::E, h / 2, 0.0, 0.0) / predicted_condition(Mode::E, h, 0.0, 0.0);
    CHECK(e == doctest::Approx(4.0).epsilon(0.3));
  }
  const double h = 1.0 / 256;
  const double matched = predicted_condition(Mode::FSingle, h, 10.0, 10.0);
  CHECK(matched < predicted_condition(Mode::FSingle, h, 10.0, 0.1));
  CHECK(matched < predicted_condition(Mode::FSingle, h, 20.0, 0.1));
  CHECK(matched == doctest::Approx(predicted_condition(Mode::FSingle, h / 4, 10.0, 10.0)).epsilon(0.2));
}

TEST_CASE("resolved frequencies") {
  const auto t = resolved_frequencies(1.0 / 64);
  REQUIRE(t.size() == 32);
  CHECK(t.front() == doctest::Approx(2.0 * std::numbers::pi / 64));
  CHECK(t.back() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("symbol csv") {
  std::ostringstream out;
  write_symbol_csv(out, {symbol_profile(1.0 / 8, 0.0, 0.0), symbol_profile(1.0 / 16, 1.0, 1.0)});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "h,theta,k_hat,s_hat,d_hat,composite_E,composite_F_single,composite_F_double");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
    ++rows;
  }
  CHECK(rows == 4 + 8);
}
