// SPDX-License-Identifier: Apache-2.0
// Unit tests for shifted convolution sums and decay-exponent fits.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "rsm/errors.hpp"
#include "rsm/parallel.hpp"
#include "rsm/shifted.hpp"
#include "rsm/special.hpp"

using namespace rsm;

namespace {
const EigenSystem& delta() {
  static const EigenSystem d = delta_eigensystem(2200000);
  return d;
}
}  // namespace

TEST_CASE("windows") {
  // Compact bump mass by an independent midpoint rule in v = log2 y.
  double m = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = -1.0 + (i + 0.5) * 2.0 / n;
    m += std::exp(1.0 - 1.0 / (1.0 - v * v)) * std::log(2.0) * 2.0 / n;
  }
  CHECK(window_mass(Window::Compact) == doctest::Approx(m).epsilon(1e-8));
  CHECK(window_mass(Window::Gaussian) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(window_value(Window::Compact, 1.0) == doctest::Approx(1.0));
  CHECK(window_value(Window::Compact, 2.0) == 0.0);
  CHECK(window_value(Window::Compact, 0.5) == 0.0);
  CHECK(window_value(Window::Gaussian, 1.0) == 1.0);
  CHECK(parse_window("gaussian") == Window::Gaussian);
  CHECK_THROWS_AS(parse_window("box"), DomainError);
}

TEST_CASE("one-sided sum equals the two-sided naive sum") {
  const TensorCoefficients T1({delta()}), T2({delta(), delta()});
  for (const TensorCoefficients* T : {&T1, &T2})
    for (Window w : {Window::Compact, Window::Gaussian})
      for (i64 q : {1, 2, -3, 7, -50}) {
        const ShiftedSumSpec s{T, q, 1e4, w};
        const ShiftedSumResult a = shifted_sum(s), b = shifted_sum_naive(s);
        CHECK(a.S == doctest::Approx(b.S).epsilon(1e-12));
        CHECK(a.S_normalized == doctest::Approx(b.S_normalized).epsilon(1e-12));
        CHECK(a.terms == b.terms);
        CHECK(a.negative_arguments == b.negative_arguments);
      }
  const ShiftedSumResult r = shifted_sum({&T1, -50, 200.0, Window::Gaussian});
  CHECK(r.negative_arguments);
  CHECK(r.S == doctest::Approx(shifted_sum_naive({&T1, -50, 200.0, Window::Gaussian}).S).epsilon(1e-12));
  CHECK_FALSE(shifted_sum({&T1, -50, 200.0, Window::Compact}).negative_arguments);
}

TEST_CASE("product coefficients for the square") {
  const TensorCoefficients T1({delta()}), T2({delta(), delta()});
  const ShiftedSumSpec s2{&T2, 1, 1e4, Window::Compact};
  double expect = 0.0;
  for (i64 g = -200; g <= 200; ++g) {
    const double n = static_cast<double>(g * g + 1);
    const double l = delta().lambda(static_cast<u64>(g * g + 1));
    expect += l * l * window_value(Window::Compact, n / 1e4);
  }
  CHECK(shifted_sum(s2).S == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("thread count does not change the result") {
  const TensorCoefficients T({delta()});
  const ShiftedSumSpec s{&T, 3, 1e4, Window::Gaussian};
  set_thread_count(1);
  const double a = shifted_sum(s).S;
  set_thread_count(4);
  const double b = shifted_sum(s).S;
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("validation and coverage") {
  const TensorCoefficients T({delta()});
  CHECK_THROWS_AS(shifted_sum({&T, 0, 1e3, Window::Compact}), DomainError);
  CHECK_THROWS_AS(shifted_sum({&T, 1000, 1000.0, Window::Compact}), DomainError);
  CHECK_THROWS_AS(shifted_sum({&T, 1, 1e7, Window::Compact}), CoverageError);
  CHECK_THROWS_AS(exponent_fit(T, {1, 2, 4}, {1e3, 1e4, 1e5, 1e6}), DomainError);
  CHECK_THROWS_AS(exponent_fit(T, {1, 2, 4, 8}, {1e3, 2e3, 4e3, 8e3}), DomainError);
}

TEST_CASE("least squares") {
  double r = -1.0;
  CHECK(least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7}, &r) == doctest::Approx(2.0));
  CHECK(r == doctest::Approx(0.0));
  least_squares_slope({0, 1, 2, 3}, {0, 1, 0, 1}, &r);
  CHECK(r > 0.0);
  CHECK_THROWS_AS(least_squares_slope({1, 1}, {0, 1}), DomainError);
}

TEST_CASE("bound slopes come from the exponents") {
  const TensorCoefficients T({delta()});
  const ExponentFit f = exponent_fit(T, {1, 2, 4, 8}, {1e3, 3e3, 1e4, 1e5});
  CHECK(f.bound_slope_Y == doctest::Approx(-0.25 + kTheta / 2));
  CHECK(f.bound_slope_q == doctest::Approx(kDelta - kTheta / 2));
  CHECK(f.bound_slope_Y_unnormalized == doctest::Approx(0.25 + kTheta / 2));
  CHECK(f.grid.size() == 16);
  CHECK(f.slope_Y.size() == 4);
  CHECK(f.slope_q.size() == 4);
  CHECK(f.doubling_median > 0.0);
}

TEST_CASE("window invariance for nonnegative coefficients") {
  // For the square all terms are nonnegative, so the sums scale with the window mass.
  const TensorCoefficients T({delta(), delta()});
  const double mass_ratio = window_mass(Window::Gaussian) / window_mass(Window::Compact);
  std::vector<double> ratios;
  for (i64 q : {1, 2, 5, 11})
    for (double Y : {1e3, 3e3, 1e4}) {
      const double g = shifted_sum({&T, q, Y, Window::Gaussian}).S;
      const double c = shifted_sum({&T, q, Y, Window::Compact}).S;
      ratios.push_back(g / c);
    }
  std::sort(ratios.begin(), ratios.end());
  const double med = 0.5 * (ratios[5] + ratios[6]);
  CHECK(med <= mass_ratio * 1.5);
  CHECK(med >= mass_ratio / 1.5);
}
