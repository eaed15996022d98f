// SPDX-License-Identifier: Apache-2.0
// Unit tests for gamma functions, cutoff functions and Whittaker functions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rsm/errors.hpp"
#include "rsm/shifted.hpp"
#include "rsm/special.hpp"

using namespace rsm;

namespace {
const ArchFactor kDeltaArch = ArchFactor::rankin_selberg({5.5});

// Forward Mellin transform int_0^inf V(y) y^{s-1} dy over u = log y.
cplx forward_mellin(const CutoffFunction& V, cplx s) {
  std::vector<double> x, w;
  gauss_legendre(24, x, w);
  cplx acc = 0.0;
  for (double a = -30.0; a < 6.0; a += 0.25) {
    for (size_t i = 0; i < x.size(); ++i) {
      const double u = a + 0.125 * (x[i] + 1.0);
      acc += 0.125 * w[i] * V.direct(std::exp(u)) * std::exp(s * u);
    }
  }
  return acc;
}

double fit_slope(const std::vector<double>& ly, const std::vector<double>& v) {
  std::vector<double> ys;
  for (double a : v) ys.push_back(std::log(std::fabs(a)));
  return least_squares_slope(ly, ys);
}
}  // namespace

TEST_CASE("log gamma and digamma") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(M_PI)) < 1e-14);
  CHECK(std::abs(log_gamma(10.0) - std::log(362880.0)) < 1e-13);
  for (cplx z : {cplx(3, 4), cplx(0.2, -7), cplx(-2.5, 1), cplx(40, 300), cplx(0.5, 900)}) {
    const cplx lhs = std::exp(log_gamma(z + 1.0) - log_gamma(z));
    CHECK(std::abs(lhs - z) <= 1e-12 * std::abs(z));
  }
  // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
  const cplx z(0.3, 2.0);
  CHECK(std::abs(std::exp(log_gamma(z) + log_gamma(1.0 - z)) - M_PI / std::sin(M_PI * z)) < 1e-12);
  CHECK(std::abs(digamma(1.0) + 0.57721566490153286) < 1e-14);
  CHECK(std::abs(digamma(cplx(3, 4)) - (log_gamma(cplx(3, 4 + 1e-6)) - log_gamma(cplx(3, 4 - 1e-6))) / cplx(0, 2e-6)) < 1e-7);
  CHECK(std::abs(rgamma(0.0)) == 0.0);
  CHECK(std::abs(rgamma(-3.0)) == 0.0);
  CHECK_THROWS_AS(log_gamma(-2.0), DomainError);
}

TEST_CASE("Gauss-Legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(20, x, w);
  double s0 = 0, s2 = 0, s38 = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s2 += w[i] * x[i] * x[i];
    s38 += w[i] * std::pow(x[i], 38);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(s38 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("archimedean factor of the Rankin-Selberg product") {
  const ArchFactor a = ArchFactor::rankin_selberg({5.5, 5.5});
  CHECK(a.shifts.size() == 8);
  // L_inf(s) = Gamma_C(s + 11)^2 Gamma_C(s)^2 with Gamma_C(s) = Gamma_R(s) Gamma_R(s + 1).
  const cplx s(1.3, 0.7);
  auto logGC = [](cplx z) { return std::log(2.0) - z * std::log(2.0 * M_PI) + log_gamma(z); };
  const cplx expect = 2.0 * logGC(s + 11.0) + 2.0 * logGC(s);
  CHECK(std::abs(std::exp(a.log_value(s) - expect) - 1.0) < 1e-12);
  const double h = 1e-5;
  const cplx fd = (a.log_value(s + h) - a.log_value(s - h)) / (2 * h);
  CHECK(std::abs(fd - a.log_derivative(s)) < 1e-8);
}

TEST_CASE("cutoff asymptotics") {
  const CutoffFunction V1(kDeltaArch, TestFunction{1, 0.0});
  const CutoffFunction V2(kDeltaArch, TestFunction{2, 0.0});
  CHECK(std::fabs(V1.direct(1e-4) - 1.0) <= 5e-3);
  CHECK(std::fabs(V1.direct(8.0) / V1.direct(1.0)) <= 1e-4);
  // V2(y) = -log y + Psi(0) + O(y^{1/2}) with Psi(0) = L_inf'/L_inf(1/2).
  const double psi0 = kDeltaArch.log_derivative(0.5).real();
  for (double y : {1e-4, 1e-6, 1e-8}) CHECK(std::fabs(V2.direct(y) - (-std::log(y) + psi0)) < 0.05 * std::sqrt(y) * 100);
  // Both contour branches agree at the switch point.
  CHECK(V1.direct(1.0 - 1e-12) == doctest::Approx(V1.direct(1.0)).epsilon(1e-10));
  CHECK(V2.direct(1.0 - 1e-12) == doctest::Approx(V2.direct(1.0)).epsilon(1e-10));
  for (double y : {10.0, 20.0, 100.0}) CHECK(std::fabs(V1.direct(y)) <= 1e-4);
}

TEST_CASE("forward Mellin transform recovers the defining transform") {
  for (int m : {1, 2}) {
    const CutoffFunction V(kDeltaArch, TestFunction{m, 0.0});
    for (cplx s : {cplx(2.0, 0.5), cplx(2.0, -0.5)}) {
      const cplx got = forward_mellin(V, s);
      const cplx want = V.transform(s);
      CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
    }
  }
}

TEST_CASE("modified cutoff is a difference of plain cutoffs") {
  for (int m : {1, 2}) {
    const CutoffFunction V(kDeltaArch, TestFunction{m, 0.0});
    const double log_rho = 2.0 * std::log(0.5);  // ratio 1/2, r = 2
    const CutoffFunction M(kDeltaArch, TestFunction{m, 0.0}, log_rho);
    for (double y : {1e-3, 0.1, 1.0, 3.0}) {
      const double diff = V.direct(y) - V.direct(y / std::exp(log_rho));
      CHECK(std::fabs(M.direct(y) - diff) < 1e-10 * std::max(1.0, std::fabs(diff)));
    }
    for (double y : {10.0, 30.0}) CHECK(std::fabs(M.direct(y)) <= 1e-4);
  }
}

TEST_CASE("cutoff cache interpolation") {
  CutoffFunction V(kDeltaArch, TestFunction{2, 0.25});
  V.prepare(1e-6, 50.0);
  double worst = 0;
  for (double y = 1.3e-6; y < 40.0; y *= 1.0731) worst = std::max(worst, std::fabs(V(y) - V.direct(y)) / std::max(1.0, std::fabs(V.direct(y))));
  CHECK(worst <= 1e-8);
  CHECK_THROWS_AS(V.direct(0.0), DomainError);
}

TEST_CASE("Whittaker: closed forms and series") {
  // W_{k, k - 1/2}(y) = e^{-y/2} y^k.
  for (auto [k, y] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {1.0, 0.01}, {2.0, 1e-5}, {1.5, 7.0}, {0.0, 30.0}}) {
    const double exact = std::exp(-0.5 * y) * std::pow(y, k);
    CHECK(whittaker_classical(k, cplx(k - 0.5, 0.0), y) == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK(whittaker_classical(0.0, cplx(0.5, 0.0), 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  for (auto [p, nu] : std::vector<std::pair<double, cplx>>{{0.0, {0.25, 0}}, {1.0, {0.3, 0}}, {-0.5, {0, 1.5}}, {2.0, {0, 0.2}}})
    for (double y : {0.01, 0.5, 2.0, 8.0})
      CHECK(whittaker_classical(p, nu, y) == doctest::Approx(whittaker_series(p, nu, y)).epsilon(1e-9));
  CHECK_THROWS_AS(whittaker_series(0.0, cplx(0.5, 0.0), 1.0), DomainError);
}

TEST_CASE("normalized Whittaker: zero convention and domain") {
  // 1/2 - nu + p = 0 for q = -2, nu = 1/2.
  CHECK(whittaker_normalized(-2, cplx(0.5, 0.0), 0.1) == 0.0);
  CHECK(whittaker_normalized(2, cplx(0.5, 0.0), 0.1) > 0.0);
  CHECK_THROWS_AS(whittaker_normalized(1, cplx(0.25, 0.0), 0.1), DomainError);
  CHECK_THROWS_AS(whittaker_normalized(0, cplx(0.75, 0.0), 0.1), DomainError);
  CHECK_THROWS_AS(whittaker_eval(WhittakerParams{0.0, {0.25, 0.0}, true}, 100.0), DomainError);
  CHECK_THROWS_AS(whittaker_eval(WhittakerParams{0.3, {0.25, 0.0}, true}, 1.0), DomainError);
  // Sign of y flips p.
  CHECK(whittaker_normalized(2, cplx(0, 1), -0.1) == doctest::Approx(whittaker_normalized(-2, cplx(0, 1), 0.1)));
}

TEST_CASE("Whittaker small-y exponents") {
  std::vector<double> ly, v2, v3;
  for (int i = 0; i <= 30; ++i) {
    const double y = std::pow(10.0, -5.0 + 3.0 * i / 30.0);
    ly.push_back(std::log(y));
    v2.push_back(whittaker_normalized(0, cplx(0.25, 0.0), y));
    v3.push_back(whittaker_normalized(1, cplx(0.0, 0.0), y));
  }
  CHECK(std::fabs(fit_slope(ly, v2) - 0.25) <= 0.05);
  CHECK(std::fabs(fit_slope(ly, v3) - 0.5) <= 0.05);
}

TEST_CASE("Whittaker polynomial growth in the spectral parameter") {
  const double base = std::max(1.0, std::fabs(whittaker_normalized(0, cplx(0.0, 1.0), 1e-3)));
  for (double t : {2.0, 4.0, 8.0, 16.0, 20.0})
    CHECK(std::fabs(whittaker_normalized(0, cplx(0.0, t), 1e-3)) <= base * std::pow(1.0 + t, 10.0));
}
