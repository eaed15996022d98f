// SPDX-License-Identifier: Apache-2.0
// Unit tests for Dirichlet L-values, symmetric-square data, root numbers and central values.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rsm/errors.hpp"
#include "rsm/lseries.hpp"

using namespace rsm;

namespace {
const EigenSystem& delta_big() {
  static const EigenSystem d = delta_eigensystem(2200000);
  return d;
}
const EigenSystem& delta_small() {
  static const EigenSystem d = delta_eigensystem(200000);
  return d;
}
const EigenSystem& curve_11a() {
  static const EigenSystem e = elliptic_eigensystem({0, -1, 1, -10, -20}, 1000000, 11, 1, "11a");
  return e;
}
double direct_L(const QuadraticCharacter& chi, double s, long n_max) {
  double acc = 0.0;
  for (long n = n_max; n >= 1; --n) acc += chi(n) / std::pow(static_cast<double>(n), s);
  return acc;
}
}  // namespace

TEST_CASE("zeta and Dirichlet L-values") {
  CHECK(zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
  CHECK(zeta(4.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-14));
  CHECK(zeta(0.5) == doctest::Approx(-1.4603545088095868).epsilon(1e-12));
  CHECK(dirichlet_L(QuadraticCharacter(-4), 1.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-13));
  CHECK(dirichlet_L(QuadraticCharacter(-3), 1.0) == doctest::Approx(M_PI / (3.0 * std::sqrt(3.0))).epsilon(1e-13));
  CHECK(dirichlet_L(QuadraticCharacter(5), 1.0) ==
        doctest::Approx(2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0) / std::sqrt(5.0)).epsilon(1e-13));
  // L(3, chi_{-4}) = pi^3 / 32.
  CHECK(dirichlet_L(QuadraticCharacter(-4), 3.0) == doctest::Approx(std::pow(M_PI, 3) / 32.0).epsilon(1e-13));
  for (i64 D : {-7, -23, 8, 13})
    CHECK(dirichlet_L(QuadraticCharacter(D), 4.0) == doctest::Approx(direct_L(QuadraticCharacter(D), 4.0, 20000)).epsilon(1e-11));
  const QuadraticCharacter chi(-23);
  const double full = dirichlet_L(chi, 2.0);
  const double partial = partial_dirichlet_L(chi, 2.0, 6);
  CHECK(partial == doctest::Approx(full * (1.0 - chi(2) / 4.0) * (1.0 - chi(3) / 9.0)).epsilon(1e-13));
  const double d1 = dirichlet_L_log_derivative(chi, 1.0, 1e-4), d2 = dirichlet_L_log_derivative(chi, 1.0, 1e-5);
  CHECK(std::fabs(d1 - d2) < 1e-7);
  const double h = 1e-3;
  CHECK(d1 == doctest::Approx((std::log(dirichlet_L(chi, 1.0 + h)) - std::log(dirichlet_L(chi, 1.0 - h))) / (2 * h)).epsilon(1e-5));
  CHECK_THROWS_AS(dirichlet_L(QuadraticCharacter(-4), 0.0), DomainError);
}

TEST_CASE("symmetric square of Delta") {
  const EigenSystem& d = delta_big();
  const Sym2LFunction S(d);
  // Euler product oracle at s = 1.7.
  double log_euler = 0.0;
  for (u64 p = 2; p <= 2000000; ++p) {
    if (!is_prime(p)) continue;
    const double l2 = d.lambda_p(p) * d.lambda_p(p), x = std::pow(static_cast<double>(p), -1.7);
    log_euler -= std::log(1.0 - (l2 - 1.0) * x + (l2 - 1.0) * x * x - x * x * x);
  }
  CHECK(S.value(1.7) == doctest::Approx(std::exp(log_euler)).epsilon(1e-5));
  // R(1.7) against its Dirichlet series.
  const Sieve sv(1400000);
  const auto sq = multiplicative_table(sv, 1400000, [&](u64 p, int e, u64) { return d.lambda_pk(p, 2 * e); });
  double r2 = 0.0;
  for (u64 a = 1; a <= 1400000; ++a) r2 += sq[a] * std::pow(static_cast<double>(a), -1.7);
  CHECK(S.R(1.7, 1) == doctest::Approx(r2).epsilon(1e-4));
  // R(s) = L(s, Sym^2) / zeta(2s) for level 1.
  CHECK(S.R(1.0, 1) == doctest::Approx(S.value(1.0) / zeta(2.0)).epsilon(1e-12));
  const double rd1 = S.R_log_derivative(1.0, 1, 1e-4), rd2 = S.R_log_derivative(1.0, 1, 1e-5);
  CHECK(std::fabs(rd1 - rd2) < 1e-6);

  const TensorCoefficients T({d});
  const Sym2Value off = sym2_value(T, 1, 1.5);
  CHECK_FALSE(off.pole);
  CHECK(off.stability <= 1e-4);
  // zeta(2 s0) sum lambda(n)^2 n^{-s0} = zeta(s0) L(s0, Sym^2).
  CHECK(off.value == doctest::Approx(zeta(1.5) * S.value(1.5)).epsilon(1e-4));
  const Sym2Value at_one = sym2_value(T, 1, 1.0);
  CHECK(at_one.pole);
  // The growth slope estimates the residue L(1, Sym^2).
  CHECK(at_one.slope == doctest::Approx(S.value(1.0)).epsilon(1e-3));

  const TensorCoefficients small({delta_eigensystem(5000)});
  CHECK_THROWS_AS(sym2_value(small, 1, 1.5), CoverageError);
}

TEST_CASE("root numbers") {
  const TensorCoefficients T({delta_small()});
  const TensorCoefficients TT({delta_big(), delta_big()});
  for (i64 D : {-3, -4, -7, -23}) {
    const FormClassGroup G(D, 1);
    const auto ch = characters(G);
    const RankinSetup s = make_setup(T, G, ch.front());
    CHECK(s.root_number == -1);
    CHECK(s.stated_root_number == 1);
    CHECK(s.k == 1);
    const RootNumberProbe pr = probe_root_number(s);
    CHECK(pr.sign == -1);
    CHECK(pr.residual_minus < 1e-9);
    CHECK(pr.residual_plus > 1e-6);
    const RankinSetup s2 = make_setup(TT, G, ch.front());
    CHECK(s2.root_number == 1);
    CHECK(probe_root_number(s2).sign == 1);
  }
  const TensorCoefficients E({curve_11a()});
  const FormClassGroup G3(-3, 1);
  const RankinSetup se = make_setup(E, G3, characters(G3).front());
  CHECK(kronecker(-3, 11) == -1);
  CHECK(se.root_number == 1);
  CHECK(probe_root_number(se).sign == 1);
  const FormClassGroup G11(-11, 1);
  CHECK_THROWS_AS(make_setup(E, G11, characters(G11).front()), DomainError);
}

TEST_CASE("Y and the archimedean factor") {
  const TensorCoefficients T({delta_small()});
  CHECK(rankin_conductor_root(T, -23, 1, 1) == doctest::Approx(23.0));
  CHECK(rankin_conductor_root(T, -4, 1, 5) == doctest::Approx(4.0 * 25.0));
  const TensorCoefficients E({curve_11a()});
  CHECK(rankin_conductor_root(E, -7, 121, 1) == doctest::Approx(7.0 * 11.0));
  CHECK(rankin_arch(T).shifts.size() == 4);
}

TEST_CASE("character coefficients") {
  const FormClassGroup G(-23, 3);
  const ClassTables tab = build_class_tables(G, 3000);
  const auto chars = characters(G);
  std::vector<double> sum(3001, 0.0);
  for (const auto& om : chars) {
    const auto C = character_coefficients(tab, om, 3);
    for (u64 n = 1; n <= 3000; ++n) sum[n] += C[n];
    for (u64 n = 3; n <= 3000; n += 3) CHECK(C[n] == 0.0);
  }
  // Orthogonality: sum over characters isolates the principal class.
  for (u64 n = 1; n <= 3000; ++n) {
    if (n % 3 == 0) continue;
    CHECK(sum[n] == doctest::Approx(static_cast<double>(G.class_number() * count_representations(G, 0, static_cast<i64>(n)))));
  }
}

TEST_CASE("central values") {
  const TensorCoefficients T({delta_small()});
  for (i64 D : {-23, -47}) {
    const FormClassGroup G(D, 1);
    const auto chars = characters(G);
    std::vector<double> vals;
    for (const auto& om : chars) {
      const RankinSetup s = make_setup(T, G, om);
      CentralOptions a0, a1;
      a1.test_a = 0.25;
      const CentralValueResult r0 = central_value(s, a0), r1 = central_value(s, a1);
      CHECK(r0.k == 1);
      CHECK(r0.tail_estimate < 1e-8);
      CHECK(std::fabs(r0.value - r1.value) <= 1e-8 * std::max(1.0, std::fabs(r0.value)));
      // Balance independence of the derivative.
      CentralOptions b;
      b.balance = 1.7;
      CHECK(central_value(s, b).value == doctest::Approx(r0.value).epsilon(1e-8));
      // Odd sign: the k = 0 combination vanishes for any balance.
      CentralOptions f;
      f.force_k = 0;
      f.balance = 1.5;
      const CentralValueResult z = central_value(s, f);
      CHECK(z.forced_parity);
      CHECK(std::fabs(z.value) <= 1e-3 * std::fabs(r0.value));
      vals.push_back(r0.value);
    }
    // Conjugate characters share their central values.
    if (chars.size() == 3) CHECK(vals[1] == doctest::Approx(vals[2]).epsilon(1e-12));
  }
}

TEST_CASE("central values over an even-sign family") {
  const TensorCoefficients E({curve_11a()});
  const FormClassGroup G(-47, 1);
  for (const auto& om : characters(G)) {
    const RankinSetup s = make_setup(E, G, om);
    CHECK(s.k == 0);
    CentralOptions a0, a1, b;
    a1.test_a = 0.25;
    b.balance = 1.5;
    const double v = central_value(s, a0).value;
    CHECK(central_value(s, a1).value == doctest::Approx(v).epsilon(1e-6));
    CHECK(central_value(s, b).value == doctest::Approx(v).epsilon(1e-6));
  }
}

TEST_CASE("imprimitive characters evaluate their primitive L-function") {
  const TensorCoefficients T({delta_small()});
  // Every character of the order of conductor 4 or 5 factors through an order of smaller conductor or is primitive;
  // the value must agree with the same character read on the order of its own conductor.
  for (auto [D, c] : std::vector<std::pair<i64, i64>>{{-4, 5}, {-7, 4}, {-23, 2}}) {
    const FormClassGroup G(D, c);
    for (const auto& om : characters(G)) {
      const i64 f = om.conductor();
      if (f == c) continue;
      const FormClassGroup Gf(D, f);
      double best = 1e300;
      const double v = central_value(make_setup(T, G, om)).value;
      for (const auto& cand : characters(Gf)) {
        if (cand.conductor() != f) continue;
        best = std::min(best, std::fabs(central_value(make_setup(T, Gf, cand)).value - v));
      }
      CHECK(best <= 1e-9 * std::max(1.0, std::fabs(v)));
      CentralOptions other;
      other.test_a = 0.25;
      CHECK(central_value(make_setup(T, G, om), other).value == doctest::Approx(v).epsilon(1e-6));
    }
  }
}
