// SPDX-License-Identifier: Apache-2.0
// Unit tests for Hecke eigenvalue providers and tensor coefficients.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "rsm/errors.hpp"
#include "rsm/hecke.hpp"

using namespace rsm;

namespace {
std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("rsm_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}
// Affine points of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_p by a double loop, plus infinity.
i64 brute_ap(const WeierstrassModel& a, i64 p) {
  i64 count = 1;
  auto m = [p](i64 v) { return ((v % p) + p) % p; };
  for (i64 x = 0; x < p; ++x)
    for (i64 y = 0; y < p; ++y)
      if (m(y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4]) == 0) ++count;
  return p + 1 - count;
}
}  // namespace

TEST_CASE("tau: fast table equals the naive q-expansion") {
  const auto fast = ramanujan_tau_table(2000);
  const auto slow = ramanujan_tau_naive(2000);
  CHECK(fast == slow);
  CHECK(static_cast<i64>(fast[1]) == 1);
  CHECK(static_cast<i64>(fast[2]) == -24);
  CHECK(static_cast<i64>(fast[3]) == 252);
  CHECK(static_cast<i64>(fast[5]) == 4830);
  CHECK(static_cast<i64>(fast[12]) == -370944);
  for (u64 m = 1; m <= 40; ++m)
    for (u64 n = 1; n * m <= 2000; ++n)
      if (gcd(static_cast<i64>(m), static_cast<i64>(n)) == 1) CHECK(fast[m * n] == fast[m] * fast[n]);
}

TEST_CASE("Delta eigenvalues") {
  const EigenSystem d = delta_eigensystem(20000);
  CHECK(d.weight == 12);
  CHECK(d.level == 1);
  CHECK(d.lambda_p(2) == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-14));
  CHECK(d.lambda(1) == 1.0);
  for (u64 p = 2; p <= 20000; ++p)
    if (is_prime(p)) CHECK(std::fabs(d.lambda_p(p)) <= 2.0);
  const auto tau = ramanujan_tau_table(5000);
  for (u64 n = 1; n <= 5000; ++n)
    CHECK(d.lambda(n) == doctest::Approx(static_cast<double>(tau[n]) / std::pow(static_cast<double>(n), 5.5)).epsilon(1e-11));
  CHECK_THROWS_AS(d.lambda_p(20011), CoverageError);
}

TEST_CASE("elliptic a_p: baby-step giant-step equals direct counting") {
  const std::vector<WeierstrassModel> curves{{0, -1, 1, -10, -20}, {0, 0, 1, -1, 0}, {1, 0, 1, 4, -6}, {0, 0, 0, -7, 10}};
  std::mt19937_64 rng(12345);
  for (const auto& a : curves) {
    const i128 disc = weierstrass_discriminant(a);
    for (int i = 0; i < 40; ++i) {
      u64 p = 1000 + rng() % 60000;
      while (!is_prime(p)) ++p;
      if (disc % static_cast<i128>(p) == 0) continue;
      CHECK(elliptic_ap(a, p) == elliptic_ap_naive(a, p));
      CHECK(std::abs(static_cast<double>(elliptic_ap(a, p))) <= 2.0 * std::sqrt(static_cast<double>(p)));
    }
    for (i64 p : {2, 3, 5, 7, 11, 13, 37, 101, 199})
      if (disc % p != 0 || p <= 13) CHECK(elliptic_ap_naive(a, static_cast<u64>(p)) == brute_ap(a, p));
  }
}

TEST_CASE("curve 11a") {
  const EigenSystem e = elliptic_eigensystem({0, -1, 1, -10, -20}, 5000, 11, 1, "11a");
  CHECK(e.level == 11);
  CHECK(e.lambda_p(2) == doctest::Approx(-2.0 / std::sqrt(2.0)));
  CHECK(e.lambda_p(3) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(e.lambda_p(5) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(e.lambda_p(7) == doctest::Approx(-2.0 / std::sqrt(7.0)));
  CHECK(e.lambda_p(11) == doctest::Approx(1.0 / std::sqrt(11.0)));
  // Bad prime: lambda(p^k) = lambda(p)^k.
  CHECK(e.lambda_pk(11, 3) == doctest::Approx(std::pow(e.lambda_p(11), 3)));
  // Good prime: Hecke recursion.
  const double x = e.lambda_p(2);
  CHECK(e.lambda(4) == doctest::Approx(x * x - 1.0));
  CHECK(e.lambda(8) == doctest::Approx(x * (x * x - 1.0) - x));
  const EigenSystem s = elliptic_eigensystem_short(-432, 8208, 2000);  // a short model isomorphic to 11a away from 2, 3
  for (u64 p = 5; p <= 2000; ++p)
    if (is_prime(p) && p != 11) CHECK(s.lambda_p(p) == doctest::Approx(e.lambda_p(p)));
  CHECK_THROWS_AS(elliptic_eigensystem_short(0, 0, 100), DomainError);
}

TEST_CASE("eigenvalue tables: round trip and validation") {
  const EigenSystem d = delta_eigensystem(3000);
  const auto path = (std::filesystem::temp_directory_path() / "rsm_test_delta.txt").string();
  save_eigensystem(d, path);
  const EigenSystem back = load_eigensystem(path);
  CHECK(back.weight == d.weight);
  CHECK(back.level == d.level);
  CHECK(back.p_max >= 2999);
  for (u64 p = 2; p <= 2999; ++p)
    if (is_prime(p)) CHECK(back.lambda_p(p) == d.lambda_p(p));

  CHECK_THROWS_WITH_AS(load_eigensystem(temp_file("hdr", "weight 12\nlevel 1\nsign 1\n")), "line 3: no primes", ParseError);
  CHECK_THROWS_AS(load_eigensystem(temp_file("bound", "weight 12\nlevel 1\nsign 1\n2 3.0\n")), ParseError);
  CHECK_THROWS_AS(load_eigensystem(temp_file("gap", "weight 2\nlevel 11\nsign 1\n2 -1.0\n5 0.1\n")), ParseError);
  CHECK_THROWS_AS(load_eigensystem(temp_file("junk", "weight 2\nlevel 11\nsign 1\n2 abc\n")), ParseError);
  CHECK_THROWS_AS(load_eigensystem(temp_file("nonprime", "weight 2\nlevel 11\nsign 1\n2 0.1\n3 0.1\n4 0.1\n")), ParseError);
  try {
    load_eigensystem(temp_file("line", "weight 2\nlevel 11\nsign 1\n2 0.5\n3 9\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(load_eigensystem("/nonexistent/table.txt"), DomainError);
}

TEST_CASE("tensor coefficients") {
  const EigenSystem d = delta_eigensystem(5000);
  const TensorCoefficients T1({d}), T2({d, d});
  CHECK(T1.rank() == 2);
  CHECK(T2.rank() == 4);
  CHECK(T1.coefficient(1) == 1.0);
  const double x = d.lambda_p(2);
  CHECK(T1.coefficient(4) == doctest::Approx(x * x - 1.0));
  CHECK(T2.coefficient(2) == doctest::Approx(0.28125).epsilon(1e-12));
  T2.prepare(4000);
  for (u64 n = 1; n <= 4000; ++n) CHECK(T2[n] == doctest::Approx(d.lambda(n) * d.lambda(n)));
  for (u64 m = 1; m <= 60; ++m)
    for (u64 n = 1; n <= 60; ++n)
      if (gcd(static_cast<i64>(m), static_cast<i64>(n)) == 1)
        CHECK(T1.coefficient(m * n) == doctest::Approx(T1.coefficient(m) * T1.coefficient(n)));
  CHECK_THROWS_AS(T1.coefficient(5003), CoverageError);
  CHECK_THROWS_AS(T1.prepare(20000), CoverageError);
  try {
    T1.coefficient(2 * 5003);
  } catch (const CoverageError& e) {
    CHECK(e.prime() == 5003);
  }
}
