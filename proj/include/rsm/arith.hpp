// SPDX-License-Identifier: Apache-2.0
// Exact integer arithmetic: factorization, divisors, Moebius, Kronecker symbols
// and sieved tables for multiplicative functions.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rsm {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

struct FactoredInt {
  u64 value = 1;
  std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing
};

// Overflow-checked helpers; throw DomainError instead of wrapping.
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
// Extended Euclid: returns g = gcd(a, b) >= 0 with x*a + y*b = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
// Inverse of a modulo m (m >= 1, gcd(a, m) = 1).
i64 inv_mod(i64 a, i64 m);
i64 mod_floor(i64 a, i64 m);
i64 isqrt(i64 n);
bool is_square(i64 n, i64* root = nullptr);

bool is_prime(u64 n);
FactoredInt factorize(i64 n);
std::vector<u64> divisors(const FactoredInt& f);
std::vector<u64> divisors(i64 n);
int moebius(const FactoredInt& f);
int moebius(i64 n);
u64 euler_phi(const FactoredInt& f);

// D is a fundamental discriminant (D = 1 is excluded).
bool is_fundamental_discriminant(i64 D);
// Kronecker symbol (D/n) for arbitrary integers; no validation of D.
int kronecker_raw(i64 D, i64 n);
// Kronecker symbol with D restricted to fundamental discriminants or 1.
int kronecker(i64 D, i64 n);

// The quadratic character eta attached to a fundamental discriminant.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(i64 D);
  i64 discriminant() const { return D_; }
  i64 modulus() const { return D_ < 0 ? -D_ : D_; }
  int operator()(i64 n) const;

 private:
  i64 D_;
  std::vector<signed char> table_;  // values on residues mod |D|
};

// Smallest-prime-factor sieve on [0, n].
class Sieve {
 public:
  explicit Sieve(u64 n);
  u64 limit() const { return n_; }
  u64 spf(u64 m) const { return spf_[m]; }
  bool is_prime(u64 m) const { return m >= 2 && spf_[m] == m; }
  const std::vector<u64>& primes() const { return primes_; }

 private:
  u64 n_;
  std::vector<std::uint32_t> spf_;
  std::vector<u64> primes_;
};

// Fills out[m] for 1 <= m <= n with the multiplicative function whose value at
// prime powers is local(p, e, p^e). out[0] is set to 0.
template <class Local>
std::vector<double> multiplicative_table(const Sieve& sv, u64 n, Local local) {
  std::vector<double> out(n + 1, 0.0);
  if (n >= 1) out[1] = 1.0;
  for (u64 m = 2; m <= n; ++m) {
    u64 p = sv.spf(m), rest = m, pe = 1;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      pe *= p;
      ++e;
    }
    out[m] = out[rest] * local(p, e, pe);
  }
  return out;
}

}  // namespace rsm
