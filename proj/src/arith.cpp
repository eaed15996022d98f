// SPDX-License-Identifier: Apache-2.0
#include "rsm/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsm/errors.hpp"

namespace rsm {

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw DomainError("64-bit overflow in " + std::to_string(a) + " * " + std::to_string(b));
  return r;
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw DomainError("64-bit overflow in " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

i64 gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd(a, b), b < 0 ? -b : b);
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 inv_mod(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 x, y;
  if (ext_gcd(mod_floor(a, m), m, x, y) != 1)
    throw DomainError("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod_floor(x, m);
}

i64 isqrt(i64 n) {
  if (n < 0) throw DomainError("isqrt of negative number");
  i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n, i64* root) {
  if (n < 0) return false;
  i64 r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = static_cast<u64>(gcd(static_cast<i64>(q), static_cast<i64>(n)));
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = static_cast<u64>(gcd(static_cast<i64>(x > ys ? x - ys : ys - x), static_cast<i64>(n)));
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit inputs.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInt factorize(i64 n_signed) {
  if (n_signed <= 0) throw DomainError("factorize: input must be positive, got " + std::to_string(n_signed));
  u64 n = static_cast<u64>(n_signed);
  FactoredInt f;
  f.value = n;
  std::vector<u64> primes;
  for (u64 p : {2ULL, 3ULL, 5ULL}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  // Wheel modulo 30 up to 10^7.
  static const int gaps[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  const u64 wheel_limit = 10000000ULL;
  u64 p = 7;
  for (int i = 0; p <= wheel_limit && p * p <= n; p += gaps[i], i = (i + 1) & 7) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  for (u64 q : primes) {
    if (!f.factors.empty() && f.factors.back().first == q)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(q, 1);
  }
  return f;
}

std::vector<u64> divisors(const FactoredInt& f) {
  std::vector<u64> d{1};
  for (auto [p, e] : f.factors) {
    size_t base = d.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<u64> divisors(i64 n) { return divisors(factorize(n)); }

int moebius(const FactoredInt& f) {
  int s = 1;
  for (auto [p, e] : f.factors) {
    if (e >= 2) return 0;
    s = -s;
  }
  return s;
}

int moebius(i64 n) { return moebius(factorize(n)); }

u64 euler_phi(const FactoredInt& f) {
  u64 r = 1;
  for (auto [p, e] : f.factors) {
    r *= p - 1;
    for (int k = 1; k < e; ++k) r *= p;
  }
  return r;
}

bool is_fundamental_discriminant(i64 D) {
  if (D == 0 || D == 1) return false;
  i64 m = mod_floor(D, 4);
  auto squarefree = [](i64 x) {
    if (x == 0) return false;
    for (auto [p, e] : factorize(x < 0 ? -x : x).factors)
      if (e >= 2) return false;
    return true;
  };
  if (m == 1) return squarefree(D);
  if (m == 0) {
    i64 q = D / 4;
    i64 r = mod_floor(q, 4);
    return (r == 2 || r == 3) && squarefree(q);
  }
  return false;
}

int kronecker_raw(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    if (v & 1) {
      i64 r = mod_floor(a, 8);
      if (r == 3 || r == 5) result = -result;
    }
  }
  // Jacobi symbol (a/n) for odd n > 0.
  a = mod_floor(a, n);
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker(i64 D, i64 n) {
  if (D != 1 && !is_fundamental_discriminant(D))
    throw DomainError("kronecker: " + std::to_string(D) + " is not a fundamental discriminant");
  return kronecker_raw(D, n);
}

QuadraticCharacter::QuadraticCharacter(i64 D) : D_(D) {
  if (D != 1 && !is_fundamental_discriminant(D))
    throw DomainError("QuadraticCharacter: " + std::to_string(D) + " is not a fundamental discriminant");
  i64 m = modulus();
  table_.resize(static_cast<size_t>(m));
  for (i64 r = 0; r < m; ++r) table_[static_cast<size_t>(r)] = static_cast<signed char>(kronecker_raw(D, r));
  if (m == 1) table_[0] = 1;
}

int QuadraticCharacter::operator()(i64 n) const {
  if (n >= 0) return table_[static_cast<size_t>(n % modulus())];
  return kronecker_raw(D_, n);
}

Sieve::Sieve(u64 n) : n_(n), spf_(n + 1, 0) {
  for (u64 i = 2; i <= n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(i);
    }
    for (u64 p : primes_) {
      if (p > spf_[i] || i * p > n) break;
      spf_[i * p] = static_cast<std::uint32_t>(p);
    }
  }
}

}  // namespace rsm
