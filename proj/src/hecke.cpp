// SPDX-License-Identifier: Apache-2.0
#include "rsm/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Number-theoretic transform over several primes p = c * 2^k + 1.

struct NttPrime {
  u64 p, g;
};
constexpr NttPrime kNttPrimes[] = {
    {998244353ULL, 3}, {167772161ULL, 3}, {469762049ULL, 3}, {754974721ULL, 11}, {2013265921ULL, 31}};

u64 pw(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<u64>& a, bool invert, const NttPrime& P) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const u64 p = P.p;
  std::vector<u64> roots;
  for (size_t len = 2; len <= n; len <<= 1) {
    u64 w = pw(P.g, (p - 1) / len, p);
    if (invert) w = pw(w, p - 2, p);
    const size_t half = len / 2;
    roots.assign(half, 1);
    for (size_t i = 1; i < half; ++i) roots[i] = roots[i - 1] * w % p;
    for (size_t i = 0; i < n; i += len)
      for (size_t j = 0; j < half; ++j) {
        u64 u = a[i + j], v = a[i + j + half] * roots[j] % p;
        a[i + j] = u + v < p ? u + v : u + v - p;
        a[i + j + half] = u >= v ? u - v : u + p - v;
      }
  }
  if (invert) {
    const u64 ninv = pw(n % p, p - 2, p);
    for (auto& x : a) x = x * ninv % p;
  }
}

// Coefficients of J(q)^8 mod P.p through q^(len-1), J = prod (1-q^n)^3.
std::vector<u64> jacobi_eighth_power(size_t len, const NttPrime& P) {
  std::vector<u64> a(len, 0);
  for (u64 k = 0;; ++k) {
    u64 e = k * (k + 1) / 2;
    if (e >= len) break;
    u64 v = (2 * k + 1) % P.p;
    a[e] = (k & 1) ? (P.p - v) % P.p : v;
  }
  size_t n = 1;
  while (n < 2 * len) n <<= 1;
  for (int round = 0; round < 3; ++round) {
    a.resize(n, 0);
    ntt(a, false, P);
    for (auto& x : a) x = x * x % P.p;
    ntt(a, true, P);
    a.resize(len);
  }
  return a;
}

}  // namespace

std::vector<i128> ramanujan_tau_table(u64 n_max) {
  if (n_max > (1ULL << 24)) throw DomainError("ramanujan_tau_table: n_max beyond supported range 2^24");
  const size_t len = static_cast<size_t>(n_max);  // coefficient of q^(n-1) gives tau(n)
  std::vector<std::vector<u64>> res;
  for (const auto& P : kNttPrimes) res.push_back(jacobi_eighth_power(len, P));
  // Garner reconstruction into the symmetric range.
  const size_t np = std::size(kNttPrimes);
  long double M_ld = 1.0L;
  u128 M_wrap = 1;
  for (const auto& P : kNttPrimes) {
    M_ld *= static_cast<long double>(P.p);
    M_wrap *= P.p;
  }
  std::vector<i128> tau(n_max + 1, 0);
  std::vector<u64> digit(np);
  for (size_t i = 0; i < len; ++i) {
    for (size_t j = 0; j < np; ++j) {
      const u64 pj = kNttPrimes[j].p;
      u64 x = res[j][i];
      u64 prod = 1;
      u64 acc = 0;
      for (size_t t = 0; t < j; ++t) {
        acc = (acc + digit[t] % pj * prod) % pj;
        prod = prod * (kNttPrimes[t].p % pj) % pj;
      }
      digit[j] = (x + pj - acc) % pj * pw(prod, pj - 2, pj) % pj;
    }
    long double approx = 0.0L, scale = 1.0L;
    u128 wrap = 0, wscale = 1;
    for (size_t j = 0; j < np; ++j) {
      approx += static_cast<long double>(digit[j]) * scale;
      wrap += static_cast<u128>(digit[j]) * wscale;
      scale *= static_cast<long double>(kNttPrimes[j].p);
      wscale *= kNttPrimes[j].p;
    }
    if (approx > M_ld / 2) wrap -= M_wrap;
    tau[i + 1] = static_cast<i128>(wrap);
  }
  return tau;
}

std::vector<i128> ramanujan_tau_naive(u64 n_max) {
  // Euler's pentagonal series for prod (1 - q^n), then the 24th power by
  // repeated naive multiplication modulo 2^128.
  const size_t len = static_cast<size_t>(n_max);
  std::vector<u128> e(len, 0);
  for (i64 k = 0;; ++k) {
    bool any = false;
    for (i64 s : {k, -k}) {
      if (k == 0 && s == 0 && any) continue;
      i64 idx = s * (3 * s - 1) / 2;
      if (idx < static_cast<i64>(len)) {
        e[static_cast<size_t>(idx)] += (k & 1) ? static_cast<u128>(-1) : static_cast<u128>(1);
        any = true;
      }
      if (k == 0) break;
    }
    if (!any) break;
  }
  auto mult = [len](const std::vector<u128>& a, const std::vector<u128>& b) {
    std::vector<u128> c(len, 0);
    for (size_t i = 0; i < len; ++i)
      if (a[i])
        for (size_t j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  auto e2 = mult(e, e), e4 = mult(e2, e2), e8 = mult(e4, e4), e16 = mult(e8, e8), e24 = mult(e16, e8);
  std::vector<i128> tau(n_max + 1, 0);
  for (size_t i = 0; i < len; ++i) tau[i + 1] = static_cast<i128>(e24[i]);
  return tau;
}

std::string cache_directory() {
  const char* v = std::getenv("RSM_CACHE_DIR");
  return v ? std::string(v) : std::string();
}

double EigenSystem::lambda_p(u64 p) const {
  if (p > p_max) throw CoverageError(label + ": prime " + std::to_string(p) + " beyond coverage P_max = " +
                                         std::to_string(p_max), p);
  double v = lambda_at[p];
  if (std::isnan(v)) throw DomainError(label + ": " + std::to_string(p) + " is not a prime in the table");
  return v;
}

double EigenSystem::lambda_pk(u64 p, int k) const {
  if (k == 0) return 1.0;
  const double lp = lambda_p(p);
  if (level % static_cast<i64>(p) == 0) return std::pow(lp, k);
  double prev = 1.0, cur = lp;
  for (int j = 1; j < k; ++j) {
    double next = lp * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double EigenSystem::lambda(u64 n) const {
  double v = 1.0;
  for (auto [p, e] : factorize(static_cast<i64>(n)).factors) v *= lambda_pk(p, e);
  return v;
}

EigenSystem delta_eigensystem(u64 p_max) {
  if (p_max > 4000000ULL) throw DomainError("delta_eigensystem: P_max beyond supported range 4e6");
  EigenSystem e;
  e.label = "delta";
  e.weight = 12;
  e.level = 1;
  e.sign = 1;
  e.p_max = p_max;
  e.lambda_at.assign(p_max + 1, kNaN);
  Sieve sv(p_max);
  const std::string dir = cache_directory();
  std::filesystem::path file;
  if (!dir.empty()) {
    file = std::filesystem::path(dir) / ("delta_lambda_" + std::to_string(p_max) + ".bin");
    std::ifstream in(file, std::ios::binary);
    if (in) {
      std::vector<double> vals(sv.primes().size());
      in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
      if (in.gcount() == static_cast<std::streamsize>(vals.size() * sizeof(double))) {
        for (size_t i = 0; i < vals.size(); ++i) e.lambda_at[sv.primes()[i]] = vals[i];
        return e;
      }
    }
  }
  const auto tau = ramanujan_tau_table(p_max);
  std::vector<double> vals;
  for (u64 p : sv.primes()) {
    const long double lam = static_cast<long double>(tau[p]) / std::pow(static_cast<long double>(p), 5.5L);
    e.lambda_at[p] = static_cast<double>(lam);
    vals.push_back(e.lambda_at[p]);
    if (std::fabs(e.lambda_at[p]) > 2.0 + 1e-9) throw NumericError("Deligne bound violated for tau at " + std::to_string(p));
  }
  if (!file.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
    out.close();
    if (out) std::filesystem::rename(tmp, file, ec);
  }
  return e;
}

i128 weierstrass_discriminant(const WeierstrassModel& a) {
  const i128 a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  const i128 b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
  const i128 b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

i64 elliptic_ap_naive(const WeierstrassModel& a, u64 p) {
  const i64 P = static_cast<i64>(p);
  if (p == 2) {
    i64 count = 1;  // point at infinity
    for (i64 x = 0; x < 2; ++x)
      for (i64 y = 0; y < 2; ++y) {
        i64 lhs = y * y + a[0] * x * y + a[2] * y, rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
        if (mod_floor(lhs - rhs, 2) == 0) ++count;
      }
    return 3 - count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 over F_p.
  const i64 b2 = mod_floor(a[0] * a[0] + 4 * a[1], P), b4 = mod_floor(2 * a[3] + a[0] * a[2], P),
            b6 = mod_floor(a[2] * a[2] + 4 * a[4], P);
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (u64 y = 1; y < p; ++y) chi[y * y % p] = 1;
  i64 s = 0;
  for (i64 x = 0; x < P; ++x) {
    i64 v = ((4 * x % P * x % P + b2 * x) % P * x % P + 2 * b4 * x % P + b6) % P;
    s += chi[static_cast<size_t>(v)];
  }
  return -s;
}

namespace {

i64 mulm(i64 a, i64 b, i64 p) { return static_cast<i64>(static_cast<i128>(a) * b % p); }

i64 powm(i64 a, i64 e, i64 p) {
  i64 r = 1;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}

// Tonelli-Shanks square root of a quadratic residue a modulo an odd prime p.
i64 sqrt_mod(i64 a, i64 p) {
  if (a == 0) return 0;
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (powm(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 m = s, c = powm(z, q, p), t = powm(a, q, p), r = powm(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulm(tt, tt, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mulm(b, b, p);
    m = i;
    c = mulm(b, b, p);
    t = mulm(t, c, p);
    r = mulm(r, b, p);
  }
  return r;
}

struct ShortCurve {
  i64 A, B, p;
};
struct Pt {
  i64 x = 0, y = 0;
  bool inf = true;
};

Pt ec_add(const ShortCurve& E, const Pt& P, const Pt& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  const i64 p = E.p;
  i64 lam;
  if (P.x == Q.x) {
    if ((P.y + Q.y) % p == 0) return Pt{};
    lam = mulm((3 * mulm(P.x, P.x, p) + E.A) % p, inv_mod(2 * P.y % p, p), p);
  } else {
    lam = mulm(mod_floor(Q.y - P.y, p), inv_mod(mod_floor(Q.x - P.x, p), p), p);
  }
  Pt R;
  R.inf = false;
  R.x = mod_floor(mulm(lam, lam, p) - P.x - Q.x, p);
  R.y = mod_floor(mulm(lam, mod_floor(P.x - R.x, p), p) - P.y, p);
  return R;
}

Pt ec_neg(const ShortCurve& E, Pt P) {
  if (!P.inf) P.y = (E.p - P.y) % E.p;
  return P;
}

Pt ec_mul(const ShortCurve& E, Pt P, i64 k) {
  if (k < 0) {
    P = ec_neg(E, P);
    k = -k;
  }
  Pt R;
  while (k > 0) {
    if (k & 1) R = ec_add(E, R, P);
    P = ec_add(E, P, P);
    k >>= 1;
  }
  return R;
}

// Trace of Frobenius by baby-step giant-step on random points, intersecting
// the admissible traces until one remains. Returns false when undecided.
bool ap_bsgs(const WeierstrassModel& a, i64 p, i64& out) {
  const i64 b2 = mod_floor(a[0] * a[0] + 4 * a[1], p), b4 = mod_floor(2 * a[3] + a[0] * a[2], p),
            b6 = mod_floor(a[2] * a[2] + 4 * a[4], p);
  const i64 c4 = mod_floor(mulm(b2, b2, p) - 24 * b4, p);
  const i64 c6 = mod_floor(-mulm(mulm(b2, b2, p), b2, p) + 36 * mulm(b2, b4, p) - 216 * b6, p);
  const ShortCurve E{mod_floor(-27 * c4, p), mod_floor(-54 * c6, p), p};
  const i64 W = static_cast<i64>(std::floor(2.0 * std::sqrt(static_cast<double>(p)))) + 1;
  const i64 s = static_cast<i64>(std::ceil(std::sqrt(2.0 * W + 1.0)));
  const i64 width = 2 * s + 1;
  const i64 G = W / width + 2;
  std::vector<i64> cand;
  bool have = false;
  int points = 0;
  for (i64 x = 1; x < p && points < 24; ++x) {
    const i64 rhs = mod_floor(mulm(mulm(x, x, p), x, p) + mulm(E.A, x, p) + E.B, p);
    if (rhs == 0 || powm(rhs, (p - 1) / 2, p) != 1) continue;
    ++points;
    const Pt P{x, sqrt_mod(rhs, p), false};
    std::vector<std::pair<i64, i64>> baby;  // (x(jP), j), j = 1..s
    Pt J = P;
    for (i64 j = 1; j <= s; ++j) {
      if (!J.inf) baby.emplace_back(J.x, j);
      J = ec_add(E, J, P);
    }
    std::sort(baby.begin(), baby.end());
    const Pt step = ec_mul(E, P, width);
    const Pt negstep = ec_neg(E, step);
    Pt R = ec_add(E, ec_mul(E, P, p + 1), ec_mul(E, step, G));  // (p+1)P - g*step at g = -G
    std::vector<i64> found;
    for (i64 g = -G; g <= G; ++g) {
      if (R.inf) {
        found.push_back(g * width);
      } else {
        auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(R.x, i64{0}));
        for (; it != baby.end() && it->first == R.x; ++it) {
          found.push_back(g * width + it->second);
          found.push_back(g * width - it->second);
        }
      }
      R = ec_add(E, R, negstep);
    }
    std::vector<i64> ok;
    for (i64 t : found)
      if (t >= -W && t <= W && ec_mul(E, P, p + 1 - t).inf) ok.push_back(t);
    std::sort(ok.begin(), ok.end());
    ok.erase(std::unique(ok.begin(), ok.end()), ok.end());
    if (!have) {
      cand = ok;
      have = true;
    } else {
      std::vector<i64> both;
      std::set_intersection(cand.begin(), cand.end(), ok.begin(), ok.end(), std::back_inserter(both));
      cand = both;
    }
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    cand.erase(std::remove_if(cand.begin(), cand.end(), [&](i64 t) { return std::fabs(static_cast<double>(t)) > bound; }),
               cand.end());
    if (cand.size() == 1) {
      out = cand[0];
      return true;
    }
    if (cand.empty()) return false;
  }
  return false;
}

}  // namespace

i64 elliptic_ap(const WeierstrassModel& a, u64 p) {
  constexpr u64 kNaiveBelow = 1000;
  if (p < kNaiveBelow) return elliptic_ap_naive(a, p);
  const i128 disc = weierstrass_discriminant(a);
  if (disc % static_cast<i128>(p) == 0) return elliptic_ap_naive(a, p);
  i64 t = 0;
  if (ap_bsgs(a, static_cast<i64>(p), t)) return t;
  return elliptic_ap_naive(a, p);
}

EigenSystem elliptic_eigensystem(const WeierstrassModel& a, u64 p_max, i64 level, int sign, const std::string& label) {
  if (p_max > 1000000ULL) throw DomainError("elliptic_eigensystem: P_max beyond supported range 1e6");
  const i128 disc = weierstrass_discriminant(a);
  if (disc == 0) throw DomainError("elliptic_eigensystem: singular curve (discriminant 0)");
  EigenSystem e;
  std::ostringstream lab;
  lab << "ec[" << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << "," << a[4] << "]";
  e.label = label.empty() ? lab.str() : label;
  e.weight = 2;
  e.sign = sign;
  e.p_max = p_max;
  if (level <= 0) {
    i128 d = disc < 0 ? -disc : disc;
    i64 rad = 1;
    for (i64 p = 2; static_cast<i128>(p) * p <= d; ++p)
      if (d % p == 0) {
        rad = checked_mul(rad, p);
        while (d % p == 0) d /= p;
      }
    if (d > 1) {
      if (d > INT64_MAX) throw DomainError("elliptic_eigensystem: discriminant radical overflows");
      rad = checked_mul(rad, static_cast<i64>(d));
    }
    level = rad;
  }
  for (auto [p, ex] : factorize(level).factors)
    if (ex > 1) throw DomainError("elliptic_eigensystem: level must be squarefree");
  e.level = level;
  e.lambda_at.assign(p_max + 1, kNaN);
  Sieve sv(p_max);
  for (u64 p : sv.primes()) {
    const i64 ap = elliptic_ap(a, p);
    e.lambda_at[p] = static_cast<double>(ap) / std::sqrt(static_cast<double>(p));
  }
  return e;
}

EigenSystem elliptic_eigensystem_short(i64 a4, i64 a6, u64 p_max, i64 level, int sign) {
  return elliptic_eigensystem({0, 0, 0, a4, a6}, p_max, level, sign);
}

EigenSystem load_eigensystem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open eigenvalue table " + path);
  EigenSystem e;
  e.label = std::filesystem::path(path).stem().string();
  std::vector<std::pair<u64, double>> rows;
  bool have_weight = false, have_level = false, have_sign = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::string rest;
    if (key == "label") {
      if (!(ss >> e.label)) throw ParseError("label needs a value", lineno);
    } else if (key == "weight") {
      if (!(ss >> e.weight) || e.weight < 1) throw ParseError("bad weight", lineno);
      have_weight = true;
    } else if (key == "level") {
      if (!(ss >> e.level) || e.level < 1) throw ParseError("bad level", lineno);
      have_level = true;
    } else if (key == "sign") {
      if (!(ss >> e.sign) || (e.sign != 1 && e.sign != -1 && e.sign != 0)) throw ParseError("sign must be +1, -1 or 0", lineno);
      have_sign = true;
    } else {
      u64 p;
      double v;
      std::istringstream row(line);
      if (!(row >> p >> v)) throw ParseError("expected 'p value'", lineno);
      if (row >> rest) throw ParseError("trailing text after value", lineno);
      if (!is_prime(p)) throw ParseError(std::to_string(p) + " is not prime", lineno);
      if (!rows.empty() && p <= rows.back().first) throw ParseError("primes must be strictly increasing", lineno);
      if (!std::isfinite(v) || std::fabs(v) > 2.0 + 1e-9)
        throw ParseError("|lambda(" + std::to_string(p) + ")| exceeds the Deligne bound", lineno);
      rows.emplace_back(p, v);
    }
    if (ss >> rest && (key == "label" || key == "weight" || key == "level" || key == "sign"))
      throw ParseError("trailing text after header value", lineno);
  }
  if (!have_weight || !have_level || !have_sign) throw ParseError("header must give weight, level and sign", lineno);
  if (rows.empty()) throw ParseError("no primes", lineno);
  e.p_max = rows.back().first;
  e.lambda_at.assign(e.p_max + 1, kNaN);
  Sieve sv(e.p_max);
  size_t i = 0;
  for (u64 p : sv.primes()) {
    if (i >= rows.size() || rows[i].first != p) throw ParseError("missing prime " + std::to_string(p), lineno);
    e.lambda_at[p] = rows[i].second;
    ++i;
  }
  return e;
}

void save_eigensystem(const EigenSystem& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << "# Hecke eigenvalue table, Deligne normalization\n";
  out << "label " << e.label << "\nweight " << e.weight << "\nlevel " << e.level << "\nsign " << e.sign << "\n";
  out << std::setprecision(17);
  for (u64 p = 2; p <= e.p_max; ++p)
    if (!std::isnan(e.lambda_at[p])) out << p << " " << e.lambda_at[p] << "\n";
}

// ---------------------------------------------------------------------------

TensorCoefficients::TensorCoefficients(std::vector<EigenSystem> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("TensorCoefficients: need at least one factor");
}

i64 TensorCoefficients::level() const {
  i64 l = 1;
  for (const auto& f : factors_) l = lcm(l, f.level);
  return l;
}

int TensorCoefficients::sign() const {
  int s = 1;
  for (const auto& f : factors_) s *= f.sign;
  return s;
}

u64 TensorCoefficients::p_max() const {
  u64 p = factors_[0].p_max;
  for (const auto& f : factors_) p = std::min(p, f.p_max);
  return p;
}

std::string TensorCoefficients::label() const {
  std::string s;
  for (size_t i = 0; i < factors_.size(); ++i) s += (i ? "x" : "") + factors_[i].label;
  return s;
}

double TensorCoefficients::local(u64 p, int e) const {
  double v = 1.0;
  for (const auto& f : factors_) v *= f.lambda_pk(p, e);
  return v;
}

double TensorCoefficients::coefficient(u64 n) const {
  if (n == 0) throw DomainError("coefficient: n must be positive");
  if (n < table_.size()) return table_[n];
  double v = 1.0;
  for (auto [p, e] : factorize(static_cast<i64>(n)).factors) v *= local(p, e);
  return v;
}

void TensorCoefficients::prepare(u64 n_max) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (n_max + 1 <= table_.size()) return;
  // Every prime below n_max must be covered.
  Sieve sv(n_max);
  if (!sv.primes().empty() && sv.primes().back() > p_max()) {
    u64 first = 0;
    for (u64 p : sv.primes())
      if (p > p_max()) {
        first = p;
        break;
      }
    throw CoverageError(label() + ": coefficient table up to " + std::to_string(n_max) + " needs prime " +
                            std::to_string(first) + " beyond P_max = " + std::to_string(p_max()),
                        first);
  }
  table_ = multiplicative_table(sv, n_max, [this](u64 p, int e, u64) { return local(p, e); });
}

}  // namespace rsm
