// SPDX-License-Identifier: Apache-2.0
#include "rsm/lseries.hpp"

#include <cmath>
#include <limits>

#include "rsm/errors.hpp"
#include "rsm/parallel.hpp"

namespace rsm {

namespace {

// zeta(s, x) - 1/(s - 1) by Euler-Maclaurin, valid for real s > -10 and x > 0.
double hurwitz_regular(double s, double x) {
  constexpr int kN = 24;
  static const double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
  double sum = 0.0;
  for (int n = 0; n < kN; ++n) sum += std::pow(n + x, -s);
  const double a = kN + x, la = std::log(a);
  sum += (s == 1.0) ? -la : std::expm1((1.0 - s) * la) / (s - 1.0);
  sum += 0.5 * std::pow(a, -s);
  double fact = 1.0, poch = s, apow = std::pow(a, -s - 1.0);
  for (int k = 1; k <= 7; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    sum += bern[k - 1] / fact * poch * apow;
    poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
    apow /= a * a;
  }
  return sum;
}

std::vector<u64> prime_divisors(i64 n) {
  std::vector<u64> out;
  if (n <= 1) return out;
  for (const auto& [p, e] : factorize(n).factors) out.push_back(static_cast<u64>(p));
  return out;
}

}  // namespace

double zeta(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  if (!(s > 0.0)) throw DomainError("zeta: s must be positive");
  return hurwitz_regular(s, 1.0) + 1.0 / (s - 1.0);
}

double dirichlet_L(const QuadraticCharacter& chi, double s) {
  if (!(s > 0.0)) throw DomainError("dirichlet_L: s must be positive");
  const i64 q = chi.modulus();
  if (q == 1) return zeta(s);
  double acc = 0.0;
  for (i64 a = 1; a < q; ++a) {
    const int v = chi(a);
    if (v != 0) acc += v * hurwitz_regular(s, static_cast<double>(a) / static_cast<double>(q));
  }
  const double out = acc * std::pow(static_cast<double>(q), -s);
  if (!std::isfinite(out)) throw NumericError("dirichlet_L: non-finite value");
  return out;
}

double partial_dirichlet_L(const QuadraticCharacter& chi, double s, i64 excluded) {
  double v = dirichlet_L(chi, s);
  for (u64 p : prime_divisors(excluded)) v *= 1.0 - chi(static_cast<i64>(p)) * std::pow(static_cast<double>(p), -s);
  return v;
}

double dirichlet_L_log_derivative(const QuadraticCharacter& chi, double s, double h, i64 excluded) {
  const double up = partial_dirichlet_L(chi, s + h, excluded), dn = partial_dirichlet_L(chi, s - h, excluded);
  if (!(up > 0.0 && dn > 0.0)) throw NumericError("dirichlet_L_log_derivative: L must be positive near s");
  return (std::log(up) - std::log(dn)) / (2.0 * h);
}

// ---------------------------------------------------------------------------

Sym2Value sym2_value(const TensorCoefficients& T, i64 excluded, double s0, double tolerance) {
  if (!(s0 >= 1.0)) throw DomainError("sym2_value: s0 must be >= 1");
  Sym2Value out;
  out.s0 = s0;
  const double X = std::min(1e5, std::floor(static_cast<double>(T.p_max()) / 24.0));
  if (X < 500.0)
    throw CoverageError("sym2_value: coefficients exhausted (need p_max >= 12000)", T.p_max() + 1);
  out.X = X;
  const u64 n_max = static_cast<u64>(24.0 * X);
  T.prepare(n_max);
  const auto& C = T.table();
  double zeta_part = zeta(2.0 * s0);
  for (u64 p : prime_divisors(excluded)) zeta_part *= 1.0 - std::pow(static_cast<double>(p), -2.0 * s0);
  for (int j = 0; j < 3; ++j) {
    const double Xj = X * static_cast<double>(1 << j);
    const u64 top = static_cast<u64>(6.0 * Xj);
    double acc = 0.0;
    for (u64 n = 1; n <= top; ++n) {
      if (excluded > 1 && gcd(static_cast<i64>(n), excluded) != 1) continue;
      const double r = static_cast<double>(n) / Xj;
      acc += C[n] * C[n] * std::pow(static_cast<double>(n), -s0) * std::exp(-r * r);
    }
    out.raw[j] = zeta_part * acc;
  }
  const double d1 = out.raw[1] - out.raw[0], d2 = out.raw[2] - out.raw[1];
  out.slope = d2 / std::log(2.0);
  const double g = std::pow(2.0, 1.0 - s0);
  if (1.0 - g < 1e-9) {
    out.pole = std::fabs(d1) > tolerance && std::fabs(d2 - d1) <= 0.05 * std::fabs(d1);
    out.value = out.pole ? std::numeric_limits<double>::quiet_NaN() : out.raw[2];
    out.stability = std::fabs(d2);
    return out;
  }
  const double e1 = (out.raw[1] - g * out.raw[0]) / (1.0 - g);
  const double e2 = (out.raw[2] - g * out.raw[1]) / (1.0 - g);
  out.value = e2;
  out.stability = std::fabs(e2 - e1);
  return out;
}

// ---------------------------------------------------------------------------

Sym2LFunction::Sym2LFunction(const EigenSystem& f) : f_(f) {
  shifts_ = {-1.0, -(f.weight - 1.0), -static_cast<double>(f.weight)};
  // Decide the length from the decay of the two cutoffs at s = 1 and s = 0.
  const double sqrtQ = static_cast<double>(f.level);
  auto cutoff_at = [&](double s) {
    ArchFactor a;
    for (double mu : shifts_) a.shifts.push_back(mu - (s - 0.5));
    return CutoffFunction(a, TestFunction{1, 0.0});
  };
  const CutoffFunction v1 = cutoff_at(1.0), v0 = cutoff_at(0.0);
  u64 n_cut = 16;
  while (std::fabs(v1.direct(n_cut / sqrtQ)) > 1e-20 || std::fabs(v0.direct(n_cut / sqrtQ)) > 1e-20) {
    n_cut *= 2;
    if (n_cut > (u64{1} << 22)) throw NumericError("Sym2LFunction: cutoff does not decay");
  }
  n_cut *= 2;
  if (!f.covers(n_cut)) throw CoverageError("Sym2LFunction: eigenvalues needed up to " + std::to_string(n_cut), n_cut);
  Sieve sv(n_cut);
  const i64 N = f.level;
  coeff_ = multiplicative_table(sv, n_cut, [&](u64 p, int e, u64) {
    const double lam = f_.lambda_p(p);
    if (N % static_cast<i64>(p) == 0) return std::pow(lam * lam, e);
    const double u1 = lam * lam - 1.0;  // (1 - x)(1 - (lam^2 - 2) x + x^2) = 1 - u1 x + u1 x^2 - x^3
    double c0 = 1.0, c1 = 0.0, c2 = 0.0;  // c_e, c_{e-1}, c_{e-2}
    for (int j = 1; j <= e; ++j) {
      const double next = u1 * c0 - u1 * c1 + c2;
      c2 = c1;
      c1 = c0;
      c0 = next;
    }
    return c0;
  });
}

double Sym2LFunction::value(double s) const {
  if (!(s > 0.0 && s < 1.75)) throw DomainError("Sym2LFunction: s must lie in (0, 1.75)");
  const double sqrtQ = static_cast<double>(f_.level);
  auto cutoff_at = [&](double z) {
    ArchFactor a;
    for (double mu : shifts_) a.shifts.push_back(mu - (z - 0.5));
    return CutoffFunction(a, TestFunction{1, 0.0});
  };
  const CutoffFunction vs = cutoff_at(s), vd = cutoff_at(1.0 - s);
  ArchFactor gam;
  gam.shifts = shifts_;
  const double factor =
      std::exp((0.5 - s) * 2.0 * std::log(sqrtQ) + (gam.log_value(1.0 - s) - gam.log_value(s)).real());
  double a = 0.0, b = 0.0;
  for (u64 n = 1; n < coeff_.size(); ++n) {
    if (coeff_[n] == 0.0) continue;
    const double y = static_cast<double>(n) / sqrtQ, ln = std::log(static_cast<double>(n));
    a += coeff_[n] * std::exp(-s * ln) * vs.direct(y);
    b += coeff_[n] * std::exp((s - 1.0) * ln) * vd.direct(y);
  }
  return a + factor * b;
}

double Sym2LFunction::local_R(u64 p, double s) const {
  const double x = std::pow(static_cast<double>(p), -s), lam = f_.lambda_p(p);
  if (f_.level % static_cast<i64>(p) == 0) return 1.0 / (1.0 - lam * lam * x);
  return (1.0 + x) / (1.0 - (lam * lam - 2.0) * x + x * x);
}

double Sym2LFunction::R(double s, i64 excluded) const {
  double v = value(s) / zeta(2.0 * s);
  for (u64 p : prime_divisors(f_.level)) v /= 1.0 - std::pow(static_cast<double>(p), -2.0 * s);
  for (u64 p : prime_divisors(excluded)) v /= local_R(p, s);
  return v;
}

double Sym2LFunction::R_log_derivative(double s, i64 excluded, double h) const {
  const double up = R(s + h, excluded), dn = R(s - h, excluded);
  if (!(up > 0.0 && dn > 0.0)) throw NumericError("R_log_derivative: R must be positive near s");
  return (std::log(up) - std::log(dn)) / (2.0 * h);
}

// ---------------------------------------------------------------------------

ArchFactor rankin_arch(const TensorCoefficients& T) {
  std::vector<double> hw;
  for (const auto& f : T.factors()) hw.push_back(f.half_weight());
  return ArchFactor::rankin_selberg(hw);
}

double rankin_conductor_root(const TensorCoefficients& T, i64 D_K, i64 basechange_conductor, i64 character_conductor) {
  const double r = T.rank();
  return std::pow(static_cast<double>(std::llabs(D_K)), 0.5 * r) * std::sqrt(static_cast<double>(basechange_conductor)) *
         std::pow(static_cast<double>(character_conductor), r);
}

namespace {
void check_coprime(const TensorCoefficients& T, const QuadOrder& O) {
  const i64 level = T.level();
  if (gcd(level, checked_mul(std::llabs(O.fundamental_discriminant), O.conductor)) != 1)
    throw DomainError("level " + std::to_string(level) + " must be coprime to D_K * c = " +
                      std::to_string(std::llabs(O.fundamental_discriminant) * O.conductor) +
                      " (hypothesis of the root number formula)");
}
}  // namespace

int root_number(const RankinSetup& setup) {
  const QuadOrder& O = setup.order();
  check_coprime(*setup.tensor, O);
  const QuadraticCharacter eta(O.fundamental_discriminant);
  const int eta_level = eta(setup.tensor->level());
  const int eta_minus = O.fundamental_discriminant < 0 ? -1 : 1;
  const int half_rank = setup.tensor->rank() / 2;
  return eta_level * ((half_rank % 2 == 1) ? eta_minus : 1);
}

int stated_root_number(const RankinSetup& setup) {
  const QuadOrder& O = setup.order();
  check_coprime(*setup.tensor, O);
  const QuadraticCharacter eta(O.fundamental_discriminant);
  return eta(setup.tensor->level()) * setup.tensor->sign();
}

RankinSetup make_setup(const TensorCoefficients& T, const FormClassGroup& G, const RingClassCharacter& omega,
                       i64 basechange_conductor) {
  if (G.order().discriminant >= 0) throw DomainError("RankinSetup: the order must be imaginary");
  if (&omega.group() != &G) throw DomainError("RankinSetup: character belongs to a different class group");
  RankinSetup s;
  s.tensor = &T;
  s.group = &G;
  s.character = omega;
  const i64 level = T.level();
  s.basechange_conductor = basechange_conductor > 0 ? basechange_conductor : checked_mul(level, level);
  s.Y = rankin_conductor_root(T, G.order().fundamental_discriminant, s.basechange_conductor, omega.conductor());
  s.root_number = root_number(s);
  s.stated_root_number = stated_root_number(s);
  s.k = s.root_number == 1 ? 0 : 1;
  return s;
}

// ---------------------------------------------------------------------------

SmoothedKernel build_kernel(CutoffFunction& V, const QuadraticCharacter& eta, i64 m_coprime, double scale, double cut) {
  if (!(scale > 0.0 && cut > 0.0)) throw DomainError("build_kernel: scale and cut must be positive");
  SmoothedKernel k;
  k.scale = scale;
  k.cut = cut;
  const double lim_d = std::floor(cut * scale);
  const u64 lim = static_cast<u64>(lim_d);
  k.n_max = lim;
  k.K.assign(lim + 1, 0.0);
  k.harmonic.assign(lim + 1, 0.0);
  k.v_at_cut = std::fabs(V(cut));
  if (lim == 0) return k;
  const u64 m_max = isqrt(static_cast<i64>(lim));
  std::vector<double> em(m_max + 1, 0.0);
  for (u64 m = 1; m <= m_max; ++m)
    if (m_coprime <= 1 || gcd(static_cast<i64>(m), m_coprime) == 1) em[m] = eta(static_cast<i64>(m)) / static_cast<double>(m);
  if (1.0 / scale < cut) V.prepare(std::min(1.0, 0.999 / scale), cut * 1.001);
  constexpr size_t kBlock = 4096;
  std::vector<u64> block_pairs((lim + kBlock) / kBlock + 1, 0);
  parallel_blocks(lim, kBlock, [&](size_t b, size_t lo, size_t hi) {
    u64 pairs = 0;
    for (size_t i = lo; i < hi; ++i) {
      const u64 n = i + 1;
      double acc = 0.0, harm = 0.0;
      for (u64 m = 1; m * m * n <= lim; ++m) {
        if (em[m] == 0.0) continue;
        acc += em[m] * V(static_cast<double>(m * m * n) / scale);
        harm += std::fabs(em[m]);
        ++pairs;
      }
      k.K[n] = acc;
      k.harmonic[n] = harm;
    }
    block_pairs[b] = pairs;
  });
  for (u64 p : block_pairs) k.pairs += p;
  return k;
}

KernelSum apply_kernel(const SmoothedKernel& kernel, const std::vector<double>& C, const std::vector<double>& b) {
  if (C.size() <= kernel.n_max || b.size() <= kernel.n_max)
    throw CoverageError("apply_kernel: coefficient tables shorter than the kernel", kernel.n_max);
  constexpr size_t kBlock = 1 << 16;
  const size_t nb = (kernel.n_max + kBlock - 1) / kBlock;
  std::vector<KernelSum> parts(nb);
  parallel_blocks(kernel.n_max, kBlock, [&](size_t blk, size_t lo, size_t hi) {
    KernelSum s;
    for (size_t i = lo; i < hi; ++i) {
      const u64 n = i + 1;
      const double cb = C[n] * b[n];
      if (cb == 0.0 || kernel.harmonic[n] == 0.0) continue;
      const double inv = 1.0 / std::sqrt(static_cast<double>(n));
      s.value += cb * inv * kernel.K[n];
      s.abs_sum += std::fabs(cb) * inv * kernel.harmonic[n];
      ++s.terms;
    }
    parts[blk] = s;
  });
  KernelSum out;
  for (const auto& p : parts) {
    out.value += p.value;
    out.abs_sum += p.abs_sum;
    out.terms += p.terms;
  }
  return out;
}

ClassTables build_class_tables(const FormClassGroup& G, u64 n_max) {
  ClassTables t;
  t.n_max = n_max;
  t.w = G.order().unit_count;
  t.counts.resize(static_cast<size_t>(G.class_number()));
  parallel_blocks(t.counts.size(), 1, [&](size_t, size_t lo, size_t) {
    t.counts[lo] = form_point_table(G.form(static_cast<int>(lo)), static_cast<i64>(n_max));
  });
  return t;
}

std::vector<double> character_coefficients(const ClassTables& tables, const RingClassCharacter& omega, i64 coprime_to) {
  std::vector<double> out(tables.n_max + 1, 0.0);
  for (size_t a = 0; a < tables.counts.size(); ++a) {
    const double v = omega.real_value(static_cast<int>(a)) / tables.w;
    const auto& cnt = tables.counts[a];
    for (u64 n = 1; n <= tables.n_max; ++n)
      if (cnt[n]) out[n] += v * cnt[n];
  }
  if (coprime_to > 1)
    for (u64 p : prime_divisors(coprime_to))
      for (u64 n = p; n <= tables.n_max; n += p) out[n] = 0.0;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Unbalanced {
  std::vector<KernelSum> sums;
  double cut = 0.0;
  double v_at_cut = 0.0;
};

// Dirichlet coefficients of the primitive character underlying omega, read on the order of conductor f(omega).
std::vector<double> primitive_coefficients(const FormClassGroup& G, const RingClassCharacter& omega, u64 n_max) {
  const i64 f = omega.conductor();
  if (f == G.order().conductor) return character_coefficients(build_class_tables(G, n_max), omega, f);
  const FormClassGroup Gf(G.order().fundamental_discriminant, f);
  std::vector<int> image(static_cast<size_t>(G.class_number()));
  for (int A = 0; A < G.class_number(); ++A) image[static_cast<size_t>(A)] = Gf.index_of(G.project(A, f));
  for (const auto& cand : characters(Gf)) {
    if (cand.conductor() != f) continue;
    bool same = true;
    for (int A = 0; A < G.class_number() && same; ++A)
      same = std::abs(cand.value(image[static_cast<size_t>(A)]) - omega.value(A)) < 1e-9;
    if (same) return character_coefficients(build_class_tables(Gf, n_max), cand, f);
  }
  throw NumericError("central value: no primitive character matches the pulled-back character");
}

// I(X * scale) for each multiplier, sharing coefficient tables.
Unbalanced unbalanced_sums(const RankinSetup& setup, int k, double test_a, double A, double B,
                           const std::vector<double>& mults) {
  const TensorCoefficients& T = *setup.tensor;
  const QuadOrder& O = setup.order();
  const double Y = setup.Y;
  Unbalanced out;
  out.cut = A * (std::log(Y) + B);
  double mmax = 0.0;
  for (double m : mults) mmax = std::max(mmax, m);
  const u64 n_max = static_cast<u64>(std::floor(out.cut * Y * mmax));
  T.prepare(n_max);
  const i64 f = setup.character->conductor();
  const std::vector<double> b = primitive_coefficients(*setup.group, *setup.character, n_max);
  CutoffFunction V(rankin_arch(T), TestFunction{k + 1, test_a});
  const QuadraticCharacter eta(O.fundamental_discriminant);
  const i64 M = checked_mul(f, T.level());
  for (double m : mults) {
    const SmoothedKernel ker = build_kernel(V, eta, M, Y * m, out.cut);
    out.sums.push_back(apply_kernel(ker, T.table(), b));
    out.v_at_cut = ker.v_at_cut;
  }
  return out;
}

}  // namespace

CentralValueResult central_value(const RankinSetup& setup, const CentralOptions& opts) {
  if (!(opts.balance > 0.0)) throw DomainError("central_value: balance must be positive");
  if (opts.force_k > 1) throw DomainError("central_value: k must be 0 or 1");
  CentralValueResult r;
  r.k = opts.force_k >= 0 ? opts.force_k : setup.k;
  r.forced_parity = r.k != setup.k;
  r.Y = setup.Y;
  r.root_number = setup.root_number;
  r.balance = opts.balance;
  const double X = opts.balance;
  const double sign = (r.k == 0 ? 1.0 : -1.0) * setup.root_number;
  double A = opts.A;
  for (int attempt = 0; attempt < 4; ++attempt, A *= 1.5) {
    const Unbalanced u = X == 1.0 ? unbalanced_sums(setup, r.k, opts.test_a, A, opts.B, {1.0})
                                  : unbalanced_sums(setup, r.k, opts.test_a, A, opts.B, {X, 1.0 / X});
    const KernelSum& s1 = u.sums[0];
    const KernelSum& s2 = u.sums.size() > 1 ? u.sums[1] : u.sums[0];
    r.I_X = s1.value;
    r.I_inv = s2.value;
    r.value = s1.value + sign * s2.value;
    r.terms_used = s1.terms + (u.sums.size() > 1 ? s2.terms : 0);
    r.tail_estimate = 2.0 * u.v_at_cut * (s1.abs_sum + s2.abs_sum);
    r.cut = u.cut;
    if (r.tail_estimate <= opts.tolerance * std::max(1.0, std::fabs(r.value))) return r;
  }
  throw NumericError("central_value: truncation estimate " + std::to_string(r.tail_estimate) +
                     " above tolerance " + std::to_string(opts.tolerance));
}

RootNumberProbe probe_root_number(const RankinSetup& setup, double X) {
  if (!(X > 1.0)) throw DomainError("probe_root_number: X must exceed 1");
  const Unbalanced u = unbalanced_sums(setup, 0, 0.0, 30.0, 10.0, {X, 1.0 / X, 1.0});
  const double scale = std::max(u.sums[2].abs_sum, 1e-300);
  RootNumberProbe p;
  p.residual_minus = std::fabs(u.sums[0].value - u.sums[1].value) / scale;
  p.residual_plus = std::fabs(u.sums[0].value + u.sums[1].value - 2.0 * u.sums[2].value) / scale;
  p.sign = p.residual_minus < p.residual_plus ? -1 : 1;
  return p;
}

}  // namespace rsm
