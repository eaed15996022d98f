// SPDX-License-Identifier: Apache-2.0
#include "rsm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

int big_omega(i64 n) {
  if (n <= 1) return 0;
  int k = 0;
  for (const auto& [p, e] : factorize(n).factors) k += e;
  return k;
}

double cut_for(const MomentOptions& o, double Y) { return o.A * (std::log(Y) + o.B); }

i64 basechange_for(const TensorCoefficients& T, i64 bc) {
  return bc > 0 ? bc : checked_mul(T.level(), T.level());
}

void check_level(const TensorCoefficients& T, i64 D_K, i64 c) {
  if (gcd(T.level(), checked_mul(std::llabs(D_K), c)) != 1)
    throw DomainError("level " + std::to_string(T.level()) + " must be coprime to D_K * c");
}

std::vector<double> principal_counts(i64 D_K, i64 e, i64 c, u64 n_max) {
  const QuadOrder O = make_order(D_K, e);
  const auto raw = form_point_table(principal_form(O.discriminant), static_cast<i64>(n_max));
  std::vector<double> out(n_max + 1, 0.0);
  for (u64 n = 1; n <= n_max; ++n) out[n] = static_cast<double>(raw[n]) / O.unit_count;
  if (c > 1)
    for (const auto& [p, ex] : factorize(c).factors)
      for (u64 n = static_cast<u64>(p); n <= n_max; n += static_cast<u64>(p)) out[n] = 0.0;
  return out;
}

}  // namespace

std::vector<i64> default_divisor_ordering(i64 c) {
  std::vector<i64> d;
  for (u64 x : divisors(c)) d.push_back(static_cast<i64>(x));
  std::stable_sort(d.begin(), d.end(), [](i64 a, i64 b) {
    const int oa = big_omega(a), ob = big_omega(b);
    return oa != ob ? oa < ob : a < b;
  });
  return d;
}

MomentReport average_route_A(const TensorCoefficients& T, const FormClassGroup& G, const MomentOptions& opts) {
  if (opts.k != 0 && opts.k != 1) throw DomainError("average: k must be 0 or 1");
  const QuadOrder& O = G.order();
  if (O.discriminant >= 0) throw DomainError("average: the order must be imaginary");
  check_level(T, O.fundamental_discriminant, O.conductor);
  MomentReport rep;
  rep.D_K = O.fundamental_discriminant;
  rep.c = O.conductor;
  rep.tensor = T.label();
  rep.k = opts.k;
  rep.h = G.class_number();
  rep.w = O.unit_count;
  const i64 bc = basechange_for(T, opts.basechange_conductor);
  rep.Y = rankin_conductor_root(T, rep.D_K, bc, rep.c);
  const std::vector<RingClassCharacter> chars = characters(G);
  std::map<i64, std::vector<size_t>> by_conductor;
  for (size_t i = 0; i < chars.size(); ++i) by_conductor[chars[i].conductor()].push_back(i);

  const u64 n_top = static_cast<u64>(std::floor(cut_for(opts, rep.Y) * rep.Y));
  T.prepare(n_top);
  const ClassTables tables = build_class_tables(G, n_top);
  CutoffFunction V(rankin_arch(T), TestFunction{opts.k + 1, opts.test_a});
  const QuadraticCharacter eta(rep.D_K);
  const i64 M = checked_mul(rep.c, T.level());
  rep.per_character.resize(chars.size());
  for (const auto& [d, idx] : by_conductor) {
    const double Yd = rankin_conductor_root(T, rep.D_K, bc, d);
    const SmoothedKernel ker = build_kernel(V, eta, M, Yd, cut_for(opts, Yd));
    for (size_t i : idx) {
      const std::vector<double> b = character_coefficients(tables, chars[i], rep.c);
      const KernelSum s = apply_kernel(ker, T.table(), b);
      CharacterValue cv;
      cv.exponents = chars[i].exponent_vector();
      cv.conductor = d;
      cv.Y = Yd;
      cv.value = 2.0 * s.value;
      cv.terms = s.terms;
      rep.per_character[i] = cv;
      rep.tail_estimate += 2.0 * 2.0 * ker.v_at_cut * s.abs_sum / static_cast<double>(chars.size());
    }
  }
  double sum = 0.0;
  for (const auto& cv : rep.per_character) sum += cv.value;
  rep.H_A = sum / static_cast<double>(chars.size());
  rep.has_A = true;
  return rep;
}

MomentReport average_route_B(const TensorCoefficients& T, i64 D_K, i64 c, const MomentOptions& opts) {
  if (opts.k != 0 && opts.k != 1) throw DomainError("average: k must be 0 or 1");
  const QuadOrder O = make_order(D_K, c);
  if (O.discriminant >= 0) throw DomainError("average: the order must be imaginary");
  check_level(T, D_K, c);
  MomentReport rep;
  rep.D_K = D_K;
  rep.c = c;
  rep.tensor = T.label();
  rep.k = opts.k;
  rep.h = dedekind_class_number(D_K, c);
  rep.w = O.unit_count;
  const i64 bc = basechange_for(T, opts.basechange_conductor);
  auto Y_of = [&](i64 d) { return rankin_conductor_root(T, D_K, bc, d); };
  rep.Y = Y_of(c);

  std::vector<i64> ord = opts.ordering.empty() ? default_divisor_ordering(c) : opts.ordering;
  {
    std::vector<i64> a = ord, b = default_divisor_ordering(c);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b || ord.back() != c) throw DomainError("route B: ordering must list every divisor of c once and end at c");
  }
  rep.ordering = ord;
  const size_t t = ord.size();

  struct Plan {
    double scale, cut, log_rho;
  };
  std::vector<Plan> plans;
  plans.push_back({rep.Y, cut_for(opts, rep.Y), 0.0});
  for (size_t l = 0; l + 1 < t; ++l) {
    const double Ya = Y_of(ord[l]), Yb = Y_of(ord[l + 1]);
    const double Ymax = std::max(Ya, Yb);
    plans.push_back({Yb, cut_for(opts, Ymax) * Ymax / Yb,
                     T.rank() * std::log(static_cast<double>(ord[l]) / static_cast<double>(ord[l + 1]))});
  }
  u64 n_top = 0;
  for (const auto& p : plans) n_top = std::max(n_top, static_cast<u64>(std::floor(p.cut * p.scale)));
  T.prepare(n_top);

  std::map<i64, std::vector<double>> r;
  for (u64 e : divisors(c)) r[static_cast<i64>(e)] = principal_counts(D_K, static_cast<i64>(e), c, n_top);
  std::map<i64, i64> h_of;
  for (u64 e : divisors(c)) h_of[static_cast<i64>(e)] = dedekind_class_number(D_K, static_cast<i64>(e));

  const ArchFactor arch = rankin_arch(T);
  const TestFunction test{opts.k + 1, opts.test_a};
  const QuadraticCharacter eta(D_K);
  const i64 M = checked_mul(c, T.level());

  CutoffFunction V(arch, test);
  const SmoothedKernel k0 = build_kernel(V, eta, M, plans[0].scale, plans[0].cut);
  const KernelSum d0 = apply_kernel(k0, T.table(), r[c]);
  rep.D_leading = d0.value;
  rep.tail_estimate += 2.0 * 2.0 * k0.v_at_cut * d0.abs_sum;

  double corr = 0.0;
  for (size_t l = 0; l + 1 < t; ++l) {
    std::map<i64, double> weight;
    for (size_t i = 0; i <= l; ++i)
      for (u64 e : divisors(ord[i])) {
        const i64 ee = static_cast<i64>(e);
        weight[ee] += moebius(ord[i] / ee) * static_cast<double>(h_of[ee]);
      }
    CutoffFunction Vl(arch, test, plans[l + 1].log_rho);
    const SmoothedKernel kl = build_kernel(Vl, eta, M, plans[l + 1].scale, plans[l + 1].cut);
    for (const auto& [e, wgt] : weight) {
      if (wgt == 0.0) continue;
      const KernelSum s = apply_kernel(kl, T.table(), r[e]);
      DtildeTerm term;
      term.e = e;
      term.from = ord[l];
      term.to = ord[l + 1];
      term.weight = wgt;
      term.value = s.value;
      rep.dtilde.push_back(term);
      corr += wgt * s.value;
      rep.tail_estimate += 2.0 * 2.0 * kl.v_at_cut * std::fabs(wgt) * s.abs_sum / static_cast<double>(rep.h);
    }
  }
  rep.parasite = std::fabs(corr) / static_cast<double>(rep.h);
  rep.H_B = 2.0 * (rep.D_leading - corr / static_cast<double>(rep.h));
  rep.has_B = true;
  return rep;
}

MomentReport average_both(const TensorCoefficients& T, const FormClassGroup& G, const MomentOptions& opts) {
  MomentReport a = average_route_A(T, G, opts);
  const MomentReport b = average_route_B(T, G.order().fundamental_discriminant, G.order().conductor, opts);
  a.D_leading = b.D_leading;
  a.dtilde = b.dtilde;
  a.parasite = b.parasite;
  a.H_B = b.H_B;
  a.has_B = true;
  a.ordering = b.ordering;
  a.tail_estimate = std::max(a.tail_estimate, b.tail_estimate);
  a.route_gap = std::fabs(a.H_A - a.H_B);
  return a;
}

// ---------------------------------------------------------------------------

MainTermInputs main_term_inputs(const TensorCoefficients& T, i64 D_K, i64 c, i64 basechange_conductor) {
  if (T.size() != 1) throw DomainError("main term: implemented for a single form (N = 1)");
  check_level(T, D_K, c);
  MainTermInputs in;
  const QuadOrder O = make_order(D_K, c);
  const QuadraticCharacter eta(D_K);
  const i64 M = checked_mul(c, T.level());
  in.L1_eta = partial_dirichlet_L(eta, 1.0, M);
  in.Lprime_over_L = dirichlet_L_log_derivative(eta, 1.0, 1e-4, M);
  const Sym2LFunction sym2(T.factors()[0]);
  in.ratio = sym2.R(1.0, c);
  in.ratio_log_derivative = sym2.R_log_derivative(1.0, c);
  const Sym2Value at_one = sym2_value(T, c, 1.0);
  in.pole_flag = at_one.pole;
  in.sym2_slope = at_one.slope;
  in.acknowledged = true;
  const Sym2Value off = sym2_value(T, c, in.s0);
  double z = zeta(2.0 * in.s0);
  if (c > 1)
    for (const auto& [p, e] : factorize(c).factors) z *= 1.0 - std::pow(static_cast<double>(p), -2.0 * in.s0);
  in.ratio_s0 = off.value / z;
  in.w = O.unit_count;
  in.Y = rankin_conductor_root(T, D_K, basechange_for(T, basechange_conductor), c);
  in.psi0 = rankin_arch(T).log_derivative(0.5).real();
  return in;
}

namespace {
double main_term_with(const MainTermInputs& in, int k, double ratio) {
  if (in.pole_flag && !in.acknowledged)
    throw StateError("main term: symmetric-square input carries an unacknowledged pole diagnostic");
  if (!std::isfinite(ratio) || !std::isfinite(in.L1_eta)) throw NumericError("main term: non-finite input");
  const double base = 4.0 / in.w * in.L1_eta * ratio;
  if (k == 0) return base;
  if (k == 1)
    return base * (std::log(in.Y) + 2.0 * in.Lprime_over_L + 2.0 * in.ratio_log_derivative + in.psi0);
  throw DomainError("main term: k must be 0 or 1");
}
}  // namespace

double main_term(const MainTermInputs& in, int k) { return main_term_with(in, k, in.ratio); }
double main_term_s0(const MainTermInputs& in, int k) { return main_term_with(in, k, in.ratio_s0); }

// ---------------------------------------------------------------------------

B0Check b0_contour_check(const TensorCoefficients& T, i64 D_K, i64 c, int k, double test_a, i64 basechange_conductor) {
  if (k != 0 && k != 1) throw DomainError("b0 check: k must be 0 or 1");
  check_level(T, D_K, c);
  const QuadOrder O = make_order(D_K, c);
  const double Y = rankin_conductor_root(T, D_K, basechange_for(T, basechange_conductor), c);
  const double w = O.unit_count;
  const QuadraticCharacter eta(D_K);
  const i64 M = checked_mul(c, T.level());
  CutoffFunction V(rankin_arch(T), TestFunction{k + 1, test_a});
  const double cut = 30.0 * (std::log(Y) + 10.0);
  const u64 lim = static_cast<u64>(std::floor(cut * Y));
  const u64 a_cap = std::min<u64>(2000, static_cast<u64>(isqrt(static_cast<i64>(T.p_max()))));
  T.prepare(std::max(lim, a_cap * a_cap));
  const auto& C = T.table();

  B0Check out;
  const u64 root = static_cast<u64>(isqrt(static_cast<i64>(lim)));
  for (u64 m = 1; m <= root; ++m) {
    if (gcd(static_cast<i64>(m), M) != 1) continue;
    const int em = eta(static_cast<i64>(m));
    if (em == 0) continue;
    for (u64 a = 1; m * a <= root; ++a) {
      if (c > 1 && gcd(static_cast<i64>(a), c) != 1) continue;
      const double ma = static_cast<double>(m * a);
      out.direct += em * C[a * a] / ma * V(ma * ma / Y);
    }
  }
  out.direct *= 2.0 / w;

  constexpr u64 kMTerms = 4000;
  std::vector<double> em_log, em_val, a_log, a_val;
  for (u64 m = 1; m <= kMTerms; ++m) {
    if (gcd(static_cast<i64>(m), M) != 1 || eta(static_cast<i64>(m)) == 0) continue;
    em_log.push_back(std::log(static_cast<double>(m)));
    em_val.push_back(eta(static_cast<i64>(m)));
  }
  for (u64 a = 1; a <= a_cap; ++a) {
    if (c > 1 && gcd(static_cast<i64>(a), c) != 1) continue;
    if (C[a * a] == 0.0) continue;
    a_log.push_back(std::log(static_cast<double>(a)));
    a_val.push_back(C[a * a]);
  }
  auto dirichlet = [](const std::vector<double>& lg, const std::vector<double>& val, cplx z) {
    cplx acc = 0.0;
    for (size_t i = 0; i < lg.size(); ++i) acc += val[i] * std::exp(-z * lg[i]);
    return acc;
  };
  const double logY = std::log(Y);
  auto f = [&](cplx s) {
    const cplx z = 1.0 + 2.0 * s;
    return V.transform(s) * std::exp(s * logY) * (2.0 / w) * dirichlet(em_log, em_val, z) * dirichlet(a_log, a_val, z);
  };
  const LineRule rule = build_line_rule(f, 2.0);
  out.contour = apply_line_rule(rule, 0.0);
  out.gap = std::fabs(out.direct - out.contour) / std::max(std::fabs(out.contour), 1e-300);
  return out;
}

PrimitiveAverage primitive_subaverage(i64 D_K, i64 c, const std::map<i64, double>& H) {
  PrimitiveAverage out;
  for (u64 d : divisors(c)) {
    const i64 dd = static_cast<i64>(d);
    auto it = H.find(dd);
    if (it == H.end()) throw StateError("primitive_subaverage: missing average for divisor " + std::to_string(dd));
    const int mu = moebius(c / dd);
    if (mu == 0) continue;
    const i64 h = dedekind_class_number(D_K, dd);
    out.numerator += mu * static_cast<double>(h) * it->second;
    out.count += mu * h;
  }
  out.value = out.count != 0 ? out.numerator / static_cast<double>(out.count) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace rsm
