// SPDX-License-Identifier: Apache-2.0
#include "rsm/quad_orders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

void require_fundamental(i64 D_K) {
  if (!is_fundamental_discriminant(D_K))
    throw DomainError(std::to_string(D_K) + " is not a fundamental discriminant");
}

i64 exact_div(i128 num, i128 den, const char* where) {
  if (den == 0 || num % den != 0) throw NumericError(std::string(where) + ": inexact division");
  i128 q = num / den;
  if (q > INT64_MAX || q < INT64_MIN) throw DomainError(std::string(where) + ": 64-bit overflow");
  return static_cast<i64>(q);
}

BinaryForm form_from(i64 a, i64 b, i64 disc) {
  return BinaryForm{a, b, exact_div(static_cast<i128>(b) * b - disc, static_cast<i128>(4) * a, "form")};
}

}  // namespace

QuadOrder make_order(i64 D_K, i64 c) {
  require_fundamental(D_K);
  if (c < 1) throw DomainError("conductor must be >= 1");
  QuadOrder o;
  o.fundamental_discriminant = D_K;
  o.conductor = c;
  o.discriminant = checked_mul(D_K, checked_mul(c, c));
  if (o.discriminant == -4)
    o.unit_count = 4;
  else if (o.discriminant == -3)
    o.unit_count = 6;
  else
    o.unit_count = 2;
  if (D_K > 0) o.pell = pell_fundamental(o.discriminant);
  return o;
}

BinaryForm reduce(BinaryForm f) {
  const i64 D = f.discriminant();
  if (D >= 0 || f.a <= 0) throw DomainError("reduce: form is not positive definite");
  for (;;) {
    if (!(f.b > -f.a && f.b <= f.a)) {
      f.b = mod_floor(f.b + f.a - 1, 2 * f.a) - (f.a - 1);
      f = form_from(f.a, f.b, D);
    }
    if (f.a > f.c) {
      f = BinaryForm{f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

bool is_reduced(const BinaryForm& f) {
  return f.a > 0 && -f.a < f.b && f.b <= f.a && f.a <= f.c && !(f.a == f.c && f.b < 0);
}

BinaryForm compose(const BinaryForm& f_in, const BinaryForm& g_in) {
  const i64 D = f_in.discriminant();
  if (g_in.discriminant() != D) throw DomainError("compose: discriminants differ");
  BinaryForm f1 = f_in, f2 = g_in;
  if (f1.a > f2.a) std::swap(f1, f2);
  const i64 s = (f1.b + f2.b) / 2;
  const i64 n = f2.b - s;
  i64 y1, d;
  if (f2.a % f1.a == 0) {
    y1 = 0;
    d = f1.a;
  } else {
    i64 u, v;
    d = ext_gcd(f2.a, f1.a, u, v);
    y1 = u;
  }
  i64 x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    i64 u, v;
    d1 = ext_gcd(s, d, u, v);
    x2 = u;
    y2 = -v;
  }
  const i64 v1 = f1.a / d1, v2 = f2.a / d1;
  i128 r128 = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
  if (r128 < 0) r128 += v1;
  const i64 r = static_cast<i64>(r128);
  const i64 b3 = checked_add(f2.b, checked_mul(2 * v2, r));
  const i64 a3 = checked_mul(v1, v2);
  return reduce(form_from(a3, b3, D));
}

BinaryForm principal_form(i64 disc) {
  i64 delta = mod_floor(disc, 4) == 1 ? 1 : 0;
  return form_from(1, delta, disc);
}

std::vector<BinaryForm> enumerate_reduced_forms(i64 disc) {
  if (disc >= 0) throw DomainError("enumerate_reduced_forms: discriminant must be negative");
  if (mod_floor(disc, 4) > 1) throw DomainError("discriminant must be 0 or 1 mod 4");
  std::vector<BinaryForm> out;
  const i64 absD = -disc;
  for (i64 a = 1; 3 * a * a <= absD; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod_floor(b - disc, 2) != 0) continue;
      i64 num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      out.push_back(BinaryForm{a, b, c});
    }
  }
  return out;
}

BinaryForm form_with_first_coefficient_coprime(const BinaryForm& f, i64 m, bool require_odd) {
  const i64 D = f.discriminant();
  for (i64 radius = 1; radius < 100000; radius *= 2) {
    for (i64 y = 0; y <= radius; ++y) {
      for (i64 x = -radius; x <= radius; ++x) {
        if (gcd(x, y) != 1) continue;
        i64 n = f.eval(x, y);
        if (n <= 0 || gcd(n, m) != 1 || (require_odd && n % 2 == 0)) continue;
        i64 X, Y;
        ext_gcd(x, y, X, Y);  // x*X + y*Y = 1
        i64 w = X, z = -Y;    // x*w - y*z = 1
        BinaryForm g{n, 2 * f.a * x * z + f.b * (x * w + y * z) + 2 * f.c * y * w, f.eval(z, w)};
        if (g.discriminant() != D) throw NumericError("form transformation changed the discriminant");
        return g;
      }
    }
  }
  throw NumericError("no represented value coprime to the modulus found");
}

i64 dedekind_class_number(i64 D_K, i64 c) {
  require_fundamental(D_K);
  if (D_K >= 0) throw DomainError("dedekind_class_number: real quadratic class groups are unsupported");
  if (c < 1) throw DomainError("conductor must be >= 1");
  const i64 hK = static_cast<i64>(enumerate_reduced_forms(D_K).size());
  if (c == 1) return hK;
  const i64 wK = D_K == -4 ? 4 : (D_K == -3 ? 6 : 2);
  const i64 unit_index = wK / 2;
  i128 num = static_cast<i128>(hK) * c, den = unit_index;
  for (auto [p, e] : factorize(c).factors) {
    const i64 pp = static_cast<i64>(p);
    num *= pp - kronecker(D_K, pp);
    den *= pp;
  }
  return exact_div(num, den, "dedekind_class_number");
}

// ---------------------------------------------------------------------------
// Class group

namespace {

// Smith normal form of a small square integer matrix; tracks the column
// transform Q and its inverse so that the diagonal equals P * R * Q.
struct Smith {
  std::vector<std::vector<i64>> R, Q, Qinv;
};

void smith_normal_form(Smith& s) {
  const size_t k = s.R.size();
  auto& R = s.R;
  auto col_swap = [&](size_t i, size_t j) {
    for (auto& row : R) std::swap(row[i], row[j]);
    for (auto& row : s.Q) std::swap(row[i], row[j]);
    std::swap(s.Qinv[i], s.Qinv[j]);
  };
  // col_j <- col_j - q*col_t
  auto col_sub = [&](size_t j, size_t t, i64 q) {
    for (auto& row : R) row[j] = checked_add(row[j], -checked_mul(q, row[t]));
    for (auto& row : s.Q) row[j] = checked_add(row[j], -checked_mul(q, row[t]));
    for (size_t c = 0; c < k; ++c) s.Qinv[t][c] = checked_add(s.Qinv[t][c], checked_mul(q, s.Qinv[j][c]));
  };
  auto row_sub = [&](size_t j, size_t t, i64 q) {
    for (size_t c = 0; c < k; ++c) R[j][c] = checked_add(R[j][c], -checked_mul(q, R[t][c]));
  };
  for (size_t t = 0; t < k; ++t) {
    for (;;) {
      // Pivot: smallest nonzero |entry| in the trailing block.
      size_t pi = k, pj = k;
      for (size_t i = t; i < k; ++i)
        for (size_t j = t; j < k; ++j)
          if (R[i][j] != 0 && (pi == k || std::llabs(R[i][j]) < std::llabs(R[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == k) return;  // remaining block is zero
      std::swap(R[t], R[pi]);
      if (pj != t) col_swap(t, pj);
      bool clean = true;
      for (size_t i = t + 1; i < k; ++i) {
        i64 q = R[i][t] / R[t][t];
        if (q) row_sub(i, t, q);
        if (R[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < k; ++j) {
        i64 q = R[t][j] / R[t][t];
        if (q) col_sub(j, t, q);
        if (R[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (size_t i = t + 1; i < k && divisible; ++i)
        for (size_t j = t + 1; j < k; ++j)
          if (R[i][j] % R[t][t] != 0) {
            for (size_t c = 0; c < k; ++c) R[t][c] = checked_add(R[t][c], R[i][c]);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (R[t][t] < 0)
      for (size_t c = 0; c < k; ++c) R[t][c] = -R[t][c];
  }
}

}  // namespace

FormClassGroup::FormClassGroup(i64 D_K, i64 c) {
  require_fundamental(D_K);
  if (D_K >= 0) throw DomainError("build_class_group: real quadratic class groups are unsupported");
  order_ = make_order(D_K, c);
  classes_ = enumerate_reduced_forms(order_.discriminant);
  for (size_t i = 0; i < classes_.size(); ++i) index_[classes_[i]] = static_cast<int>(i);
  const size_t h = classes_.size();
  if (!(classes_[0] == principal_form(order_.discriminant))) throw NumericError("principal form not first");
  if (static_cast<i64>(h) != dedekind_class_number(D_K, c))
    throw NumericError("enumerated class number disagrees with the class number formula");

  table_.assign(h * h, -1);
  for (size_t i = 0; i < h; ++i)
    for (size_t j = i; j < h; ++j) {
      int k = index_of(compose(classes_[i], classes_[j]));
      table_[i * h + j] = table_[j * h + i] = k;
    }
  // Commutativity holds by construction above; check it against a direct
  // composition in the other order, plus identity and inverses.
  inverse_.assign(h, -1);
  for (size_t i = 0; i < h; ++i) {
    if (mul(static_cast<int>(i), 0) != static_cast<int>(i)) throw NumericError("identity law fails");
    for (size_t j = 0; j < h; ++j)
      if (index_of(compose(classes_[j], classes_[i])) != mul(static_cast<int>(i), static_cast<int>(j)))
        throw NumericError("composition is not commutative");
    const BinaryForm& f = classes_[i];
    inverse_[i] = index_of(reduce(BinaryForm{f.a, -f.b, f.c}));
    if (mul(static_cast<int>(i), inverse_[i]) != 0) throw NumericError("inverse law fails");
  }
  // Associativity: exhaustive for small groups, a fixed stride sample otherwise.
  const size_t stride = h <= 48 ? 1 : h / 24 + 1;
  for (size_t i = 0; i < h; i += stride)
    for (size_t j = 0; j < h; j += stride)
      for (size_t k = 0; k < h; ++k)
        if (mul(mul(static_cast<int>(i), static_cast<int>(j)), static_cast<int>(k)) !=
            mul(static_cast<int>(i), mul(static_cast<int>(j), static_cast<int>(k))))
          throw NumericError("composition is not associative");
  build_structure();
}

int FormClassGroup::index_of(const BinaryForm& f) const {
  auto it = index_.find(f);
  if (it == index_.end())
    throw NumericError("form (" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) +
                       ") is not a reduced class of this group");
  return it->second;
}

void FormClassGroup::build_structure() {
  const size_t h = classes_.size();
  // Greedy generating set with exponent vectors in that generating set.
  std::vector<std::vector<i64>> vec(h);
  std::vector<char> in_h(h, 0);
  in_h[0] = 1;
  std::vector<int> members{0};
  std::vector<int> gens;
  std::vector<std::vector<i64>> relations;
  while (members.size() < h) {
    int g = 0;
    while (in_h[static_cast<size_t>(g)]) ++g;
    const size_t gi = gens.size();
    gens.push_back(g);
    for (auto& v : vec) v.resize(gi + 1, 0);
    // Smallest e with g^e in the current subgroup.
    int power = g;
    i64 e = 1;
    while (!in_h[static_cast<size_t>(power)]) {
      power = mul(power, g);
      ++e;
    }
    std::vector<i64> rel = vec[static_cast<size_t>(power)];
    for (auto& x : rel) x = -x;
    rel[gi] += e;
    relations.push_back(rel);
    std::vector<int> next;
    int gt = 0;
    for (i64 t = 0; t < e; ++t) {
      for (int m : members) {
        const int prod = mul(m, gt);
        std::vector<i64> v = vec[static_cast<size_t>(m)];
        v[gi] = t;
        vec[static_cast<size_t>(prod)] = v;
        in_h[static_cast<size_t>(prod)] = 1;
        next.push_back(prod);
      }
      gt = mul(gt, g);
    }
    members = next;
  }
  const size_t k = gens.size();
  if (k == 0) {
    dlog_.assign(h, {});
    return;
  }
  for (auto& r : relations) r.resize(k, 0);
  for (auto& v : vec) v.resize(k, 0);
  Smith s;
  s.R = relations;
  s.Q.assign(k, std::vector<i64>(k, 0));
  s.Qinv.assign(k, std::vector<i64>(k, 0));
  for (size_t i = 0; i < k; ++i) s.Q[i][i] = s.Qinv[i][i] = 1;
  smith_normal_form(s);
  std::vector<size_t> keep;
  i64 prod = 1;
  for (size_t i = 0; i < k; ++i) {
    prod *= s.R[i][i];
    if (s.R[i][i] > 1) keep.push_back(i);
  }
  if (prod != static_cast<i64>(h)) throw NumericError("Smith normal form does not reproduce the class number");
  for (size_t i : keep) structure_.push_back(s.R[i][i]);
  for (size_t a = 1; a < structure_.size(); ++a)
    if (structure_[a] % structure_[a - 1] != 0) throw NumericError("elementary divisors do not form a chain");
  // New generators: old-basis vectors given by rows of Qinv.
  for (size_t i : keep) {
    int cls = 0;
    for (size_t j = 0; j < k; ++j) {
      i64 ex = mod_floor(s.Qinv[i][j], h);
      for (i64 t = 0; t < ex; ++t) cls = mul(cls, gens[j]);
    }
    generators_.push_back(cls);
  }
  dlog_.assign(h, std::vector<i64>(keep.size(), 0));
  for (size_t cls = 0; cls < h; ++cls)
    for (size_t a = 0; a < keep.size(); ++a) {
      i128 acc = 0;
      for (size_t j = 0; j < k; ++j) acc += static_cast<i128>(vec[cls][j]) * s.Q[j][keep[a]];
      dlog_[cls][a] = static_cast<i64>(((acc % structure_[a]) + structure_[a]) % structure_[a]);
    }
  // The coordinate map must be an isomorphism onto the product of cyclic groups.
  std::map<std::vector<i64>, int> seen;
  for (size_t cls = 0; cls < h; ++cls) seen[dlog_[cls]] = static_cast<int>(cls);
  if (seen.size() != h) throw NumericError("discrete logarithm map is not injective");
  for (size_t i = 0; i < h; ++i)
    for (size_t j = 0; j < h; ++j) {
      const auto& a = dlog_[i];
      const auto& b = dlog_[j];
      const auto& c = dlog_[static_cast<size_t>(mul(static_cast<int>(i), static_cast<int>(j)))];
      for (size_t t = 0; t < a.size(); ++t)
        if ((a[t] + b[t]) % structure_[t] != c[t]) throw NumericError("discrete logarithm is not a homomorphism");
    }
}

BinaryForm FormClassGroup::project(int idx, i64 c_prime) const {
  const i64 c = order_.conductor;
  if (c_prime < 1 || c % c_prime != 0) throw DomainError("project: target conductor must divide c");
  if (c_prime == c) return form(idx);
  const i64 m = c / c_prime;
  const i64 disc_target = order_.fundamental_discriminant * c_prime * c_prime;
  BinaryForm f = form_with_first_coefficient_coprime(form(idx), 2 * c, true);
  const i64 a = f.a;
  i64 b = a == 1 ? 0 : mod_floor(static_cast<i64>(static_cast<i128>(mod_floor(f.b, a)) * inv_mod(m, a) % a), a);
  if (mod_floor(b - disc_target, 2) != 0) b += a;
  BinaryForm g = form_from(a, b, disc_target);
  if (gcd(gcd(g.a, g.b), g.c) != 1) throw NumericError("projected form is not primitive");
  return reduce(g);
}

std::vector<int> FormClassGroup::kernel_to(i64 c_prime) const {
  const BinaryForm target = principal_form(order_.fundamental_discriminant * c_prime * c_prime);
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(classes_.size()); ++i)
    if (project(i, c_prime) == target) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Characters

RingClassCharacter::RingClassCharacter(const FormClassGroup* group, std::vector<i64> exponents, i64 conductor)
    : group_(group), exps_(std::move(exponents)), conductor_(conductor) {}

i64 RingClassCharacter::value_exponent(int class_idx) const {
  const auto& d = group_->structure();
  const i64 L = group_->exponent();
  const auto& y = group_->dlog(class_idx);
  i128 acc = 0;
  for (size_t i = 0; i < d.size(); ++i) acc += static_cast<i128>(exps_[i]) * y[i] * (L / d[i]);
  return static_cast<i64>(acc % L);
}

std::complex<double> RingClassCharacter::value(int class_idx) const {
  const i64 L = group_->exponent();
  const i64 e = value_exponent(class_idx);
  if (e == 0) return {1.0, 0.0};
  if (2 * e == L) return {-1.0, 0.0};
  const double ang = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(L);
  return {std::cos(ang), std::sin(ang)};
}

bool RingClassCharacter::is_trivial() const {
  for (i64 e : exps_)
    if (e != 0) return false;
  return true;
}

bool RingClassCharacter::is_real() const {
  const auto& d = group_->structure();
  for (size_t i = 0; i < d.size(); ++i)
    if ((2 * exps_[i]) % d[i] != 0) return false;
  return true;
}

std::vector<i64> RingClassCharacter::conjugate_exponents() const {
  const auto& d = group_->structure();
  std::vector<i64> out(exps_.size());
  for (size_t i = 0; i < d.size(); ++i) out[i] = (d[i] - exps_[i]) % d[i];
  return out;
}

namespace {

bool factors_through(const FormClassGroup& g, const std::vector<i64>& exps, const std::vector<int>& kernel) {
  RingClassCharacter chi(&g, exps, 0);
  for (int a : kernel)
    if (chi.value_exponent(a) != 0) return false;
  return true;
}

i64 conductor_from_kernels(const FormClassGroup& g, const std::vector<i64>& exps,
                           const std::vector<std::pair<i64, std::vector<int>>>& kernels) {
  std::vector<i64> through;
  for (const auto& [cp, ker] : kernels)
    if (factors_through(g, exps, ker)) through.push_back(cp);
  const i64 f = *std::min_element(through.begin(), through.end());
  for (i64 cp : through)
    if (cp % f != 0) throw StateError("character conductor is not unique");
  return f;
}

std::vector<std::pair<i64, std::vector<int>>> all_kernels(const FormClassGroup& g) {
  std::vector<std::pair<i64, std::vector<int>>> out;
  for (u64 d : divisors(g.order().conductor)) out.emplace_back(static_cast<i64>(d), g.kernel_to(static_cast<i64>(d)));
  return out;
}

}  // namespace

i64 character_conductor(const FormClassGroup& group, const std::vector<i64>& exps) {
  return conductor_from_kernels(group, exps, all_kernels(group));
}

std::vector<RingClassCharacter> characters(const FormClassGroup& group) {
  const auto& d = group.structure();
  const auto kernels = all_kernels(group);
  std::vector<RingClassCharacter> out;
  std::vector<i64> e(d.size(), 0);
  for (;;) {
    out.emplace_back(&group, e, conductor_from_kernels(group, e, kernels));
    size_t i = 0;
    while (i < d.size()) {
      if (++e[i] < d[i]) break;
      e[i] = 0;
      ++i;
    }
    if (i == d.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting

i64 count_form_points(const BinaryForm& f, i64 n) {
  if (n <= 0) throw DomainError("count_representations: n must be positive");
  const i64 D = f.discriminant();
  if (D >= 0 || f.a <= 0) throw DomainError("count_form_points: form must be positive definite");
  const i64 absD = -D;
  const i64 ymax = isqrt(static_cast<i64>(static_cast<i128>(4) * f.a * n / absD));
  i64 count = 0;
  for (i64 y = -ymax; y <= ymax; ++y) {
    i128 disc = static_cast<i128>(D) * y * y + static_cast<i128>(4) * f.a * n;
    if (disc < 0) continue;
    i64 t;
    if (!is_square(static_cast<i64>(disc), &t)) continue;
    for (int sgn : {1, -1}) {
      if (t == 0 && sgn == -1) continue;
      i64 num = -f.b * y + sgn * t;
      if (num % (2 * f.a) == 0) ++count;
    }
  }
  return count;
}

std::vector<std::uint32_t> form_point_table(const BinaryForm& f, i64 n_max) {
  std::vector<std::uint32_t> out(static_cast<size_t>(n_max + 1), 0);
  const i64 D = f.discriminant();
  const long double absD = static_cast<long double>(-D);
  const i64 ymax = isqrt(static_cast<i64>(4.0L * f.a * n_max / absD) + 1);
  for (i64 y = -ymax; y <= ymax; ++y) {
    long double disc = static_cast<long double>(D) * y * y + 4.0L * f.a * n_max;
    if (disc < 0) continue;
    long double sq = std::sqrt(disc);
    i64 xlo = static_cast<i64>(std::floor((-f.b * y - sq) / (2.0L * f.a))) - 1;
    i64 xhi = static_cast<i64>(std::ceil((-f.b * y + sq) / (2.0L * f.a))) + 1;
    for (i64 x = xlo; x <= xhi; ++x) {
      i64 v = f.eval(x, y);
      if (v >= 1 && v <= n_max) ++out[static_cast<size_t>(v)];
    }
  }
  return out;
}

i64 count_representations(const FormClassGroup& group, int class_idx, i64 n) {
  i64 raw = count_form_points(group.form(class_idx), n);
  const i64 w = group.order().unit_count;
  if (raw % w != 0) throw NumericError("representation count not divisible by the unit count");
  return raw / w;
}

PellSolution pell_fundamental(i64 disc) {
  if (disc <= 0) throw DomainError("pell_fundamental: discriminant must be positive");
  if (is_square(disc)) throw DomainError("pell_fundamental: discriminant is a perfect square");
  const i64 delta = mod_floor(disc, 4) == 1 ? 1 : 0;
  const i64 s = isqrt(disc);
  // Continued fraction of (delta + sqrt(disc)) / 2.
  i64 P = delta, Q = 2;
  i128 p_prev = 0, p = 1, q_prev = 1, q = 0;
  for (int iter = 0; iter < 1000000; ++iter) {
    const i64 a = (P + s) / Q;
    i128 p_new = a * p + p_prev, q_new = a * q + q_prev;
    p_prev = p;
    p = p_new;
    q_prev = q;
    q = q_new;
    if (p > (static_cast<i128>(1) << 62) || q > (static_cast<i128>(1) << 62))
      throw DomainError("pell_fundamental: solution exceeds 64-bit range");
    i128 X = 2 * p - delta * q, Y = q;
    i128 N = X * X - static_cast<i128>(disc) * Y * Y;
    if (N == 4 || N == -4) {
      PellSolution sol;
      sol.x = static_cast<i64>(X < 0 ? -X : X);
      sol.y = static_cast<i64>(Y);
      sol.norm4 = static_cast<int>(N);
      return sol;
    }
    P = a * Q - P;
    Q = (disc - P * P) / Q;
  }
  throw NumericError("pell_fundamental: continued fraction did not close");
}

i64 count_principal_real(const QuadOrder& order, i64 n) {
  if (order.discriminant <= 0) throw DomainError("count_principal_real: order must be real quadratic");
  if (!order.pell) throw StateError("count_principal_real: Pell data missing");
  if (n <= 0) throw DomainError("count_principal_real: n must be positive");
  const i64 disc = order.discriminant;
  const i64 delta = mod_floor(disc, 4) == 1 ? 1 : 0;
  const i64 c0 = (delta - disc) / 4;
  // eps_plus: smallest unit > 1 of norm +1, as (X + Y sqrt(disc))/2.
  i128 X = order.pell->x, Y = order.pell->y;
  if (order.pell->norm4 == -4) {
    i128 X2 = (X * X + static_cast<i128>(disc) * Y * Y) / 2, Y2 = X * Y;
    X = X2;
    Y = Y2;
  }
  const long double sqrtD = std::sqrt(static_cast<long double>(disc));
  const long double eps = (static_cast<long double>(X) + static_cast<long double>(Y) * sqrtD) / 2.0L;
  const long double eps2 = eps * eps;
  const long double z = (delta + sqrtD) / 2.0L, zbar = (delta - sqrtD) / 2.0L;
  const i64 ymax = static_cast<i64>(std::sqrt(static_cast<long double>(n)) * (1.0L + eps) / sqrtD) + 2;
  i64 count = 0;
  for (i64 y = -ymax; y <= ymax; ++y) {
    i128 dsc = static_cast<i128>(disc) * y * y + static_cast<i128>(4) * n;
    if (dsc < 0) continue;
    i64 t;
    if (!is_square(static_cast<i64>(dsc), &t)) continue;
    for (int sgn : {1, -1}) {
      if (t == 0 && sgn == -1) continue;
      i64 num = -delta * y + sgn * t;
      if (mod_floor(num, 2) != 0) continue;
      const i64 x = num / 2;
      if (x * x + delta * x * y + c0 * y * y != n) continue;
      bool inside;
      if (y == 0) {
        inside = true;
      } else {
        const long double alpha = x + z * y, alphabar = x + zbar * y;
        const long double ratio = alphabar / alpha;
        if (std::fabs(ratio - eps2) < 1e-9L * eps2) {
          // Exact boundary test: eps_plus * alpha rational means ratio == eps^2.
          const i128 Pa = 2 * static_cast<i128>(x) + delta * y, Qa = y;
          inside = (Pa * Y + Qa * X) != 0 && ratio < eps2;
        } else {
          inside = ratio >= 1.0L && ratio < eps2;
        }
      }
      if (inside) ++count;
    }
  }
  if (count % 2 != 0) throw NumericError("count_principal_real: sign pairing failed");
  return count / 2;
}

std::vector<int> genus_signature(const FormClassGroup& group, int class_idx) {
  const i64 D = group.order().discriminant;
  const i64 absD = -D;
  const i64 m = form_with_first_coefficient_coprime(group.form(class_idx), 2 * absD, true).a;
  std::vector<int> sig;
  for (auto [p, e] : factorize(absD).factors)
    if (p != 2) sig.push_back(kronecker_raw(m, static_cast<i64>(p)));
  auto delta = [](i64 x) { return mod_floor(x, 4) == 1 ? 1 : -1; };
  auto epsilon = [](i64 x) {
    i64 r = mod_floor(x, 8);
    return (r == 1 || r == 7) ? 1 : -1;
  };
  if (mod_floor(D, 4) == 0) {
    const i64 n = absD / 4;
    const i64 r4 = n % 4, r8 = n % 8;
    if (r4 == 1 || r8 == 4) {
      sig.push_back(delta(m));
    } else if (r8 == 2) {
      sig.push_back(delta(m) * epsilon(m));
    } else if (r8 == 6) {
      sig.push_back(epsilon(m));
    } else if (r8 == 0) {
      sig.push_back(delta(m));
      sig.push_back(epsilon(m));
    }
  }
  return sig;
}

double genus_average(const FormClassGroup& group, i64 n) {
  const auto principal = genus_signature(group, 0);
  i64 total = 0, members = 0;
  for (int i = 0; i < static_cast<int>(group.class_number()); ++i) {
    if (genus_signature(group, i) != principal) continue;
    total += count_representations(group, i, n);
    ++members;
  }
  return static_cast<double>(total) / static_cast<double>(members);
}

}  // namespace rsm
