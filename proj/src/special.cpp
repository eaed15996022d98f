// SPDX-License-Identifier: Apache-2.0
#include "rsm/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>
#include <sstream>

#include "rsm/errors.hpp"

namespace rsm {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLogPi = 1.1447298858494002;
constexpr double kHalfLog2Pi = 0.91893853320467274;

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}
}  // namespace

const SpecialConfig& special_config() {
  static const SpecialConfig cfg;
  return cfg;
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw DomainError("log_gamma: pole at a nonpositive integer");
  cplx shift = 0.0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static const double c[] = {1.0 / 12.0,  -1.0 / 360.0, 1.0 / 1260.0,     -1.0 / 1680.0,
                             1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
  const cplx inv = 1.0 / z, inv2 = inv * inv;
  cplx series = 0.0, pw = inv;
  for (double ck : c) {
    series += ck * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

cplx digamma(cplx z) {
  if (is_nonpositive_integer(z)) throw DomainError("digamma: pole at a nonpositive integer");
  cplx shift = 0.0;
  while (z.real() < 15.0) {
    shift += 1.0 / z;
    z += 1.0;
  }
  static const double d[] = {1.0 / 12.0,  -1.0 / 120.0,      1.0 / 252.0, -1.0 / 240.0,
                             1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
  const cplx inv = 1.0 / z, inv2 = inv * inv;
  cplx series = 0.0, pw = inv2;
  for (double dk : d) {
    series += dk * pw;
    pw *= inv2;
  }
  return std::log(z) - 0.5 * inv - series - shift;
}

cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[static_cast<size_t>(i)] = -z;
    x[static_cast<size_t>(n - 1 - i)] = z;
    w[static_cast<size_t>(i)] = w[static_cast<size_t>(n - 1 - i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

LineRule build_line_rule(const std::function<cplx(cplx)>& f, double sigma) {
  static std::vector<double> gx, gw;
  static const bool init = (gauss_legendre(20, gx, gw), true);
  (void)init;
  const auto& cfg = special_config();
  LineRule rule;
  rule.sigma = sigma;
  const double h = cfg.panel_width;
  double running_max = 0.0;
  int quiet = 0;
  for (int panel = 0;; ++panel) {
    if (panel >= cfg.max_panels)
      throw NumericError("vertical-line quadrature did not decay on Re(s) = " + std::to_string(sigma));
    const double a = panel * h;
    double panel_max = 0.0;
    for (size_t i = 0; i < gx.size(); ++i) {
      const double t = a + 0.5 * h * (gx[i] + 1.0);
      const cplx v = f(cplx(sigma, t));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericError("non-finite integrand on Re(s) = " + std::to_string(sigma) + " at t = " + std::to_string(t));
      const cplx wv = v * (0.5 * h * gw[i]);
      rule.t.push_back(t);
      rule.weighted.push_back(wv);
      rule.l1 += std::abs(wv);
      panel_max = std::max(panel_max, std::abs(v));
    }
    running_max = std::max(running_max, panel_max);
    quiet = (panel_max < cfg.decay_cut * running_max) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  return rule;
}

double apply_line_rule(const LineRule& rule, double log_y) {
  double acc = 0.0;
  for (size_t i = 0; i < rule.t.size(); ++i) {
    const double ph = -rule.t[i] * log_y;
    acc += rule.weighted[i].real() * std::cos(ph) - rule.weighted[i].imag() * std::sin(ph);
  }
  return std::exp(-rule.sigma * log_y) * acc / kPi;
}

// ---------------------------------------------------------------------------

cplx ArchFactor::log_value(cplx s) const {
  cplx acc = 0.0;
  for (double mu : shifts) {
    const cplx z = s - mu;
    acc += -0.5 * z * kLogPi + log_gamma(0.5 * z);
  }
  return acc;
}

cplx ArchFactor::log_derivative(cplx s) const {
  cplx acc = 0.0;
  for (double mu : shifts) acc += -0.5 * kLogPi + 0.5 * digamma(0.5 * (s - mu));
  return acc;
}

std::string ArchFactor::signature() const {
  std::vector<double> s = shifts;
  std::sort(s.begin(), s.end());
  std::ostringstream os;
  os << "GammaR[";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

ArchFactor ArchFactor::rankin_selberg(const std::vector<double>& half_weights) {
  if (half_weights.empty()) throw DomainError("rankin_selberg: need at least one factor");
  std::vector<double> a{half_weights[0]};
  for (size_t j = 1; j < half_weights.size(); ++j) {
    std::vector<double> next;
    for (double x : a) {
      next.push_back(x + half_weights[j]);
      next.push_back(std::fabs(x - half_weights[j]));
    }
    a = next;
  }
  ArchFactor f;
  for (double x : a)
    for (int rep = 0; rep < 2; ++rep) {
      f.shifts.push_back(-x);
      f.shifts.push_back(-x - 1.0);
    }
  return f;
}

ArchFactor ArchFactor::gl2(double half_weight) {
  ArchFactor f;
  f.shifts = {-half_weight, -half_weight - 1.0};
  return f;
}

cplx TestFunction::value(cplx s) const {
  cplx v = std::exp(a * s * s);
  for (int i = 0; i < m; ++i) v /= s;
  return v;
}

// ---------------------------------------------------------------------------

CutoffFunction::CutoffFunction(ArchFactor arch, TestFunction test, double log_rho)
    : arch_(std::move(arch)), test_(test), log_rho_(log_rho) {
  if (test_.m != 1 && test_.m != 2) throw DomainError("CutoffFunction: pole order must be 1 or 2");
  if (test_.a < 0.0) throw DomainError("CutoffFunction: Gaussian parameter must be >= 0");
  if (!std::isfinite(log_rho_)) throw DomainError("CutoffFunction: ratio must be positive");
  const auto& cfg = special_config();
  for (double mu : arch_.shifts)
    if (mu - 0.5 >= cfg.left_sigma) throw DomainError("CutoffFunction: archimedean pole to the right of the left contour");
  psi0_ = arch_.log_derivative(0.5).real();
  auto f = [this](cplx s) { return transform(s); };
  left_ = build_line_rule(f, cfg.left_sigma);
  for (double sg : cfg.right_sigmas) right_.push_back(build_line_rule(f, sg));
}

cplx CutoffFunction::transform(cplx s) const {
  static const cplx half(0.5, 0.0);
  cplx v = test_.value(s) * std::exp(arch_.log_value(s + half) - arch_.log_value(half));
  if (log_rho_ != 0.0) v *= 1.0 - std::exp(s * log_rho_);
  return v;
}

double CutoffFunction::residue(double y) const {
  if (test_.m == 1) return modified() ? 0.0 : 1.0;
  return modified() ? -log_rho_ : psi0_ - std::log(y);
}

const LineRule& CutoffFunction::pick_right(double log_y) const {
  size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < right_.size(); ++i) {
    double v = std::log(right_[i].l1) - right_[i].sigma * log_y;
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  return right_[best];
}

double CutoffFunction::direct(double y) const {
  if (!(y > 0.0)) throw DomainError("cutoff_eval: y must be positive");
  const double ly = std::log(y);
  if (y < 1.0) return residue(y) + apply_line_rule(left_, ly);
  return apply_line_rule(pick_right(ly), ly);
}

double CutoffFunction::error_scale(double y) const {
  const double ly = std::log(y);
  const LineRule& r = y < 1.0 ? left_ : pick_right(ly);
  return r.l1 * std::exp(-r.sigma * ly) / kPi;
}

void CutoffFunction::prepare(double ylo, double yhi) {
  if (!(ylo > 0.0) || !(yhi > ylo)) throw DomainError("CutoffFunction::prepare: bad range");
  if (!grid_.empty() && ylo >= ylo_ && yhi <= yhi_) return;
  if (!grid_.empty()) {
    ylo = std::min(ylo, ylo_);
    yhi = std::max(yhi, yhi_);
  }
  du_ = std::log(10.0) / special_config().nodes_per_decade;
  u0_ = std::log(ylo);
  const size_t n = static_cast<size_t>(std::ceil((std::log(yhi) - u0_) / du_)) + 1;
  grid_.resize(n + 3);
  for (size_t i = 0; i < n + 3; ++i) grid_[i] = direct(std::exp(u0_ + (static_cast<double>(i) - 1.0) * du_));
  ylo_ = ylo;
  yhi_ = std::exp(u0_ + static_cast<double>(n - 1) * du_);
}

double CutoffFunction::operator()(double y) const {
  if (grid_.empty() || y < ylo_ || y > yhi_) return direct(y);
  const double x = (std::log(y) - u0_) / du_;
  size_t i = static_cast<size_t>(x);
  const double f = x - static_cast<double>(i);
  // Four-point Lagrange stencil on nodes i-1..i+2 (grid index shifted by one).
  const double* g = &grid_[i];
  const double fm = f + 1.0, f1 = f - 1.0, f2 = f - 2.0;
  return -g[0] * f * f1 * f2 / 6.0 + g[1] * fm * f1 * f2 / 2.0 - g[2] * fm * f * f2 / 2.0 + g[3] * fm * f * f1 / 6.0;
}

// ---------------------------------------------------------------------------
// Whittaker functions

namespace {

void check_whittaker_domain(double p, cplx nu, double y) {
  if (!(y >= 1e-6 && y <= 50.0 * 4.0 * kPi)) throw DomainError("whittaker: y outside the supported range");
  if (std::fabs(p) > 50.0 || std::abs(nu) > 50.0) throw DomainError("whittaker: |p| and |nu| must be <= 50");
  if (nu.real() != 0.0 && nu.imag() != 0.0) throw DomainError("whittaker: nu must be real or purely imaginary");
}

// Real part of the rightmost pole of Gamma(1/2 + s + nu) Gamma(1/2 + s - nu) / Gamma(1 + s - p).
double rightmost_whittaker_pole(double p, cplx nu) {
  if (nu.imag() != 0.0) return -0.5 + std::fabs(nu.real());
  constexpr int kDepth = 400;
  std::map<long long, int> order;  // pole positions in units of 1/2^20
  auto key = [](double s) { return std::llround(s * 1048576.0); };
  for (int n = 0; n < kDepth; ++n) {
    ++order[key(-0.5 - nu.real() - n)];
    ++order[key(-0.5 + nu.real() - n)];
  }
  for (int m = 0; m < 2 * kDepth; ++m) {
    auto it = order.find(key(p - 1.0 - m));
    if (it != order.end() && it->second > 0) --it->second;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (it->second > 0) return static_cast<double>(it->first) / 1048576.0;
  return -0.5 - std::fabs(nu.real()) - kDepth;
}
}  // namespace

double whittaker_classical(double p, cplx nu, double y) {
  check_whittaker_domain(p, nu, y);
  const cplx half(0.5, 0.0);
  auto f = [&](cplx s) {
    const cplx z = 1.0 + s - p;
    return std::exp(log_gamma(half + s + nu) + log_gamma(half + s - nu)) * rgamma(z);
  };
  // Contour: half a unit right of the rightmost pole that survives the zeros of
  // 1/Gamma(1 + s - p); moved right toward the saddle of the integrand when y
  // is large, so the result is not a cancellation residue.
  const double sigma_min = rightmost_whittaker_pole(p, nu) + 0.5;
  const double ly = std::log(y);
  double sigma = sigma_min, best = std::numeric_limits<double>::infinity();
  for (double sg = sigma_min; sg <= sigma_min + y + 10.0; sg += 0.25) {
    double v;
    try {
      v = std::log(std::abs(f(cplx(sg, 0.0))) + 1e-300) - sg * ly;
    } catch (const DomainError&) {
      continue;  // removable singularity of the integrand on the real axis
    }
    if (v < best) {
      best = v;
      sigma = sg;
    }
  }
  const LineRule rule = build_line_rule(f, sigma);
  return std::exp(0.5 * y) * apply_line_rule(rule, ly);
}

double whittaker_series(double p, cplx nu, double y) {
  const double two_nu_re = 2.0 * nu.real();
  if (nu.imag() == 0.0 && two_nu_re == std::floor(two_nu_re))
    throw DomainError("whittaker_series: 2 nu must not be an integer");
  auto M = [&](cplx mu) {
    const cplx a = 0.5 + mu - p, b = 1.0 + 2.0 * mu;
    cplx term = 1.0, sum = 1.0;
    for (int n = 0; n < 2000; ++n) {
      term *= (a + static_cast<double>(n)) / ((b + static_cast<double>(n)) * static_cast<double>(n + 1)) * y;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(-0.5 * y + (0.5 + mu) * std::log(y)) * sum;
  };
  const cplx t1 = std::exp(log_gamma(-2.0 * nu)) * rgamma(0.5 - nu - p) * M(nu);
  const cplx t2 = std::exp(log_gamma(2.0 * nu)) * rgamma(0.5 + nu - p) * M(-nu);
  return (t1 + t2).real();
}

double whittaker_normalized(int q, cplx nu, double y) {
  if (y == 0.0) throw DomainError("whittaker_normalized: y must be nonzero");
  const int sg = y > 0 ? 1 : -1;
  const double p = 0.5 * sg * q;
  const bool imaginary = nu.real() == 0.0;
  const double nr = nu.real();
  bool admissible;
  if (imaginary) {
    admissible = true;
  } else if (q % 2 == 0) {
    admissible = (std::fabs(nr) < 0.5) || (nr - 0.5 == std::floor(nr - 0.5));
  } else {
    admissible = nr == std::floor(nr);
  }
  if (!admissible) throw DomainError("whittaker_normalized: nu outside the admissible set for this parity of q");
  const cplx a1 = 0.5 - nu + p, a2 = 0.5 + nu + p;
  if (is_nonpositive_integer(a1) || is_nonpositive_integer(a2)) return 0.0;
  const cplx lden = log_gamma(a1) + log_gamma(a2);
  const cplx den = std::exp(lden);
  if (den.real() <= 0.0 || std::fabs(den.imag()) > 1e-10 * std::fabs(den.real()))
    throw DomainError("whittaker_normalized: normalizing gamma product is not positive");
  const double z = 4.0 * kPi * std::fabs(y);
  return whittaker_classical(p, nu, z) * std::exp(-0.5 * lden.real());
}

double whittaker_eval(const WhittakerParams& params, double y) {
  if (params.normalized) {
    const double q2 = 2.0 * params.p;
    if (q2 != std::round(q2)) throw DomainError("whittaker_eval: normalized case needs p = q/2 with integer q");
    if (!(std::fabs(y) >= 1e-6 && std::fabs(y) <= 50.0)) throw DomainError("whittaker_eval: y outside [1e-6, 50]");
    return whittaker_normalized(static_cast<int>(std::lround(q2)), params.nu, y);
  }
  if (!(y >= 1e-6 && y <= 50.0)) throw DomainError("whittaker_eval: y outside [1e-6, 50]");
  return whittaker_classical(params.p, params.nu, y);
}

}  // namespace rsm
