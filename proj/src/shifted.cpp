// SPDX-License-Identifier: Apache-2.0
#include "rsm/shifted.hpp"

#include <algorithm>
#include <cmath>

#include "rsm/errors.hpp"
#include "rsm/parallel.hpp"

namespace rsm {

namespace {
constexpr double kGaussianLogCut = 5.26;  // exp(-(log y)^2) < 1e-12 beyond
}

Window parse_window(const std::string& name) {
  if (name == "compact") return Window::Compact;
  if (name == "gaussian") return Window::Gaussian;
  throw DomainError("unknown window '" + name + "' (expected compact or gaussian)");
}

std::string window_name(Window w) { return w == Window::Compact ? "compact" : "gaussian"; }

double window_value(Window w, double y) {
  if (!(y > 0.0)) return 0.0;
  const double u = std::log(y);
  if (w == Window::Gaussian) return std::fabs(u) > kGaussianLogCut ? 0.0 : std::exp(-u * u);
  const double v = u / std::log(2.0);  // bump on y in [1/2, 2]
  if (std::fabs(v) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

double window_lower(Window w) { return w == Window::Compact ? 0.5 : std::exp(-kGaussianLogCut); }
double window_upper(Window w) { return w == Window::Compact ? 2.0 : std::exp(kGaussianLogCut); }

double window_mass(Window w) {
  const double lo = std::log(window_lower(w)), hi = std::log(window_upper(w));
  constexpr int kN = 4000;
  double acc = 0.0;
  const double h = (hi - lo) / kN;
  for (int i = 0; i < kN; ++i) acc += window_value(w, std::exp(lo + (i + 0.5) * h)) * h;
  return acc;
}

namespace {

void validate(const ShiftedSumSpec& s) {
  if (s.tensor == nullptr) throw DomainError("shifted_sum: missing coefficients");
  if (s.q == 0) throw DomainError("shifted_sum: q must be nonzero");
  if (!(s.Y >= 4.0 * std::fabs(static_cast<double>(s.q))))
    throw DomainError("shifted_sum: Y must be at least 4|q|");
}

u64 gamma_limit(const ShiftedSumSpec& s) {
  // |g^2 + q| <= upper * Y requires g^2 <= upper * Y + |q|.
  const double top = window_upper(s.window) * s.Y + std::fabs(static_cast<double>(s.q));
  return static_cast<u64>(std::floor(std::sqrt(top))) + 1;
}

}  // namespace

ShiftedSumResult shifted_sum(const ShiftedSumSpec& spec) {
  validate(spec);
  const TensorCoefficients& T = *spec.tensor;
  const u64 gmax = gamma_limit(spec);
  const u64 n_top = static_cast<u64>(std::ceil(window_upper(spec.window) * spec.Y)) + 1;
  T.prepare(n_top);
  const auto& C = T.table();
  const double lo = window_lower(spec.window), hi = window_upper(spec.window);
  constexpr size_t kBlock = 4096;
  const size_t nb = (gmax + 1 + kBlock - 1) / kBlock;
  std::vector<ShiftedSumResult> parts(nb);
  parallel_blocks(gmax + 1, kBlock, [&](size_t b, size_t a0, size_t a1) {
    ShiftedSumResult r;
    for (size_t g = a0; g < a1; ++g) {
      const i64 n = static_cast<i64>(g * g) + spec.q;
      if (n == 0) continue;
      const u64 a = static_cast<u64>(std::llabs(n));
      const double y = static_cast<double>(a) / spec.Y;
      if (y < lo || y > hi) continue;
      const double v = window_value(spec.window, y);
      if (v == 0.0) continue;
      const double mult = g == 0 ? 1.0 : 2.0;
      const double t = mult * C[a] * v;
      r.S += t;
      r.S_normalized += t / std::sqrt(static_cast<double>(a));
      r.terms += g == 0 ? 1 : 2;
      if (n < 0) r.negative_arguments = true;
    }
    parts[b] = r;
  });
  ShiftedSumResult out;
  out.gamma_max = gmax;
  for (const auto& p : parts) {
    out.S += p.S;
    out.S_normalized += p.S_normalized;
    out.terms += p.terms;
    out.negative_arguments = out.negative_arguments || p.negative_arguments;
  }
  return out;
}

ShiftedSumResult shifted_sum_naive(const ShiftedSumSpec& spec) {
  validate(spec);
  const TensorCoefficients& T = *spec.tensor;
  const i64 gmax = static_cast<i64>(gamma_limit(spec));
  ShiftedSumResult out;
  out.gamma_max = static_cast<u64>(gmax);
  for (i64 g = -gmax; g <= gmax; ++g) {
    const i64 n = g * g + spec.q;
    if (n == 0) continue;
    const u64 a = static_cast<u64>(std::llabs(n));
    const double v = window_value(spec.window, static_cast<double>(a) / spec.Y);
    if (v == 0.0) continue;
    double c = 1.0;
    for (const auto& f : T.factors()) c *= f.lambda(a);
    out.S += c * v;
    out.S_normalized += c * v / std::sqrt(static_cast<double>(a));
    ++out.terms;
    if (n < 0) out.negative_arguments = true;
  }
  return out;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys, double* residual) {
  const size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw DomainError("least_squares_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares_slope: degenerate abscissae");
  const double slope = sxy / sxx;
  if (residual) {
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double e = ys[i] - (my + slope * (xs[i] - mx));
      ss += e * e;
    }
    *residual = std::sqrt(ss / n);
  }
  return slope;
}

ExponentFit exponent_fit(const TensorCoefficients& T, const std::vector<i64>& q_list, const std::vector<double>& Y_list,
                         Window window) {
  if (q_list.size() < 4 || Y_list.size() < 4) throw DomainError("exponent_fit: need at least 4 values per axis");
  const auto [ymin, ymax] = std::minmax_element(Y_list.begin(), Y_list.end());
  if (*ymax < 100.0 * *ymin) throw DomainError("exponent_fit: Y must span at least two decades");
  ExponentFit fit;
  fit.bound_slope_Y = -0.25 + kTheta / 2.0;
  fit.bound_slope_q = kDelta - kTheta / 2.0;
  fit.bound_slope_Y_unnormalized = 0.25 + kTheta / 2.0;
  std::vector<std::vector<double>> val(q_list.size(), std::vector<double>(Y_list.size()));
  for (size_t i = 0; i < q_list.size(); ++i)
    for (size_t j = 0; j < Y_list.size(); ++j) {
      ShiftedSumSpec s{&T, q_list[i], Y_list[j], window};
      const ShiftedSumResult r = shifted_sum(s);
      fit.grid.push_back({Y_list[j], q_list[i], r.S, r.S_normalized});
      val[i][j] = r.S_normalized;
    }
  auto logabs = [](double v) { return std::log(std::max(std::fabs(v), 1e-300)); };
  for (size_t i = 0; i < q_list.size(); ++i) {
    std::vector<double> xs, ys;
    for (size_t j = 0; j < Y_list.size(); ++j) {
      xs.push_back(std::log(Y_list[j]));
      ys.push_back(logabs(val[i][j]));
    }
    double res = 0.0;
    fit.slope_Y.push_back(least_squares_slope(xs, ys, &res));
    fit.residual_Y.push_back(res);
  }
  for (size_t j = 0; j < Y_list.size(); ++j) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < q_list.size(); ++i) {
      xs.push_back(std::log(std::fabs(static_cast<double>(q_list[i]))));
      ys.push_back(logabs(val[i][j]));
    }
    double res = 0.0;
    fit.slope_q.push_back(least_squares_slope(xs, ys, &res));
    fit.residual_q.push_back(res);
  }
  std::vector<double> ratios;
  for (size_t i = 0; i < q_list.size(); ++i)
    for (size_t i2 = 0; i2 < q_list.size(); ++i2)
      if (q_list[i2] == 2 * q_list[i])
        for (size_t j = 0; j < Y_list.size(); ++j)
          if (val[i][j] != 0.0) ratios.push_back(std::fabs(val[i2][j] / val[i][j]));
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const size_t m = ratios.size();
    fit.doubling_median = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  }
  return fit;
}

}  // namespace rsm
