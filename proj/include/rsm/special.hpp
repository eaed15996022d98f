// SPDX-License-Identifier: Apache-2.0
// Complex gamma machinery, archimedean factors, cutoff functions of the
// approximate functional equation, and Whittaker functions.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace rsm {

using cplx = std::complex<double>;

// Tolerances and design constants collected in one place.
struct SpecialConfig {
  double panel_width = 0.5;         // Gauss-Legendre panel length on vertical lines
  double decay_cut = 1e-16;         // stop once |integrand| < decay_cut * running max
  int max_panels = 4000;            // hard limit before a NumericError
  int nodes_per_decade = 512;       // cutoff cache density
  double left_sigma = -0.25;        // contour used for y < 1 after taking the residue
  std::vector<double> right_sigmas{2.0, 4.0, 8.0, 16.0, 32.0};
};
const SpecialConfig& special_config();

// Principal branch of log Gamma; relative error about 1e-15 for |z| <= 1e3.
cplx log_gamma(cplx z);
cplx digamma(cplx z);
// 1/Gamma(z), entire.
cplx rgamma(cplx z);

// One vertical line with precomputed weighted samples of a transform.
struct LineRule {
  double sigma = 0.0;
  std::vector<double> t;              // t >= 0 nodes (conjugate symmetry assumed)
  std::vector<cplx> weighted;         // weight * f(sigma + i t)
  double l1 = 0.0;                    // sum |weighted|, for error budgets
};
// Samples f on Re(s) = sigma for t >= 0 until decay; f must satisfy f(conj s) = conj f(s).
LineRule build_line_rule(const std::function<cplx(cplx)>& f, double sigma);
// (1/2 pi i) * integral over the full line of f(s) * y^{-s}, for the rule above.
double apply_line_rule(const LineRule& rule, double log_y);

// L_inf(s) = prod_j Gamma_R(s - mu_j), Gamma_R(s) = pi^{-s/2} Gamma(s/2).
struct ArchFactor {
  std::vector<double> shifts;
  cplx log_value(cplx s) const;
  cplx log_derivative(cplx s) const;
  std::string signature() const;
  // Archimedean factor of L(s, Pi x pi(Omega)) for Pi = tensor of holomorphic
  // forms with the given half-weights (k_j - 1)/2.
  static ArchFactor rankin_selberg(const std::vector<double>& half_weights);
  // Archimedean factor of a single holomorphic form of half-weight a.
  static ArchFactor gl2(double half_weight);
};

// G_m(s) = exp(a s^2) / s^m.
struct TestFunction {
  int m = 1;
  double a = 0.0;
  cplx value(cplx s) const;
};

// V(y) = (1/2 pi i) int_{(2)} G(s) L_inf(s+1/2)/L_inf(1/2) (1 - rho^s) y^{-s} ds,
// where rho = ratio^r; the factor in parentheses is omitted when log_rho = 0.
class CutoffFunction {
 public:
  CutoffFunction(ArchFactor arch, TestFunction test, double log_rho = 0.0);

  const ArchFactor& arch() const { return arch_; }
  const TestFunction& test() const { return test_; }
  int k() const { return test_.m - 1; }
  double log_rho() const { return log_rho_; }
  bool modified() const { return log_rho_ != 0.0; }

  // Mellin transform of V at s.
  cplx transform(cplx s) const;
  // Residue of transform(s) y^{-s} at s = 0.
  double residue(double y) const;
  // Contour evaluation without the cache.
  double direct(double y) const;
  // Cached evaluation (falls back to direct outside the prepared range).
  double operator()(double y) const;
  // Builds the interpolation grid on [ylo, yhi]; not thread-safe.
  void prepare(double ylo, double yhi);
  double cache_lo() const { return ylo_; }
  double cache_hi() const { return yhi_; }
  // Sum of |quadrature terms| at y: the absolute scale of rounding error.
  double error_scale(double y) const;

 private:
  const LineRule& pick_right(double log_y) const;

  ArchFactor arch_;
  TestFunction test_;
  double log_rho_;
  double psi0_;  // (L_inf'/L_inf)(1/2)
  LineRule left_;
  std::vector<LineRule> right_;
  double ylo_ = 0.0, yhi_ = 0.0, u0_ = 0.0, du_ = 0.0;
  std::vector<double> grid_;
};

// Whittaker function W_{p,nu}(y) for real p and nu real or purely imaginary.
struct WhittakerParams {
  double p = 0.0;
  cplx nu{0.0, 0.0};
  bool normalized = false;  // when set, p is q/2 with q an integer
};
// Classical W_{p,nu}(y) through its inverse Mellin presentation.
double whittaker_classical(double p, cplx nu, double y);
// Independent evaluation via Kummer series (requires 2 nu not an integer).
double whittaker_series(double p, cplx nu, double y);
// Normalized function: W_{p,nu}(4 pi |y|) / sqrt(Gamma(1/2 - nu + p) Gamma(1/2 + nu + p)),
// zero when 1/2 +- nu + p is a nonpositive integer. Sign of y flips p.
double whittaker_normalized(int q, cplx nu, double y);
double whittaker_eval(const WhittakerParams& params, double y);

// Gauss-Legendre rule on [-1, 1] with n nodes.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace rsm
