// SPDX-License-Identifier: Apache-2.0
// Dirichlet L-functions of quadratic characters, zeta, symmetric-square data,
// Rankin-Selberg setups over imaginary quadratic orders, root numbers and
// central values by the approximate functional equation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsm/arith.hpp"
#include "rsm/hecke.hpp"
#include "rsm/quad_orders.hpp"
#include "rsm/special.hpp"

namespace rsm {

// Riemann zeta for real s > 0, s != 1.
double zeta(double s);
// L(s, chi) for real s > 0 (s != 1 for the trivial character), to about 1e-13.
double dirichlet_L(const QuadraticCharacter& chi, double s);
// L(s, chi) with the Euler factors at primes dividing `excluded` removed.
double partial_dirichlet_L(const QuadraticCharacter& chi, double s, i64 excluded);
// Symmetric difference quotient of log L^{(excluded)}(s, chi).
double dirichlet_L_log_derivative(const QuadraticCharacter& chi, double s, double h = 1e-4, i64 excluded = 1);

// zeta^{(c)}(2 s0) * sum_{(n,c)=1} C(n)^2 n^{-s0}, smoothed with exp(-(n/X)^2) at X, 2X, 4X.
struct Sym2Value {
  double s0 = 0.0;
  double X = 0.0;
  double raw[3] = {0.0, 0.0, 0.0};  // smoothed sums at X, 2X, 4X
  double value = 0.0;               // pole-term extrapolation (s0 > 1) or NaN when flagged
  double stability = 0.0;           // |extrapolation(X,2X) - extrapolation(2X,4X)|
  bool pole = false;                // log-linear growth detected
  double slope = 0.0;               // d raw / d log X (residue estimate when flagged)
};
Sym2Value sym2_value(const TensorCoefficients& T, i64 excluded, double s0, double tolerance = 1e-4);

// L(s, Sym^2 f) for one holomorphic form of squarefree level, by its own
// approximate functional equation (conductor level^2, sign +1).
class Sym2LFunction {
 public:
  explicit Sym2LFunction(const EigenSystem& f);
  // 0 < s < 1.75, where both cutoffs of the approximate functional equation have their poles left of the contour.
  double value(double s) const;
  // R(s) = sum_{(a, excluded) = 1} lambda(a^2) a^{-s}.
  double R(double s, i64 excluded) const;
  double R_log_derivative(double s, i64 excluded, double h = 1e-4) const;
  u64 terms() const { return coeff_.size() - 1; }

 private:
  double local_R(u64 p, double s) const;  // sum_e lambda(p^{2e}) p^{-es}
  EigenSystem f_;
  std::vector<double> coeff_;
  std::vector<double> shifts_;
};

// Archimedean factor of L(s, Pi x pi(Omega)).
ArchFactor rankin_arch(const TensorCoefficients& T);
// Y = |D_K|^{r/2} * c(Pi_K)^{1/2} * c'^r.
double rankin_conductor_root(const TensorCoefficients& T, i64 D_K, i64 basechange_conductor, i64 character_conductor);

struct RankinSetup {
  const TensorCoefficients* tensor = nullptr;
  const FormClassGroup* group = nullptr;
  std::optional<RingClassCharacter> character;
  i64 basechange_conductor = 1;  // c(Pi_K)
  double Y = 0.0;
  int root_number = 0;         // derived sign
  int stated_root_number = 0;  // eta(level) * eps(Pi); 0 when eps(Pi) is unknown
  int k = 0;                   // generic parity from root_number
  const QuadOrder& order() const { return group->order(); }
};
// basechange_conductor <= 0 selects level^2.
RankinSetup make_setup(const TensorCoefficients& T, const FormClassGroup& G, const RingClassCharacter& omega,
                       i64 basechange_conductor = 0);
int root_number(const RankinSetup& setup);
int stated_root_number(const RankinSetup& setup);

// K(n) = sum_{m^2 n <= cut*scale, (m, M) = 1} eta(m)/m * V(m^2 n / scale).
struct SmoothedKernel {
  double scale = 0.0;
  double cut = 0.0;
  u64 n_max = 0;
  std::vector<double> K;
  std::vector<double> harmonic;  // sum of |eta(m)|/m over the same m range
  double v_at_cut = 0.0;
  u64 pairs = 0;
};
SmoothedKernel build_kernel(CutoffFunction& V, const QuadraticCharacter& eta, i64 m_coprime, double scale, double cut);
struct KernelSum {
  double value = 0.0;
  double abs_sum = 0.0;
  u64 terms = 0;
};
// sum_n C(n) b(n) / sqrt(n) * K(n); b must already vanish where required.
KernelSum apply_kernel(const SmoothedKernel& kernel, const std::vector<double>& C, const std::vector<double>& b);

// r_A(n) tables (raw counts / w) for every class of the group, n <= n_max.
struct ClassTables {
  u64 n_max = 0;
  std::vector<std::vector<std::uint32_t>> counts;
  int w = 2;
};
ClassTables build_class_tables(const FormClassGroup& G, u64 n_max);
// C_Omega(n) = sum_A r_A(n) Omega(A), set to zero when gcd(n, coprime_to) > 1.
std::vector<double> character_coefficients(const ClassTables& tables, const RingClassCharacter& omega, i64 coprime_to);

struct CentralOptions {
  double tolerance = 1e-8;
  double A = 30.0;
  double B = 10.0;
  double balance = 1.0;  // X in I(X) + (-1)^k eps I(1/X)
  int force_k = -1;      // -1: generic parity from the root number
  double test_a = 0.0;   // Gaussian parameter of G_m
};
struct CentralValueResult {
  double value = 0.0;  // L(1/2) for k = 0, L'(1/2) for k = 1
  int k = 0;
  double Y = 0.0;
  int root_number = 0;
  u64 terms_used = 0;
  double tail_estimate = 0.0;
  double balance = 1.0;
  bool forced_parity = false;
  double I_X = 0.0, I_inv = 0.0;  // the two unbalanced sums
  double cut = 0.0;
};
// Evaluates the L-function of the primitive character underlying the setup's character: coefficients are read on
// the order of conductor f(Omega) and taken coprime to f(Omega).
CentralValueResult central_value(const RankinSetup& setup, const CentralOptions& opts = {});

struct RootNumberProbe {
  int sign = 0;
  double residual_plus = 0.0;   // failure of eps = +1 (relative)
  double residual_minus = 0.0;  // failure of eps = -1 (relative)
};
RootNumberProbe probe_root_number(const RankinSetup& setup, double X = 1.5);

}  // namespace rsm
