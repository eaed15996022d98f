// SPDX-License-Identifier: Apache-2.0
// Harmonic averages of central values over ring class characters, computed
// character by character (route A) and through principal-form counts with
// Abel-summed cutoff differences (route B); main-term predictions, the
// diagonal Mellin check and primitive subaverages.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "rsm/hecke.hpp"
#include "rsm/lseries.hpp"
#include "rsm/quad_orders.hpp"

namespace rsm {

struct MomentOptions {
  int k = 0;
  double A = 30.0;
  double B = 10.0;
  double test_a = 0.0;
  i64 basechange_conductor = 0;  // <= 0: level^2
  std::vector<i64> ordering;     // divisor chain for route B; empty selects the default
};

struct CharacterValue {
  std::vector<i64> exponents;
  i64 conductor = 1;
  double Y = 0.0;
  double value = 0.0;
  u64 terms = 0;
};

struct DtildeTerm {
  i64 e = 1;         // order conductor of the counting function
  i64 from = 1;      // d_l
  i64 to = 1;        // d_{l+1}
  double weight = 0.0;  // sum of mu(d_i/e) h(O_e) over the chain prefix
  double value = 0.0;   // Dtilde_e(d_l -> d_{l+1})
};

struct MomentReport {
  i64 D_K = 0;
  i64 c = 1;
  std::string tensor;
  int k = 0;
  double Y = 0.0;
  i64 h = 1;
  int w = 2;
  std::vector<i64> ordering;
  std::vector<CharacterValue> per_character;  // route A
  double H_A = 0.0;
  bool has_A = false;
  double D_leading = 0.0;                     // route B
  std::vector<DtildeTerm> dtilde;
  double parasite = 0.0;                      // |sum weight * Dtilde| / h
  double H_B = 0.0;
  bool has_B = false;
  double route_gap = 0.0;                     // |H_A - H_B| when both present
  double tail_estimate = 0.0;
};

std::vector<i64> default_divisor_ordering(i64 c);

MomentReport average_route_A(const TensorCoefficients& T, const FormClassGroup& G, const MomentOptions& opts);
MomentReport average_route_B(const TensorCoefficients& T, i64 D_K, i64 c, const MomentOptions& opts);
// Runs both routes and fills route_gap.
MomentReport average_both(const TensorCoefficients& T, const FormClassGroup& G, const MomentOptions& opts);

struct MainTermInputs {
  double L1_eta = 0.0;        // L^{(c level)}(1, eta)
  double Lprime_over_L = 0.0; // (L'/L)^{(c level)}(1, eta)
  double ratio = 0.0;         // R_c(1) = L^{(c)}(1, Sym^2)/zeta^{(c)}(2) up to level factors
  double ratio_log_derivative = 0.0;
  double ratio_s0 = 0.0;      // s0-offset value of the symmetric-square series over zeta^{(c)}(2 s0)
  double s0 = 1.001;
  bool pole_flag = false;     // the symmetric-square series diverges at s = 1
  bool acknowledged = false;  // ratio comes from a pole-free evaluation
  double sym2_slope = 0.0;    // residue estimate from the diagnostic
  int w = 2;
  double Y = 0.0;
  double psi0 = 0.0;          // (L_inf'/L_inf)(1/2)
};
MainTermInputs main_term_inputs(const TensorCoefficients& T, i64 D_K, i64 c, i64 basechange_conductor = 0);
// Predicted H: (4/w) L R for k = 0, and (4/w) L R (log Y + 2 L'/L + 2 R'/R + psi0) for k = 1.
double main_term(const MainTermInputs& in, int k);
// Same prediction with the s0-offset ratio in place of R(1).
double main_term_s0(const MainTermInputs& in, int k);

struct B0Check {
  double direct = 0.0;
  double contour = 0.0;
  double gap = 0.0;  // relative
};
B0Check b0_contour_check(const TensorCoefficients& T, i64 D_K, i64 c, int k, double test_a = 0.0,
                         i64 basechange_conductor = 0);

struct PrimitiveAverage {
  double numerator = 0.0;  // sum_{c'|c} mu(c/c') h(O_c') H_c'
  i64 count = 0;           // number of primitive characters
  double value = 0.0;      // numerator / count, NaN when count = 0
};
PrimitiveAverage primitive_subaverage(i64 D_K, i64 c, const std::map<i64, double>& H);

}  // namespace rsm
