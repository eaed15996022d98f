// SPDX-License-Identifier: Apache-2.0
// Shifted convolution sums over gamma^2 + q and least-squares decay exponents.
#pragma once

#include <string>
#include <vector>

#include "rsm/hecke.hpp"

namespace rsm {

enum class Window { Compact, Gaussian };

Window parse_window(const std::string& name);
std::string window_name(Window w);
double window_value(Window w, double y);
// Support [lo, hi] outside which the window is treated as zero.
double window_lower(Window w);
double window_upper(Window w);
// Integral of V(y) dy / y.
double window_mass(Window w);

struct ShiftedSumSpec {
  const TensorCoefficients* tensor = nullptr;
  i64 q = 1;
  double Y = 1e3;
  Window window = Window::Compact;
};

struct ShiftedSumResult {
  double S = 0.0;             // sum C(|g^2+q|) V(|g^2+q|/Y)
  double S_normalized = 0.0;  // same with the extra factor |g^2+q|^{-1/2}
  u64 terms = 0;
  u64 gamma_max = 0;
  bool negative_arguments = false;  // some g^2 + q < 0 entered through |g^2+q|
};

ShiftedSumResult shifted_sum(const ShiftedSumSpec& spec);
// Two-sided sum over all integers g with coefficients recomputed by factorization.
ShiftedSumResult shifted_sum_naive(const ShiftedSumSpec& spec);

struct ShiftedRow {
  double Y = 0.0;
  i64 q = 0;
  double S = 0.0;
  double S_normalized = 0.0;
};

struct ExponentFit {
  std::vector<ShiftedRow> grid;
  std::vector<double> slope_Y;       // per q: d log|S_norm| / d log Y
  std::vector<double> residual_Y;    // rms residual of each fit
  std::vector<double> slope_q;       // per Y: d log|S_norm| / d log q
  std::vector<double> residual_q;
  double bound_slope_Y = 0.0;        // -1/4 + theta/2 for the normalized sum
  double bound_slope_q = 0.0;        // delta - theta/2
  double bound_slope_Y_unnormalized = 0.0;  // 1/4 + theta/2
  double doubling_median = 0.0;      // median |S_norm(2q)| / |S_norm(q)|
};

ExponentFit exponent_fit(const TensorCoefficients& T, const std::vector<i64>& q_list, const std::vector<double>& Y_list,
                         Window window = Window::Compact);

// Least-squares slope of ys against xs; rms residual returned through `residual`.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys, double* residual = nullptr);

}  // namespace rsm
