// SPDX-License-Identifier: Apache-2.0
// Hecke eigenvalue providers for holomorphic GL(2) forms and the tensor
// coefficients C(n) = prod_j lambda_j(n).
#pragma once

#include <array>
#include <mutex>
#include <string>
#include <vector>

#include "rsm/arith.hpp"

namespace rsm {

// Ramanujan-Petersson exponent toward Ramanujan and the subconvexity exponent,
// used only in reported bound slopes.
inline constexpr double kTheta = 7.0 / 64.0;
inline constexpr double kDelta = 103.0 / 512.0;

struct EigenSystem {
  std::string label;
  int weight = 2;
  i64 level = 1;  // squarefree
  int sign = 0;   // root number of the form: +1, -1, or 0 when unknown
  u64 p_max = 0;
  bool holomorphic = true;
  std::vector<double> lambda_at;  // indexed by integer, NaN off primes

  bool covers(u64 p) const { return p <= p_max; }
  double lambda_p(u64 p) const;
  double lambda_pk(u64 p, int k) const;  // Hecke recursion, trivial character
  double lambda(u64 n) const;            // via factorization
  // Half-weight (k-1)/2 of the discrete series at infinity.
  double half_weight() const { return 0.5 * (weight - 1); }
};

// tau(n) for 1 <= n <= n_max (index 0 unused), exact.
std::vector<i128> ramanujan_tau_table(u64 n_max);
// Independent O(n^2) reference: q * prod (1 - q^n)^24 through wrap-around 128-bit arithmetic.
std::vector<i128> ramanujan_tau_naive(u64 n_max);

// Directory for on-disk caches (environment variable RSM_CACHE_DIR), empty if unset.
std::string cache_directory();

EigenSystem delta_eigensystem(u64 p_max);

// a-invariants [a1, a2, a3, a4, a6] of a Weierstrass model.
using WeierstrassModel = std::array<i64, 5>;
i128 weierstrass_discriminant(const WeierstrassModel& a);
// a_p = p + 1 - #E(F_p): baby-step giant-step on good primes p >= 1000, direct count otherwise.
i64 elliptic_ap(const WeierstrassModel& a, u64 p);
// Direct O(p) count on the given model (projective points).
i64 elliptic_ap_naive(const WeierstrassModel& a, u64 p);
// level <= 0 selects the radical of the discriminant; sign 0 means unknown.
EigenSystem elliptic_eigensystem(const WeierstrassModel& a, u64 p_max, i64 level = 0, int sign = 0,
                                 const std::string& label = "");
EigenSystem elliptic_eigensystem_short(i64 a4, i64 a6, u64 p_max, i64 level = 0, int sign = 0);

EigenSystem load_eigensystem(const std::string& path);
void save_eigensystem(const EigenSystem& e, const std::string& path);

class TensorCoefficients {
 public:
  explicit TensorCoefficients(std::vector<EigenSystem> factors);
  size_t size() const { return factors_.size(); }  // N
  int rank() const { return 1 << factors_.size(); }  // r = 2^N
  const std::vector<EigenSystem>& factors() const { return factors_; }
  i64 level() const;  // product of the factor levels (conductor of the tensor)
  int sign() const;   // product of the factor signs (0 if any unknown)
  u64 p_max() const;  // common coverage bound
  std::string label() const;

  double coefficient(u64 n) const;
  // Ensures the cached table reaches n_max; call before concurrent reads.
  void prepare(u64 n_max) const;
  u64 prepared() const { return table_.empty() ? 0 : table_.size() - 1; }
  // Cached value; requires n <= prepared().
  double operator[](u64 n) const { return table_[n]; }
  const std::vector<double>& table() const { return table_; }

 private:
  double local(u64 p, int e) const;
  std::vector<EigenSystem> factors_;
  mutable std::vector<double> table_;
  mutable std::mutex mu_;
};

}  // namespace rsm
