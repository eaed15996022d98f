// SPDX-License-Identifier: Apache-2.0
// Quadratic orders, binary quadratic form class groups, ring class characters
// and representation counts.
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "rsm/arith.hpp"

namespace rsm {

struct PellSolution {
  i64 x = 0, y = 0;  // (x + y*sqrt(disc))/2 with x^2 - disc*y^2 = norm4
  int norm4 = 0;     // +4 or -4
};

struct QuadOrder {
  i64 fundamental_discriminant = 0;
  i64 conductor = 1;
  i64 discriminant = 0;  // D_K * c^2
  int unit_count = 2;    // w
  std::optional<PellSolution> pell;
};

// Validates D_K and builds the order of conductor c. Real orders get Pell data.
QuadOrder make_order(i64 D_K, i64 c);

struct BinaryForm {
  i64 a = 0, b = 0, c = 0;
  i64 discriminant() const { return b * b - 4 * a * c; }
  i64 eval(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
  bool operator==(const BinaryForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const BinaryForm& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
};

// Reduction of positive definite forms.
BinaryForm reduce(BinaryForm f);
bool is_reduced(const BinaryForm& f);
// Gauss composition of two primitive forms of equal negative discriminant (reduced result).
BinaryForm compose(const BinaryForm& f, const BinaryForm& g);
BinaryForm principal_form(i64 disc);
// All reduced primitive positive definite forms of discriminant disc < 0.
std::vector<BinaryForm> enumerate_reduced_forms(i64 disc);
// Equivalent form whose first coefficient is coprime to m (and odd when require_odd).
BinaryForm form_with_first_coefficient_coprime(const BinaryForm& f, i64 m, bool require_odd);

// h(O_c) via the class number formula for orders.
i64 dedekind_class_number(i64 D_K, i64 c);

class FormClassGroup {
 public:
  FormClassGroup(i64 D_K, i64 c);

  const QuadOrder& order() const { return order_; }
  i64 class_number() const { return static_cast<i64>(classes_.size()); }
  const std::vector<BinaryForm>& classes() const { return classes_; }
  const BinaryForm& form(int idx) const { return classes_[static_cast<size_t>(idx)]; }
  int identity() const { return 0; }
  int index_of(const BinaryForm& reduced) const;
  int mul(int i, int j) const { return table_[static_cast<size_t>(i) * classes_.size() + static_cast<size_t>(j)]; }
  int inverse(int i) const { return inverse_[static_cast<size_t>(i)]; }

  // Elementary divisors d_1 | d_2 | ... (all > 1; empty for the trivial group).
  const std::vector<i64>& structure() const { return structure_; }
  const std::vector<int>& generators() const { return generators_; }
  // Coordinates of a class in the elementary-divisor basis.
  const std::vector<i64>& dlog(int idx) const { return dlog_[static_cast<size_t>(idx)]; }
  i64 exponent() const { return structure_.empty() ? 1 : structure_.back(); }

  // Image of a class under Pic(O_c) -> Pic(O_{c'}) for c' | c, as a reduced form.
  BinaryForm project(int idx, i64 c_prime) const;
  // Class indices mapping to the identity of Pic(O_{c'}).
  std::vector<int> kernel_to(i64 c_prime) const;

 private:
  void build_structure();

  QuadOrder order_;
  std::vector<BinaryForm> classes_;
  std::map<BinaryForm, int> index_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<i64> structure_;
  std::vector<int> generators_;
  std::vector<std::vector<i64>> dlog_;
};

// Character of Pic(O_c); values are exp(2 pi i * exponent(A) / group exponent).
class RingClassCharacter {
 public:
  RingClassCharacter(const FormClassGroup* group, std::vector<i64> exponents, i64 conductor);
  const FormClassGroup& group() const { return *group_; }
  const std::vector<i64>& exponent_vector() const { return exps_; }
  i64 conductor() const { return conductor_; }
  // Exact value as an exponent modulo group().exponent().
  i64 value_exponent(int class_idx) const;
  std::complex<double> value(int class_idx) const;
  double real_value(int class_idx) const { return value(class_idx).real(); }
  bool is_trivial() const;
  bool is_real() const;  // Omega = conj(Omega)
  // Index of the conjugate character within characters(group).
  std::vector<i64> conjugate_exponents() const;

 private:
  const FormClassGroup* group_;
  std::vector<i64> exps_;
  i64 conductor_;
};

// All h characters with exact conductors, ordered by exponent vector.
std::vector<RingClassCharacter> characters(const FormClassGroup& group);
// Conductor of the character with the given exponents (smallest c' | c it factors through).
i64 character_conductor(const FormClassGroup& group, const std::vector<i64>& exps);

// r_A(n): representations of n by the reduced form of class A, divided by w.
i64 count_representations(const FormClassGroup& group, int class_idx, i64 n);
// Representations of n by a positive definite form (raw lattice count).
i64 count_form_points(const BinaryForm& f, i64 n);
// Raw lattice counts #{(x,y): f(x,y) = n} for all n <= n_max.
std::vector<std::uint32_t> form_point_table(const BinaryForm& f, i64 n_max);

// Principal-form count for a real quadratic order inside the fundamental domain
// for the automorph group modulo torsion, divided by w = 2.
i64 count_principal_real(const QuadOrder& order, i64 n);
// Fundamental solution of x^2 - disc*y^2 = +-4 with x, y > 0.
PellSolution pell_fundamental(i64 disc);

// Genus characters evaluated at a class (values in {+1,-1}).
std::vector<int> genus_signature(const FormClassGroup& group, int class_idx);
// Mean of r_A(n) over the classes in the genus of the principal form.
double genus_average(const FormClassGroup& group, i64 n);

}  // namespace rsm
