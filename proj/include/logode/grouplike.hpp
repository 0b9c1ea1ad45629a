#pragma once

#include "logode/hopf.hpp"

#include <optional>
#include <stdexcept>

namespace logode {

/// An element of a truncated dual Hopf algebra: the carrier of group-like and
/// primitive elements. Immutable by convention.
struct DualElement {
  FormalSum value;       // truncated at `level`
  Structure structure = Structure::tensor;
  int level = 0;

  DualElement() = default;
  DualElement(FormalSum v, Structure s, int n) : value(std::move(v)), structure(s), level(n) {
    if (n < 0) throw std::invalid_argument("negative level");
    value = value.truncate(n);
  }
};

inline void check_same_space(const DualElement& x, const DualElement& y) {
  if (x.structure != y.structure || x.level != y.level)
    throw std::invalid_argument("dual elements from different structures or levels");
}

/// Truncated product of the dual algebra (concatenation, GL star or MKW star
/// depending on the structure).
inline DualElement star(const DualElement& x, const DualElement& y) {
  check_same_space(x, y);
  return DualElement(hopf_product(dual_hopf(x.structure), x.value, y.value, x.level), x.structure,
                     x.level);
}

inline DualElement unit_element(Structure s, int level) {
  return DualElement(unit_sum(dual_hopf(s), level), s, level);
}

/// exp_n: sum of star-powers over factorials. Needs a vanishing grade-0 part;
/// truncation makes the series finite.
inline DualElement exp_n(const DualElement& h) {
  if (counit(dual_hopf(h.structure), h.value) != 0)
    throw std::invalid_argument("exp_n needs a vanishing grade-0 part");
  // Horner: r = 1 + h/N (1 + h/(N-1) (...))
  FormalSum r = unit_sum(dual_hopf(h.structure), h.level);
  for (int k = h.level; k >= 1; --k) {
    r = hopf_product(dual_hopf(h.structure), h.value, r, h.level);
    r *= Rational(1, k);
    r += unit_sum(dual_hopf(h.structure), h.level);
  }
  return DualElement(std::move(r), h.structure, h.level);
}

/// log_n: the alternating series in (g - 1); inverse of exp_n.
inline DualElement log_n(const DualElement& g) {
  if (counit(dual_hopf(g.structure), g.value) != 1)
    throw std::invalid_argument("log_n needs grade-0 part equal to 1");
  FormalSum h = g.value - unit_sum(dual_hopf(g.structure), g.level);
  // Horner for sum_{k=1}^{N} (-1)^{k+1} h^k / k:
  //   log = h (1/1 - h (1/2 - h (1/3 - ...)))
  FormalSum acc(std::optional<int>(g.level));
  for (int k = g.level; k >= 1; --k) {
    acc *= Rational(-1);
    FormalSum kth = unit_sum(dual_hopf(g.structure), g.level);
    kth *= Rational(1, k);
    acc += kth;
    acc = hopf_product(dual_hopf(g.structure), h, acc, g.level);
  }
  return DualElement(std::move(acc), g.structure, g.level);
}

/// Coproduct defect against x (x) x, in the truncated tensor square.
inline FormalSum grouplike_defect(const DualElement& x) {
  FormalSum cop = hopf_coproduct(dual_hopf(x.structure), x.value, x.level);
  FormalSum xx = tensor_product(x.value, x.value, x.level);
  return cop - xx;
}

/// Coproduct defect against x (x) 1 + 1 (x) x.
inline FormalSum primitive_defect(const DualElement& x) {
  FormalSum cop = hopf_coproduct(dual_hopf(x.structure), x.value, x.level);
  Key one = unit_key(dual_hopf(x.structure));
  FormalSum expected(std::optional<int>(x.level));
  for (const auto& [k, c] : x.value.terms()) {
    expected.add_term(tensor_key(k, one), c);
    expected.add_term(tensor_key(one, k), c);
  }
  // x (x) 1 + 1 (x) x double-counts the unit part of x
  Rational eps = counit(dual_hopf(x.structure), x.value);
  if (eps != 0) expected.add_term(tensor_key(one, one), -eps);
  return cop - expected;
}

/// Exact group-like test; `tolerance` > 0 switches to a per-coefficient bound
/// (used for numerically lifted paths).
inline bool is_grouplike(const DualElement& x, double tolerance = 0.0) {
  if (x.value.coeff(unit_key(dual_hopf(x.structure))) != 1) {
    if (tolerance == 0.0) return false;
    if (std::abs(to_double(x.value.coeff(unit_key(dual_hopf(x.structure)))) - 1.0) > tolerance)
      return false;
  }
  FormalSum d = grouplike_defect(x);
  if (tolerance == 0.0) return d.is_zero();
  return d.max_abs_coeff() <= tolerance;
}

inline bool is_primitive(const DualElement& x, double tolerance = 0.0) {
  if (counit(dual_hopf(x.structure), x.value) != 0) {
    if (tolerance == 0.0) return false;
    if (std::abs(to_double(counit(dual_hopf(x.structure), x.value))) > tolerance) return false;
  }
  FormalSum d = primitive_defect(x);
  if (tolerance == 0.0) return d.is_zero();
  return d.max_abs_coeff() <= tolerance;
}

/// Inverse in the truncated dual algebra via the geometric series in (1 - x).
/// For group-like x this is the antipode image S(x).
inline DualElement inverse(const DualElement& x, bool check = true) {
  if (check && !is_grouplike(x))
    throw std::invalid_argument("inverse: element is not group-like");
  FormalSum one = unit_sum(dual_hopf(x.structure), x.level);
  FormalSum h = one - x.value;  // nilpotent
  FormalSum acc = one;
  for (int k = 0; k < x.level; ++k) {
    acc = hopf_product(dual_hopf(x.structure), h, acc, x.level);
    acc += one;
  }
  return DualElement(std::move(acc), x.structure, x.level);
}

inline DualElement commutator(const DualElement& x, const DualElement& y) {
  check_same_space(x, y);
  FormalSum v = hopf_product(dual_hopf(x.structure), x.value, y.value, x.level) -
                hopf_product(dual_hopf(x.structure), y.value, x.value, x.level);
  return DualElement(std::move(v), x.structure, x.level);
}

}  // namespace logode
