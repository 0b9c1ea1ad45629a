#pragma once

#include "logode/polynomial.hpp"

#include <map>

namespace logode {

/// Differential operator in normal form: sum over partial multi-indices w of
/// c_w(x) d_w. Partials commute on polynomials, so the count vector is the
/// canonical form and equality of operators is map equality.
class DiffOperator {
 public:
  using TermMap = std::map<MultiIndex, Polynomial>;

  DiffOperator() = default;
  explicit DiffOperator(int dim) : dim_(dim) {}

  static DiffOperator identity(int dim) {
    DiffOperator op(dim);
    op.add_term(MultiIndex(dim, 0), Polynomial::constant(dim, 1));
    return op;
  }

  static DiffOperator from_field(const PolyVectorField& v) {
    DiffOperator op(v.dim());
    for (int i = 0; i < v.dim(); ++i) {
      MultiIndex e(v.dim(), 0);
      e[i] = 1;
      op.add_term(std::move(e), v.components[i]);
    }
    return op;
  }

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int o = 0;
    for (const auto& [w, c] : terms_) {
      int s = 0;
      for (int k : w) s += k;
      o = std::max(o, s);
    }
    return o;
  }

  void add_term(MultiIndex w, Polynomial c) {
    if (c.is_zero()) return;
    if (static_cast<int>(w.size()) != dim_) throw std::invalid_argument("operator index dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(std::move(w), std::move(c));
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DiffOperator& operator+=(const DiffOperator& o) {
    check_dim(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  DiffOperator& operator-=(const DiffOperator& o) {
    check_dim(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  DiffOperator& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, v] : terms_) v *= c;
    return *this;
  }
  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
  friend DiffOperator operator*(const Rational& c, DiffOperator a) { return a *= c; }

  friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Applies the operator to a polynomial; linear and exact.
  Polynomial apply(const Polynomial& f) const {
    if (f.dim() != dim_) throw std::invalid_argument("operator/polynomial dimension mismatch");
    Polynomial out(dim_);
    for (const auto& [w, c] : terms_) {
      Polynomial g = f;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < w[i]; ++k) g = g.derivative(i);
      out += c * g;
    }
    return out;
  }

  /// If the operator is a vector field (order 1, no constant part), returns
  /// its components.
  PolyVectorField as_field() const {
    PolyVectorField v(dim_);
    for (const auto& [w, c] : terms_) {
      int s = 0, dir = -1;
      for (int i = 0; i < dim_; ++i) {
        s += w[i];
        if (w[i] == 1) dir = i;
      }
      if (s != 1) throw std::invalid_argument("operator is not a vector field");
      v.components[dir] += c;
    }
    return v;
  }

 private:
  void check_dim(const DiffOperator& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("operator dimension mismatch");
  }

  int dim_ = 0;
  TermMap terms_;
};

/// Composition by the generalized Leibniz rule:
/// d_u (b d_v f) = sum over componentwise splits S <= u of
/// prod_i C(u_i, S_i) (d_{u-S} b) d_{S+v} f.
inline DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
  const int d = a.dim();
  DiffOperator out(d);
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) {
      // enumerate S <= u componentwise
      MultiIndex s(d, 0);
      for (;;) {
        Rational mult = 1;
        for (int i = 0; i < d; ++i) mult *= Rational(binomial(u[i], s[i]));
        Polynomial db = cv;
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < u[i] - s[i]; ++k) db = db.derivative(i);
        if (!db.is_zero()) {
          MultiIndex w(d);
          for (int i = 0; i < d; ++i) w[i] = s[i] + v[i];
          out.add_term(std::move(w), mult * (cu * db));
        }
        int i = 0;
        while (i < d && s[i] == u[i]) s[i++] = 0;
        if (i == d) break;
        ++s[i];
      }
    }
  }
  return out;
}

/// Commutator of vector fields as a field; the second-order parts of the
/// operator commutator cancel.
inline PolyVectorField vector_field_bracket(const PolyVectorField& u, const PolyVectorField& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("vector field dimension mismatch");
  DiffOperator c = compose(DiffOperator::from_field(u), DiffOperator::from_field(v)) -
                   compose(DiffOperator::from_field(v), DiffOperator::from_field(u));
  return c.as_field();  // throws if anything above first order survived
}

}  // namespace logode
