#pragma once

#include "logode/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace logode {

/// Exponent vector of a monomial; length = number of variables.
using MultiIndex = std::vector<int>;

/// Sparse multivariate polynomial with exact rational coefficients. Zero
/// coefficients are never stored. All arguments must share the dimension.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, Rational c) {
    Polynomial p(dim);
    p.add_term(MultiIndex(dim, 0), std::move(c));
    return p;
  }

  /// The coordinate monomial x_i (0-based).
  static Polynomial variable(int dim, int i, Rational coeff = 1) {
    Polynomial p(dim);
    MultiIndex e(dim, 0);
    e[i] = 1;
    p.add_term(std::move(e), std::move(coeff));
    return p;
  }

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(MultiIndex e, Rational c) {
    if (c == 0) return;
    if (static_cast<int>(e.size()) != dim_) throw std::invalid_argument("exponent dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coeff(const MultiIndex& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial out(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        MultiIndex e = ea;
        for (int i = 0; i < a.dim_; ++i) e[i] += eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Exact partial derivative with respect to x_i.
  Polynomial derivative(int i) const {
    Polynomial out(dim_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      MultiIndex d = e;
      --d[i];
      out.add_term(std::move(d), c * e[i]);
    }
    return out;
  }

  template <typename Scalar>
  Scalar eval(const std::vector<Scalar>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
    Scalar acc{};
    for (const auto& [e, c] : terms_) {
      Scalar term = scalar_cast<Scalar>(c);
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  /// Substitutes subs[i] for x_i; subs share an arbitrary common dimension.
  Polynomial compose(const std::vector<Polynomial>& subs) const {
    if (static_cast<int>(subs.size()) != dim_) throw std::invalid_argument("substitution arity mismatch");
    int out_dim = subs.empty() ? 0 : subs[0].dim();
    Polynomial acc(out_dim);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(out_dim, c);
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[i]; ++k) term = term * subs[i];
      acc += term;
    }
    return acc;
  }

  /// Extends to a larger variable set (new variables appended).
  Polynomial widen(int new_dim) const {
    if (new_dim < dim_) throw std::invalid_argument("widen cannot drop variables");
    Polynomial out(new_dim);
    for (const auto& [e, c] : terms_) {
      MultiIndex w = e;
      w.resize(new_dim, 0);
      out.add_term(std::move(w), c);
    }
    return out;
  }

  std::string str(const std::string& var = "x") const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += to_string(c);
      for (int i = 0; i < dim_; ++i)
        if (e[i] > 0) {
          s += "*" + var + std::to_string(i + 1);
          if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
    }
    return s;
  }

 private:
  template <typename Scalar>
  static Scalar scalar_cast(const Rational& c) {
    if constexpr (std::is_same_v<Scalar, Rational>)
      return c;
    else
      return static_cast<Scalar>(to_double(c));
  }

  void check_dim(const Polynomial& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("polynomial dimension mismatch");
  }

  int dim_ = 0;
  TermMap terms_;
};

/// Polynomial vector field V = V^i d_i on R^d.
struct PolyVectorField {
  std::vector<Polynomial> components;

  PolyVectorField() = default;
  explicit PolyVectorField(int dim) : components(dim, Polynomial(dim)) {}
  explicit PolyVectorField(std::vector<Polynomial> comps) : components(std::move(comps)) {
    for (const auto& c : components)
      if (c.dim() != dim()) throw std::invalid_argument("vector field component dimension mismatch");
  }

  int dim() const { return static_cast<int>(components.size()); }

  /// Directional derivative of a scalar: V(phi) = V^i d_i phi.
  Polynomial apply(const Polynomial& phi) const {
    Polynomial out(phi.dim());
    for (int i = 0; i < dim(); ++i) out += components[i] * phi.derivative(i);
    return out;
  }

  template <typename Scalar>
  std::vector<Scalar> eval(const std::vector<Scalar>& x) const {
    std::vector<Scalar> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.template eval<Scalar>(x));
    return out;
  }

  PolyVectorField& operator+=(const PolyVectorField& o) {
    if (o.dim() != dim()) throw std::invalid_argument("vector field dimension mismatch");
    for (int i = 0; i < dim(); ++i) components[i] += o.components[i];
    return *this;
  }
  PolyVectorField& operator-=(const PolyVectorField& o) {
    if (o.dim() != dim()) throw std::invalid_argument("vector field dimension mismatch");
    for (int i = 0; i < dim(); ++i) components[i] -= o.components[i];
    return *this;
  }
  PolyVectorField& operator*=(const Rational& c) {
    for (auto& comp : components) comp *= c;
    return *this;
  }
  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
  friend PolyVectorField operator*(const Rational& c, PolyVectorField a) { return a *= c; }

  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
    return a.components == b.components;
  }

  bool is_zero() const {
    for (const auto& c : components)
      if (!c.is_zero()) return false;
    return true;
  }
};

}  // namespace logode
