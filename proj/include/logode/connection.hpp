#pragma once

#include "logode/diff_op.hpp"
#include "logode/polynomial.hpp"

#include <vector>

namespace logode {

/// Linear connection in a coordinate chart: Christoffel symbols
/// Gamma^k_{i,j}, each a polynomial on R^d.
class Connection {
 public:
  Connection() = default;

  /// Zero connection (flat, torsion-free coordinates).
  explicit Connection(int dim)
      : dim_(dim), gamma_(dim, std::vector<std::vector<Polynomial>>(
                              dim, std::vector<Polynomial>(dim, Polynomial(dim)))) {}

  int dim() const { return dim_; }

  const Polynomial& gamma(int k, int i, int j) const { return gamma_[k][i][j]; }
  void set_gamma(int k, int i, int j, Polynomial p) {
    if (p.dim() != dim_) throw std::invalid_argument("christoffel symbol dimension mismatch");
    gamma_[k][i][j] = std::move(p);
  }

  bool is_zero() const {
    for (const auto& a : gamma_)
      for (const auto& b : a)
        for (const auto& p : b)
          if (!p.is_zero()) return false;
    return true;
  }

  /// nabla_U V = (U^i d_i V^k + U^i V^j Gamma^k_{i,j}) d_k.
  PolyVectorField cov_deriv(const PolyVectorField& u, const PolyVectorField& v) const {
    check(u);
    check(v);
    PolyVectorField out(dim_);
    for (int k = 0; k < dim_; ++k) {
      Polynomial comp(dim_);
      for (int i = 0; i < dim_; ++i) {
        comp += u.components[i] * v.components[k].derivative(i);
        for (int j = 0; j < dim_; ++j)
          comp += u.components[i] * v.components[j] * gamma_[k][i][j];
      }
      out.components[k] = std::move(comp);
    }
    return out;
  }

  /// n-th covariant derivative of a scalar contracted with the given fields:
  /// nabla^n phi (U_1,...,U_n), by the recursion
  ///   U_1(nabla^{n-1} phi(U_2..U_n)) - sum_k nabla^{n-1} phi(U_2,..,nabla_{U_1}U_k,..,U_n).
  Polynomial cov_deriv_scalar_n(const Polynomial& phi,
                                const std::vector<PolyVectorField>& us) const {
    if (us.empty()) return phi;
    if (us.size() == 1) return us[0].apply(phi);
    std::vector<PolyVectorField> rest(us.begin() + 1, us.end());
    Polynomial out = us[0].apply(cov_deriv_scalar_n(phi, rest));
    for (size_t k = 0; k < rest.size(); ++k) {
      auto modified = rest;
      modified[k] = cov_deriv(us[0], rest[k]);
      out -= cov_deriv_scalar_n(phi, modified);
    }
    return out;
  }

  /// Same contraction as an operator: phi |-> nabla^n phi (U_1,...,U_n).
  DiffOperator cov_scalar_operator(const std::vector<PolyVectorField>& us) const {
    if (us.empty()) return DiffOperator::identity(dim_);
    if (us.size() == 1) return DiffOperator::from_field(us[0]);
    std::vector<PolyVectorField> rest(us.begin() + 1, us.end());
    DiffOperator out = compose(DiffOperator::from_field(us[0]), cov_scalar_operator(rest));
    for (size_t k = 0; k < rest.size(); ++k) {
      auto modified = rest;
      modified[k] = cov_deriv(us[0], rest[k]);
      out -= cov_scalar_operator(modified);
    }
    return out;
  }

  /// n-th total covariant derivative of a vector field, contracted:
  /// nabla^n V (U_1,...,U_n). The new direction differentiates first, and the
  /// arguments pick up the Leibniz corrections.
  PolyVectorField cov_deriv_field_n(const PolyVectorField& v,
                                    const std::vector<PolyVectorField>& us) const {
    if (us.empty()) return v;
    if (us.size() == 1) return cov_deriv(us[0], v);
    std::vector<PolyVectorField> rest(us.begin() + 1, us.end());
    PolyVectorField out = cov_deriv(us[0], cov_deriv_field_n(v, rest));
    for (size_t k = 0; k < rest.size(); ++k) {
      auto modified = rest;
      modified[k] = cov_deriv(us[0], rest[k]);
      out -= cov_deriv_field_n(v, modified);
    }
    return out;
  }

  /// T(U,V) = nabla_U V - nabla_V U - [U,V].
  PolyVectorField torsion(const PolyVectorField& u, const PolyVectorField& v) const {
    return cov_deriv(u, v) - cov_deriv(v, u) - vector_field_bracket(u, v);
  }

  /// R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_{[U,V]} W.
  PolyVectorField curvature(const PolyVectorField& u, const PolyVectorField& v,
                            const PolyVectorField& w) const {
    return cov_deriv(u, cov_deriv(v, w)) - cov_deriv(v, cov_deriv(u, w)) -
           cov_deriv(vector_field_bracket(u, v), w);
  }

  /// Torsion-symmetrized connection: Gamma~^k_{ij} = (Gamma^k_{ij}+Gamma^k_{ji})/2.
  Connection symmetrized() const {
    Connection out(dim_);
    for (int k = 0; k < dim_; ++k)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          out.gamma_[k][i][j] = (gamma_[k][i][j] + gamma_[k][j][i]) * Rational(1, 2);
    return out;
  }

 private:
  void check(const PolyVectorField& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("field/connection dimension mismatch");
  }

  int dim_ = 0;
  std::vector<std::vector<std::vector<Polynomial>>> gamma_;  // [k][i][j]
};

}  // namespace logode
