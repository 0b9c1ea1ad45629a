#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "logode/connection.hpp"
#include "logode/diff_op.hpp"
#include "logode/polynomial.hpp"
#include "logode/verify.hpp"

using namespace logode;

namespace {

Polynomial random_poly(RationalSampler& s, int dim, int max_deg) {
  Polynomial p(dim);
  MultiIndex e(dim, 0);
  for (;;) {
    int total = 0;
    for (int v : e) total += v;
    if (total <= max_deg && s.coin(2)) p.add_term(e, s.small());
    int i = 0;
    while (i < dim && e[i] == max_deg) e[i++] = 0;
    if (i == dim) break;
    ++e[i];
  }
  return p;
}

PolyVectorField random_field(RationalSampler& s, int dim, int max_deg) {
  std::vector<Polynomial> comps;
  for (int i = 0; i < dim; ++i) comps.push_back(random_poly(s, dim, max_deg));
  return PolyVectorField(std::move(comps));
}

Connection random_connection(RationalSampler& s, int dim, int max_deg) {
  Connection c(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) c.set_gamma(k, i, j, random_poly(s, dim, max_deg));
  return c;
}

// Coordinate-component route for the total covariant derivative of a vector
// field: (nabla T)^k_{i0 i...} = d_{i0} T^k_{i...} + Gamma^k_{i0 a} T^a_{i...}
//                               - sum_j Gamma^b_{i0 i_j} T^k_{... b ...}.
// Independent of the recursion used by the library.
struct TensorField {
  int dim;
  int rank;                                           // number of lower indices
  std::map<std::vector<int>, std::vector<Polynomial>> comp;  // lower indices -> upper components

  static TensorField from_field(const PolyVectorField& v) {
    TensorField t{v.dim(), 0, {}};
    t.comp[{}] = v.components;
    return t;
  }
};

TensorField total_cov_derivative(const Connection& conn, const TensorField& t) {
  const int d = t.dim;
  TensorField out{d, t.rank + 1, {}};
  std::vector<int> lower(out.rank, 0);
  for (;;) {
    int i0 = lower[0];
    std::vector<int> rest(lower.begin() + 1, lower.end());
    std::vector<Polynomial> comps(d, Polynomial(d));
    const auto& base = t.comp.at(rest);
    for (int k = 0; k < d; ++k) {
      comps[k] += base[k].derivative(i0);
      for (int a = 0; a < d; ++a) comps[k] += conn.gamma(k, i0, a) * base[a];
      for (int j = 0; j < t.rank; ++j)
        for (int b = 0; b < d; ++b) {
          auto bumped = rest;
          bumped[j] = b;
          comps[k] -= conn.gamma(b, i0, rest[j]) * t.comp.at(bumped)[k];
        }
    }
    out.comp[lower] = std::move(comps);
    int i = 0;
    while (i < out.rank && lower[i] == d - 1) lower[i++] = 0;
    if (i == out.rank) break;
    ++lower[i];
  }
  return out;
}

PolyVectorField contract(const TensorField& t, const std::vector<PolyVectorField>& us) {
  const int d = t.dim;
  PolyVectorField out(d);
  std::vector<int> lower(t.rank, 0);
  for (;;) {
    Polynomial weight = Polynomial::constant(d, 1);
    for (int j = 0; j < t.rank; ++j) weight = weight * us[j].components[lower[j]];
    const auto& comps = t.comp.at(lower);
    for (int k = 0; k < d; ++k) out.components[k] += weight * comps[k];
    int i = 0;
    while (i < t.rank && lower[i] == d - 1) lower[i++] = 0;
    if (i == t.rank || t.rank == 0) break;
    ++lower[i];
  }
  return out;
}

}  // namespace

TEST_CASE("polynomial arithmetic, derivative, eval, compose") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial p = x * x * y + rat(3, 2) * y;
  CHECK(p.derivative(0) == rat(2) * (x * y));
  CHECK(p.derivative(1) == x * x + Polynomial::constant(2, rat(3, 2)));
  CHECK(p.eval<Rational>({rat(2), rat(-1)}) == rat(-4) - rat(3, 2));
  CHECK(p.eval<double>({2.0, -1.0}) == doctest::Approx(-5.5));

  // compose p(x,y) with x = u+v, y = uv
  Polynomial u = Polynomial::variable(2, 0), v = Polynomial::variable(2, 1);
  Polynomial q = p.compose({u + v, u * v});
  RationalSampler s(17);
  for (int t = 0; t < 5; ++t) {
    Rational a = s.small(), b = s.small();
    CHECK(q.eval<Rational>({a, b}) == p.eval<Rational>({a + b, a * b}));
  }
}

TEST_CASE("operator application and identity") {
  Polynomial x = Polynomial::variable(1, 0);
  Polynomial f = x * x * x;
  CHECK(DiffOperator::identity(1).apply(f) == f);

  DiffOperator d1(1);
  d1.add_term({1}, Polynomial::constant(1, 1));
  CHECK(d1.apply(f) == rat(3) * (x * x));
}

TEST_CASE("compose in normal form: d1 o (x1 d1) = d1 + x1 d1 d1") {
  DiffOperator d1(1);
  d1.add_term({1}, Polynomial::constant(1, 1));
  DiffOperator x1d1(1);
  x1d1.add_term({1}, Polynomial::variable(1, 0));

  DiffOperator c = compose(d1, x1d1);
  DiffOperator expect(1);
  expect.add_term({1}, Polynomial::constant(1, 1));
  expect.add_term({2}, Polynomial::variable(1, 0));
  CHECK(c == expect);
}

TEST_CASE("compose is extensionally correct and associative") {
  RationalSampler s(23);
  const int d = 2;
  for (int trial = 0; trial < 6; ++trial) {
    DiffOperator a(d), b(d), c(d);
    for (DiffOperator* op : {&a, &b, &c})
      for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j)
          if (s.coin(2)) op->add_term({i, j}, random_poly(s, d, 2));
    DiffOperator ab = compose(a, b);
    // extensional equality on monomials of degree <= 4
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) {
        Polynomial mono(d);
        mono.add_term({i, j}, 1);
        CHECK(ab.apply(mono) == a.apply(b.apply(mono)));
      }
    CHECK(compose(ab, c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("vector field bracket") {
  const int d = 2;
  RationalSampler s(31);
  PolyVectorField v = random_field(s, d, 2);
  CHECK(vector_field_bracket(v, v).is_zero());

  // [d1, x1 d2] = d2
  PolyVectorField e1(d), x1e2(d), e2(d);
  e1.components[0] = Polynomial::constant(d, 1);
  x1e2.components[1] = Polynomial::variable(d, 0);
  e2.components[1] = Polynomial::constant(d, 1);
  CHECK(vector_field_bracket(e1, x1e2) == e2);

  // Jacobi identity on random degree <= 2 fields
  for (int trial = 0; trial < 4; ++trial) {
    PolyVectorField a = random_field(s, d, 2), b = random_field(s, d, 2),
                    c = random_field(s, d, 2);
    PolyVectorField jac = vector_field_bracket(a, vector_field_bracket(b, c)) +
                          vector_field_bracket(b, vector_field_bracket(c, a)) +
                          vector_field_bracket(c, vector_field_bracket(a, b));
    CHECK(jac.is_zero());
  }
}

TEST_CASE("covariant derivative of vector fields") {
  const int d = 2;
  RationalSampler s(37);

  // zero connection: directional derivative
  Connection flat(d);
  PolyVectorField u = random_field(s, d, 2), v = random_field(s, d, 2);
  PolyVectorField expect(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      expect.components[k] += u.components[i] * v.components[k].derivative(i);
  CHECK(flat.cov_deriv(u, v) == expect);

  // constant fields d1, d2 with Gamma^k_{1,2} = delta^k_1
  Connection c(d);
  c.set_gamma(0, 0, 1, Polynomial::constant(d, 1));
  PolyVectorField e1(d), e2(d);
  e1.components[0] = Polynomial::constant(d, 1);
  e2.components[1] = Polynomial::constant(d, 1);
  CHECK(c.cov_deriv(e1, e2) == e1);

  // function-linearity in the lower slot
  Connection g = random_connection(s, d, 2);
  Polynomial f = random_poly(s, d, 2);
  PolyVectorField fu = u;
  for (int k = 0; k < d; ++k) fu.components[k] = f * u.components[k];
  PolyVectorField lhs = g.cov_deriv(fu, v);
  PolyVectorField rhs = g.cov_deriv(u, v);
  for (int k = 0; k < d; ++k) rhs.components[k] = f * rhs.components[k];
  CHECK(lhs == rhs);
}

TEST_CASE("iterated covariant derivative of scalars") {
  const int d = 2;
  RationalSampler s(41);
  Connection flat(d);
  Connection g = random_connection(s, d, 2);
  PolyVectorField u = random_field(s, d, 2), v = random_field(s, d, 2);
  Polynomial phi = random_poly(s, d, 3);

  // base case
  CHECK(g.cov_deriv_scalar_n(phi, {u}) == u.apply(phi));

  // flat second derivative: U^i V^j d_i d_j phi
  Polynomial expect_flat(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      expect_flat += u.components[i] * v.components[j] * phi.derivative(i).derivative(j);
  CHECK(flat.cov_deriv_scalar_n(phi, {u, v}) == expect_flat);

  // general second derivative: (d_i d_j phi - Gamma^k_{ij} d_k phi) U^i V^j
  Polynomial expect_gen(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Polynomial hess = phi.derivative(i).derivative(j);
      for (int k = 0; k < d; ++k) hess -= g.gamma(k, i, j) * phi.derivative(k);
      expect_gen += u.components[i] * v.components[j] * hess;
    }
  CHECK(g.cov_deriv_scalar_n(phi, {u, v}) == expect_gen);

  // the operator route agrees with the direct recursion
  for (size_t n = 1; n <= 3; ++n) {
    std::vector<PolyVectorField> us;
    for (size_t k = 0; k < n; ++k) us.push_back(random_field(s, d, 1));
    CHECK(g.cov_scalar_operator(us).apply(phi) == g.cov_deriv_scalar_n(phi, us));
  }
}

TEST_CASE("iterated covariant derivative of fields") {
  const int d = 2;
  RationalSampler s(43);
  Connection g = random_connection(s, d, 1);
  PolyVectorField v = random_field(s, d, 2);

  // n = 1 reduces to the covariant derivative
  PolyVectorField u1 = random_field(s, d, 1);
  CHECK(g.cov_deriv_field_n(v, {u1}) == g.cov_deriv(u1, v));

  // flat case with constant directions: plain iterated partials
  Connection flat(d);
  PolyVectorField e1(d), e2(d);
  e1.components[0] = Polynomial::constant(d, 1);
  e2.components[1] = Polynomial::constant(d, 1);
  PolyVectorField expect(d);
  for (int k = 0; k < d; ++k) expect.components[k] = v.components[k].derivative(0).derivative(1);
  CHECK(flat.cov_deriv_field_n(v, {e1, e2}) == expect);

  // tensoriality in the first slot
  Polynomial f = random_poly(s, d, 1);
  PolyVectorField u2 = random_field(s, d, 1);
  PolyVectorField fu = u1;
  for (int k = 0; k < d; ++k) fu.components[k] = f * u1.components[k];
  PolyVectorField lhs = g.cov_deriv_field_n(v, {fu, u2});
  PolyVectorField rhs = g.cov_deriv_field_n(v, {u1, u2});
  for (int k = 0; k < d; ++k) rhs.components[k] = f * rhs.components[k];
  CHECK(lhs == rhs);

  // independent oracle: coordinate components of the total derivative
  TensorField t = TensorField::from_field(v);
  std::vector<PolyVectorField> us;
  for (int n = 1; n <= 3; ++n) {
    t = total_cov_derivative(g, t);
    us.insert(us.begin(), random_field(s, d, 1));
    CHECK(g.cov_deriv_field_n(v, us) == contract(t, us));
  }
}

TEST_CASE("torsion and curvature") {
  const int d = 2;
  RationalSampler s(47);
  Connection flat(d);
  PolyVectorField u = random_field(s, d, 2), v = random_field(s, d, 2),
                  w = random_field(s, d, 2);
  CHECK(flat.torsion(u, v).is_zero());
  CHECK(flat.curvature(u, v, w).is_zero());

  // symmetric Christoffel symbols kill the torsion
  Connection g = random_connection(s, d, 2);
  Connection sym = g.symmetrized();
  CHECK(sym.torsion(u, v).is_zero());

  // antisymmetry
  CHECK(g.torsion(u, v) == -Rational(1) * g.torsion(v, u));
  CHECK(g.curvature(u, v, w) == -Rational(1) * g.curvature(v, u, w));
}
