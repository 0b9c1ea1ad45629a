#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "logode/pushforward.hpp"
#include "logode/solver.hpp"
#include "logode/verify.hpp"

#include <set>

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

std::vector<Polynomial> random_map(RationalSampler& s, int dim_in, int dim_out, int max_deg) {
  std::vector<Polynomial> out;
  for (int i = 0; i < dim_out; ++i) out.push_back(random_poly(s, dim_in, max_deg));
  return out;
}

std::vector<Polynomial> identity_map(int dim) {
  std::vector<Polynomial> out;
  for (int i = 0; i < dim; ++i) out.push_back(Polynomial::variable(dim, i));
  return out;
}

Polynomial partial_word(Polynomial p, const Word& w) {
  for (int letter : w.letters) p = p.derivative(letter - 1);
  return p;
}

}  // namespace

TEST_CASE("one-form word coefficients") {
  RationalSampler s(3);
  auto phi = random_map(s, 2, 2, 3);
  OneForm nu = differential_one_form(phi);

  // single letters are the raw components: nu_(i) = d_i phi
  for (int i = 1; i <= 2; ++i)
    for (int a = 0; a < 2; ++a)
      CHECK(nu.word_coeff(Word{i})[a] == phi[a].derivative(i - 1));

  // w = (1,2): nu_w = d_1 nu_2 = d_1 d_2 phi
  for (int a = 0; a < 2; ++a)
    CHECK(nu.word_coeff(Word{1, 2})[a] == phi[a].derivative(1).derivative(0));

  CHECK_THROWS_AS(nu.word_coeff(Word{}), std::invalid_argument);
}

TEST_CASE("local expansion of the identity, a linear map, and a quadratic map") {
  LocalExpansion id = local_pushforward_expansion(identity_map(2), 2);
  for (const auto& [w, per_u] : id.coeffs)
    for (const auto& [u, poly] : per_u) {
      if (u == w)
        CHECK(poly == Polynomial::constant(2, 1));
      else
        CHECK(poly.is_zero());
    }

  // linear map A: coefficient of u=(k,l) in w=(i,j) is A_{ik} A_{jl}
  RationalSampler s(5);
  std::vector<std::vector<Rational>> a(2, std::vector<Rational>(2));
  std::vector<Polynomial> lin(2, Polynomial(2));
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      a[i][k] = s.nonzero();
      lin[i] += a[i][k] * Polynomial::variable(2, k);
    }
  LocalExpansion le = local_pushforward_expansion(lin, 2);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
          const Polynomial* c = le.coeff(Word{i, j}, Word{k, l});
          REQUIRE(c != nullptr);
          CHECK(*c == Polynomial::constant(2, a[i - 1][k - 1] * a[j - 1][l - 1]));
        }
  // only the |u| = |w| splittings survive for linear maps
  CHECK(le.coeff(Word{1}, Word{1, 2}) == nullptr);

  // quadratic map: level-2 words contribute second partials to single letters
  auto quad = random_map(s, 2, 2, 2);
  LocalExpansion qe = local_pushforward_expansion(quad, 2);
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k)
      for (int l = 1; l <= 2; ++l) {
        const Polynomial* c = qe.coeff(Word{i}, Word{k, l});
        Polynomial expect = quad[i - 1].derivative(k - 1).derivative(l - 1);
        if (c)
          CHECK(*c == expect);
        else
          CHECK(expect.is_zero());
      }
}

TEST_CASE("push-forward under the identity is the path itself") {
  PiecewiseLinearPath p;
  p.times = {0, rat(1, 2), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(-1)}, {rat(1, 2), rat(1)}};
  RoughPath x = signature_lift(p, 2);
  std::vector<Rational> grid{0, rat(1, 4), rat(1, 2), rat(3, 4), 1};
  RoughPath y = pushforward(x, identity_map(2), 2, grid);
  for (size_t a = 0; a < grid.size(); ++a)
    for (size_t b = a + 1; b < grid.size(); ++b)
      CHECK(y.evaluate(grid[a], grid[b]).value == x.evaluate(grid[a], grid[b]).value);
}

TEST_CASE("push-forward under a linear map is the signature of the image path") {
  RationalSampler s(7);
  std::vector<Polynomial> lin(2, Polynomial(2));
  std::vector<std::vector<Rational>> a(2, std::vector<Rational>(2));
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      a[i][k] = s.nonzero();
      lin[i] += a[i][k] * Polynomial::variable(2, k);
    }
  PiecewiseLinearPath p;
  p.times = {0, rat(1, 3), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(2)}, {rat(-1), rat(1)}};
  RoughPath x = signature_lift(p, 2);

  PiecewiseLinearPath image;
  image.times = p.times;
  for (const auto& pt : p.points) {
    std::vector<Rational> q(2, Rational(0));
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) q[i] += a[i][k] * pt[k];
    image.points.push_back(q);
  }
  RoughPath direct = signature_lift(image, 2);

  std::vector<Rational> grid{0, rat(1, 6), rat(1, 3), rat(2, 3), 1};
  RoughPath y = pushforward(x, lin, 2, grid);
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    FormalSum defect =
        y.evaluate(grid[i], grid[i + 1]).value - direct.evaluate(grid[i], grid[i + 1]).value;
    CHECK(defect.is_zero());  // exactly multiplicative for linear maps
  }
}

TEST_CASE("trace consistency and approximate shuffle identity for a nonlinear map") {
  RationalSampler s(11);
  auto phi = random_map(s, 2, 2, 2);
  PiecewiseLinearPath p;
  p.times = {0, 1};
  p.points = {{rat(0), rat(0)}, {rat(1, 2), rat(1, 3)}};
  RoughPath x = signature_lift(p, 2);
  const int pieces = 128;
  std::vector<Rational> grid;
  for (int i = 0; i <= pieces; ++i) grid.push_back(Rational(i, pieces));
  RoughPath y = pushforward(x, phi, 2, grid);

  std::vector<Rational> x0 = x.trace(Rational(0)), x1 = x.trace(Rational(1));
  for (int a = 0; a < 2; ++a) {
    double increment = to_double(y.evaluate(Rational(0), Rational(1)).value.coeff(Key(Word{a + 1})));
    double expect = to_double(phi[a].eval<Rational>(x1) - phi[a].eval<Rational>(x0));
    CHECK(std::abs(increment - expect) < 1e-6);
  }

  // group-like within tolerance on the coarse interval
  DualElement val = y.evaluate(Rational(0), Rational(1));
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      double lhs = to_double(val.value.coeff(Key(Word{i})) * val.value.coeff(Key(Word{j})));
      double rhs = to_double(val.value.coeff(Key(Word{i, j})) + val.value.coeff(Key(Word{j, i})));
      CHECK(std::abs(lhs - rhs) < 1e-5);
    }
}

TEST_CASE("solution expansion at single letters is the solver's local model") {
  RationalSampler s(31);
  PolyVectorField v1 = random_field(s, 2, 2), v2 = random_field(s, 2, 2);
  std::vector<Polynomial> phi = identity_map(2);
  LocalExpansion exp = solution_expansion({v1, v2}, phi, 2);

  ElementaryDifferential map(Structure::tensor, {v1, v2});
  for (int i = 1; i <= 2; ++i)
    for (const auto& uk : basis_keys_up_to(HopfStructure::tensor_words, 2, 2)) {
      if (uk.word().empty()) continue;
      const Polynomial* c = exp.coeff(Word{i}, uk.word());
      Polynomial want = map.differential(uk).apply(phi[i - 1]);
      if (c)
        CHECK(*c == want);
      else
        CHECK(want.is_zero());
    }

  // the trace statement: contracting the single-letter row against the
  // signature reproduces the flow increment of phi^i, at the local-model
  // rate h^3 over shrinking steps
  PiecewiseLinearPath p;
  p.times = {0, 1};
  p.points = {{rat(0), rat(0)}, {rat(1, 2), rat(1, 4)}};
  RoughPath x = signature_lift(p, 2);
  SolverConfig cfg;
  cfg.substeps = 32;
  cfg.tolerance = 1e-10;
  auto mismatch = [&](const Rational& h) {
    FlowResult fr = sew(map, x, Rational(0), h, {0.2, -0.1}, cfg);
    DualElement sig = x.evaluate(Rational(0), h);
    double worst = 0;
    for (int i = 1; i <= 2; ++i) {
      double predicted = 0;
      for (const auto& [u, poly] : exp.coeffs.at(Word{i}))
        predicted += poly.eval<double>({0.2, -0.1}) * to_double(sig.value.coeff(Key(u)));
      double actual = fr.endpoint[i - 1] - (i == 1 ? 0.2 : -0.1);
      worst = std::max(worst, std::abs(actual - predicted));
    }
    return worst;
  };
  double coarse = mismatch(rat(1, 4));
  double fine = mismatch(rat(1, 8));
  CHECK(fine < 1e-2);
  CHECK(fine <= coarse / 3.0 + 1e-12);  // at least cubic decay would give 1/8
}

TEST_CASE("coarse grids are reported against a tolerance") {
  RationalSampler s(29);
  auto phi = random_map(s, 2, 2, 2);
  PiecewiseLinearPath p;
  p.times = {0, 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(-1, 2)}};
  RoughPath x = signature_lift(p, 2);
  std::vector<Rational> coarse{0, rat(1, 2), 1};
  CHECK_THROWS_AS(pushforward(x, phi, 2, coarse, 1e-12), GridTooCoarse);
  // identity map composes exactly, so any tolerance passes
  CHECK_NOTHROW(pushforward(x, identity_map(2), 2, coarse, 1e-12));
}

TEST_CASE("chain rule over words equals direct differentiation") {
  RationalSampler s(13);
  for (int trial = 0; trial < 3; ++trial) {
    auto phi = random_map(s, 2, 2, 2);   // R^2 -> R^2
    Polynomial psi = random_poly(s, 2, 2);
    Polynomial composite = psi.compose(phi);

    // the classical chain rule for one letter
    for (int i = 1; i <= 2; ++i)
      CHECK(chain_rule_words(psi, phi, Word{i}) == partial_word(composite, Word{i}));

    // all words up to length 3, including repeated letters
    for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, 3, 2)) {
      if (k.word().empty()) continue;
      CHECK(chain_rule_words(psi, phi, k.word()) == partial_word(composite, k.word()));
    }
  }

  // identity collapses to the plain derivative
  RationalSampler s2(17);
  Polynomial psi = random_poly(s2, 2, 3);
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, 2, 2)) {
    if (k.word().empty()) continue;
    CHECK(chain_rule_words(psi, identity_map(2), k.word()) == partial_word(psi, k.word()));
  }
}

TEST_CASE("factorization of the push-forward is exact") {
  RationalSampler s(19);
  // psi identity: trivially zero defect
  auto phi0 = random_map(s, 2, 2, 2);
  CHECK(factorization_defect(phi0, identity_map(2), 2) == 0);

  for (int trial = 0; trial < 2; ++trial) {
    auto phi = random_map(s, 2, 2, 2);
    auto psi = random_map(s, 2, 2, 2);
    CHECK(factorization_defect(phi, psi, 3) == 0);
  }
}

TEST_CASE("the splitting-triple bijection") {
  Word u{1, 2, 1};
  const int parts = 2, middle = 2;
  auto as = enumerate_triples_a(u, parts, middle);
  auto bs = enumerate_triples_b(u, parts, middle);
  CHECK(as.size() == bs.size());

  std::set<std::string> b_signatures;
  for (const auto& b : bs) b_signatures.insert(triple_signature(b));
  std::set<std::string> forward_signatures;
  for (const auto& a : as) {
    TripleB b = triple_forward(a, u);
    forward_signatures.insert(triple_signature(b));
    TripleA back = triple_backward(b, u);
    CHECK(triple_signature(back) == triple_signature(a));  // round trip
  }
  CHECK(forward_signatures == b_signatures);  // bijection onto B

  // a second word with more repetition
  Word u2{1, 1, 1};
  auto as2 = enumerate_triples_a(u2, 2, 2);
  auto bs2 = enumerate_triples_b(u2, 2, 2);
  CHECK(as2.size() == bs2.size());
  std::set<std::string> fwd2, all2;
  for (const auto& b : bs2) all2.insert(triple_signature(b));
  for (const auto& a : as2) {
    TripleB b = triple_forward(a, u2);
    fwd2.insert(triple_signature(b));
    CHECK(triple_signature(triple_backward(b, u2)) == triple_signature(a));
  }
  CHECK(fwd2 == all2);
}

TEST_CASE("chart consistency under push-forward") {
  RationalSampler s(23);
  // chart-2 data built as the push-forward of chart 1 under a linear map
  std::vector<Polynomial> lin(2, Polynomial(2));
  lin[0] = rat(2) * Polynomial::variable(2, 0) + rat(1, 3) * Polynomial::variable(2, 1);
  lin[1] = Polynomial::variable(2, 1) - Polynomial::variable(2, 0);

  PiecewiseLinearPath p;
  p.times = {0, rat(1, 2), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(1, 4)}, {rat(1, 2), rat(1)}};
  RoughPath x1 = signature_lift(p, 2);
  std::vector<Rational> grid{0, rat(1, 4), rat(1, 2), rat(3, 4), 1};
  RoughPath x2 = pushforward(x1, lin, 2, grid);

  CHECK(manifold_consistency_defect(x1, x2, lin, 2, grid) == 0);

  // corrupted chart-2 data is flagged
  RoughPath corrupted = x2;
  auto inner = x2.eval;
  corrupted.eval = [inner](const Rational& a, const Rational& b) {
    DualElement v = inner(a, b);
    FormalSum bumped = v.value;
    bumped.add_term(Key(Word{1, 2}), rat(1, 50));
    return DualElement(bumped, v.structure, v.level);
  };
  CHECK(manifold_consistency_defect(x1, corrupted, lin, 2, grid) >= rat(1, 50));
}
