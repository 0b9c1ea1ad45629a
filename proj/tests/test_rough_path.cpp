#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "logode/rough_path.hpp"
#include "logode/verify.hpp"
#include "logode/word_hopf.hpp"

using namespace logode;

namespace {

// Iterated-integral oracle for one linear segment x(r) = x0 + r*v on [0,T]:
// the word coefficient solves c_{wi}(t) = int_0^t c_w(r) v_i dr, giving
// c_w(T) = T^{|w|} prod v_{w_j} / |w|!.
Rational linear_segment_coeff(const std::vector<Rational>& v, const Word& w, const Rational& T) {
  Rational c = 1;
  Rational tk = 1;
  for (size_t j = 0; j < w.letters.size(); ++j) {
    c *= v[w.letters[j] - 1];
    tk *= T;
  }
  return c * tk / factorial(w.grade());
}

PiecewiseLinearPath linear_path(const std::vector<Rational>& v, Rational T = 1) {
  PiecewiseLinearPath p;
  p.times = {0, T};
  std::vector<Rational> zero(v.size(), Rational(0));
  std::vector<Rational> end(v.size());
  for (size_t i = 0; i < v.size(); ++i) end[i] = v[i] * T;
  p.points = {zero, end};
  return p;
}

FormalSum area_generator(int level) {
  FormalSum a(level);
  a.add_term(Key(Word{1, 2}), 1);
  a.add_term(Key(Word{2, 1}), -1);
  return a;
}

}  // namespace

TEST_CASE("signature lift of one linear segment") {
  std::vector<Rational> v{rat(3, 2), rat(-1, 3)};
  RoughPath x = signature_lift(linear_path(v), 3);
  DualElement full = x.evaluate(Rational(0), Rational(1));

  // matches exp of the letter combination
  FormalSum h(3);
  for (int i = 0; i < 2; ++i) h.add_term(Key(Word{i + 1}), v[i]);
  CHECK(full.value == exp_n(DualElement(h, Structure::tensor, 3)).value);

  // every coefficient up to grade 3 matches the iterated-integral oracle
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, 3, 2))
    CHECK(full.value.coeff(k) == linear_segment_coeff(v, k.word(), 1));

  // in particular <X,(i,j)> = v_i v_j / 2
  CHECK(full.value.coeff(Key(Word{1, 2})) == v[0] * v[1] / 2);
}

TEST_CASE("two-segment lift equals the BCH-combined exponential at level 2") {
  PiecewiseLinearPath p;
  p.times = {0, 1, 2};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(2)}, {rat(4), rat(3)}};
  RoughPath x = signature_lift(p, 2);

  // Chen composition is the construction
  CHECK(star(x.evaluate(Rational(0), Rational(1)), x.evaluate(Rational(1), Rational(2))).value ==
        x.evaluate(Rational(0), Rational(2)).value);

  // log(exp(a) exp(b)) = a + b + [a,b]/2 at level 2
  FormalSum a(2), b(2);
  a.add_term(Key(Word{1}), 1);
  a.add_term(Key(Word{2}), 2);
  b.add_term(Key(Word{1}), 3);
  b.add_term(Key(Word{2}), 1);
  DualElement ae(a, Structure::tensor, 2), be(b, Structure::tensor, 2);
  FormalSum bch = ae.value + be.value +
                  Rational(1, 2) * commutator(ae, be).value;
  CHECK(x.evaluate(Rational(0), Rational(2)).value ==
        exp_n(DualElement(bch, Structure::tensor, 2)).value);
}

TEST_CASE("signature satisfies the shuffle identity") {
  std::vector<Rational> v{rat(1, 2), rat(2)};
  PiecewiseLinearPath p;
  p.times = {0, rat(1, 3), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(-1)}, {rat(2), rat(1, 5)}};
  RoughPath x = signature_lift(p, 3);
  DualElement val = x.evaluate(Rational(0), Rational(1));
  for (const auto& uk : basis_keys_up_to(HopfStructure::tensor_words, 2, 2))
    for (const auto& wk : basis_keys_up_to(HopfStructure::tensor_words, 2, 2)) {
      if (uk.grade() + wk.grade() > 3) continue;
      Rational lhs = val.value.coeff(uk) * val.value.coeff(wk);
      Rational rhs = 0;
      FormalSum sh = shuffle(uk.word(), wk.word());
      for (const auto& [k, c] : sh.terms()) rhs += c * val.value.coeff(k);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("level/alpha coupling") {
  CHECK_NOTHROW(validate_level_alpha(2, 0.45, true));
  CHECK_THROWS_AS(validate_level_alpha(3, 0.45, true), std::invalid_argument);
  CHECK_THROWS_AS(validate_level_alpha(2, 1.0, true), std::invalid_argument);
  CHECK_NOTHROW(validate_level_alpha(5, 1.0, false));  // smooth exemption
}

TEST_CASE("from_group_path: constant path and pure area") {
  auto constant = [](const Rational&) { return unit_element(Structure::tensor, 2); };
  RoughPath triv = from_group_path(constant, Structure::tensor, 2, 2, 0.45, 0, 1);
  CHECK(triv.evaluate(Rational(1, 4), Rational(3, 4)).value == unit_sum(HopfStructure::tensor_words, 2));

  RoughPath area = from_primitive(area_generator(2), Structure::tensor, 2, 2, 0.45, 0, 1);
  DualElement v = area.evaluate(Rational(1, 8), Rational(5, 8));
  CHECK(v.value.coeff(Key(Word{1, 2})) == rat(1, 2));
  CHECK(v.value.coeff(Key(Word{2, 1})) == rat(-1, 2));
  CHECK(v.value.coeff(Key(Word{1})) == 0);
  CHECK(v.value.coeff(Key(Word{2})) == 0);

  // non-primitive generator is rejected
  CHECK_THROWS_AS(from_primitive(parse_formal_sum("12", BasisFamily::words, 2), Structure::tensor,
                                 2, 2, 0.45, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("group paths reject non-group-like values") {
  auto bad = [](const Rational& t) {
    FormalSum v(2);
    v.add_term(Key(Word{}), 1);
    v.add_term(Key(Word{1}), t);
    v.add_term(Key(Word{1, 2}), 7);  // no group-like element has this shape
    return DualElement(v, Structure::tensor, 2);
  };
  RoughPath x = from_group_path(bad, Structure::tensor, 2, 2, 0.45, 0, 1);
  CHECK_THROWS_AS(x.evaluate(Rational(0), Rational(1)), std::invalid_argument);
}

TEST_CASE("branched group path at level 2") {
  FormalSum p(2);
  p.add_term(Key(parse_forest("[1]", false)), 1);
  p.add_term(Key(parse_forest("[1:[1]]", false)), 1);
  RoughPath x = from_primitive(p, Structure::gl, 2, 1, 0.45, 0, 1);
  Rational u(3, 4);
  DualElement v = x.evaluate(Rational(0), u);
  CHECK(is_grouplike(v));
  CHECK(v.value.coeff(Key(parse_forest("[1]", false))) == u);
  CHECK(v.value.coeff(Key(parse_forest("[1:[1]]", false))) == u + u * u / 2);
  CHECK(v.value.coeff(Key(parse_forest("[1].[1]", false))) == u * u / 2);
  // not the lift of any smooth path: the ladder coefficient differs from
  // half the square of the trace increment
  CHECK(v.value.coeff(Key(parse_forest("[1:[1]]", false))) != u * u / 2);
}

TEST_CASE("chen_check is exactly zero for both constructors") {
  std::vector<Rational> grid{0, rat(1, 4), rat(1, 2), rat(7, 8), 1};
  PiecewiseLinearPath p;
  p.times = {0, rat(1, 2), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(1, 2)}, {rat(-1), rat(2)}};
  CHECK(chen_check(signature_lift(p, 3), grid) == 0);
  CHECK(chen_check(from_primitive(area_generator(2), Structure::tensor, 2, 2, 0.45, 0, 1), grid) ==
        0);
}

TEST_CASE("chen_check flags an injected corruption by its magnitude") {
  RoughPath base = from_primitive(area_generator(2), Structure::tensor, 2, 2, 0.45, 0, 1);
  Rational eps(1, 100);
  RoughPath corrupted = base;
  auto inner = base.eval;
  corrupted.eval = [inner, eps](const Rational& s, const Rational& t) {
    DualElement v = inner(s, t);
    if (s == 0 && t == 1) {
      FormalSum bumped = v.value;
      bumped.add_term(Key(Word{1, 1}), eps);
      return DualElement(bumped, v.structure, v.level);
    }
    return v;
  };
  std::vector<Rational> grid{0, rat(1, 2), 1};
  CHECK(chen_check(corrupted, grid) == eps);
}

TEST_CASE("holder_norm") {
  auto constant = [](const Rational&) { return unit_element(Structure::tensor, 2); };
  RoughPath triv = from_group_path(constant, Structure::tensor, 2, 2, 0.45, 0, 1);
  std::vector<Rational> grid{0, rat(1, 2), 1};
  CHECK(holder_norm(triv, 0.45, grid) == 0.0);

  std::vector<Rational> v{rat(1)};
  RoughPath lin = signature_lift(linear_path(v), 2);
  double est = holder_norm(lin, 1.0, grid);
  CHECK(est >= 1.0);  // |<X,(1)>| = |t-s| forces at least 1
  CHECK(std::isfinite(est));

  // refinement never decreases the estimate
  std::vector<Rational> fine{0, rat(1, 4), rat(1, 2), rat(3, 4), 1};
  CHECK(holder_norm(lin, 1.0, fine) >= est);

  CHECK_THROWS_AS(holder_norm(lin, 1.0, std::vector<Rational>{}), std::invalid_argument);
}

TEST_CASE("log-norm comparison") {
  auto constant = [](const Rational&) { return unit_element(Structure::tensor, 2); };
  RoughPath triv = from_group_path(constant, Structure::tensor, 2, 2, 0.45, 0, 1);
  std::vector<Rational> grid{0, rat(1, 4), rat(1, 2), 1};
  LogNormComparison c0 = log_norm_compare(triv, 0.45, grid);
  CHECK(c0.path_norm == 0.0);
  CHECK(c0.log_norm == 0.0);

  RoughPath area = from_primitive(area_generator(2), Structure::tensor, 2, 2, 0.45, 0, 1);
  LogNormComparison ca = log_norm_compare(area, 0.45, grid);
  CHECK(ca.path_norm > 0);
  CHECK(ca.log_norm > 0);
  CHECK(std::isfinite(ca.ratio));
  CHECK(ca.ratio > 0);

  // empirical two-sided bound over random primitive generators at level 2
  RationalSampler sampler(2024);
  double lo = 1e300, hi = 0;
  for (int trial = 0; trial < 10; ++trial) {
    FormalSum p(2);
    for (const auto& k : basis_keys(HopfStructure::tensor_words, 1, 2))
      p.add_term(k, sampler.small());
    p.add_term(Key(Word{1, 2}), sampler.small());
    p.add_term(Key(Word{2, 1}), -p.coeff(Key(Word{1, 2})));
    if (p.is_zero()) continue;
    RoughPath x = from_primitive(p, Structure::tensor, 2, 2, 0.45, 0, 1);
    LogNormComparison c = log_norm_compare(x, 0.45, grid);
    if (c.path_norm == 0) continue;
    lo = std::min(lo, c.ratio);
    hi = std::max(hi, c.ratio);
  }
  CHECK(lo > 0);
  CHECK(std::isfinite(hi));
}

TEST_CASE("reversal: X * X^{-1} = 1") {
  PiecewiseLinearPath p;
  p.times = {0, rat(1, 2), 1};
  p.points = {{rat(0), rat(0)}, {rat(1), rat(1)}, {rat(1, 2), rat(-1)}};
  RoughPath x = signature_lift(p, 3);
  DualElement v = x.evaluate(Rational(0), Rational(1));
  CHECK(star(v, inverse(v)).value == unit_sum(HopfStructure::tensor_words, 3));
}
