#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "logode/formal_sum.hpp"
#include "logode/hopf.hpp"

#include <random>

using namespace logode;

namespace {
Key w(std::initializer_list<int> ls) { return Key(Word(ls)); }

FormalSum random_sum(std::mt19937_64& rng, int level, int alphabet) {
  FormalSum s(level);
  auto keys = basis_keys_up_to(HopfStructure::tensor_words, level, alphabet);
  for (const auto& k : keys) {
    if (rng() % 3 == 0) continue;
    long long num = static_cast<long long>(rng() % 11) - 5;
    long long den = 1 + static_cast<long long>(rng() % 7);
    s.add_term(k, Rational(num, den));
  }
  return s;
}
}  // namespace

TEST_CASE("additive identity and cancellation") {
  FormalSum x = FormalSum::term(w({1, 2}), rat(3));
  FormalSum zero;
  CHECK(x + zero == x);

  FormalSum two_w = FormalSum::term(w({1}), rat(2));
  FormalSum minus_two_w = FormalSum::term(w({1}), rat(-2));
  CHECK((two_w + minus_two_w).is_zero());
}

TEST_CASE("rational coefficient arithmetic") {
  FormalSum a = FormalSum::term(w({1}), rat(1, 2));
  FormalSum b = FormalSum::term(w({1}), rat(1, 3));
  CHECK((a + b).coeff(w({1})) == rat(5, 6));
}

TEST_CASE("no zero coefficients are ever stored") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    FormalSum s = random_sum(rng, 3, 2);
    FormalSum d = s - s;
    CHECK(d.is_zero());
    FormalSum doubled = s + s;
    for (const auto& [k, c] : doubled.terms()) CHECK(c != 0);
  }
}

TEST_CASE("truncate keeps grades <= n and is idempotent down a chain") {
  FormalSum x;
  x.add_term(w({}), 1);
  x.add_term(w({1}), 1);
  x.add_term(w({1, 2}), 1);
  FormalSum t1 = x.truncate(1);
  CHECK(t1.size() == 2);
  CHECK(t1.coeff(w({})) == 1);
  CHECK(t1.coeff(w({1})) == 1);
  CHECK(t1.coeff(w({1, 2})) == 0);
  CHECK(x.truncate(3).truncate(2) == x.truncate(2));
}

TEST_CASE("truncate to zero is the counit part") {
  FormalSum x;
  x.add_term(w({}), rat(5, 7));
  x.add_term(w({2, 1}), rat(3));
  FormalSum t = x.truncate(0);
  CHECK(t.size() == 1);
  CHECK(t.coeff(w({})) == rat(5, 7));
}

TEST_CASE("incompatible truncation levels are rejected") {
  FormalSum a = FormalSum::term(w({1}), 1, 2);
  FormalSum b = FormalSum::term(w({1}), 1, 3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("pairing: Kronecker and symmetry-weighted conventions") {
  // <w,w> = 1 for words
  FormalSum u = FormalSum::term(w({1, 2, 1}));
  CHECK(pairing(u, u, PairingConvention::kronecker) == 1);
  // orthogonality
  CHECK(pairing(u, FormalSum::term(w({2, 1})), PairingConvention::kronecker) == 0);

  // unordered forests carry the symmetry factor: it counts decorated
  // automorphisms, so a repeated-dot forest weighs 2 and a mixed one 1
  Forest dots11 = parse_forest("[1].[1]", false);
  Forest dots12 = parse_forest("[1].[2]", false);
  CHECK(pairing(FormalSum::term(Key(dots11)), FormalSum::term(Key(dots11)),
                PairingConvention::symmetry_weighted) == 2);
  CHECK(pairing(FormalSum::term(Key(dots12)), FormalSum::term(Key(dots12)),
                PairingConvention::symmetry_weighted) == 1);
}

TEST_CASE("pairing is bilinear") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    FormalSum x = random_sum(rng, 3, 2);
    FormalSum y = random_sum(rng, 3, 2);
    FormalSum z = random_sum(rng, 3, 2);
    Rational a(static_cast<long long>(rng() % 9) - 4, 1 + static_cast<long long>(rng() % 5));
    Rational b(static_cast<long long>(rng() % 9) - 4, 1 + static_cast<long long>(rng() % 5));
    Rational lhs = pairing(a * x + b * y, z, PairingConvention::kronecker);
    Rational rhs = a * pairing(x, z, PairingConvention::kronecker) +
                   b * pairing(y, z, PairingConvention::kronecker);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("grade_project") {
  FormalSum x;
  x.add_term(w({}), 1);
  x.add_term(w({1}), rat(2));
  x.add_term(w({2, 2}), rat(-1, 3));
  CHECK(x.grade_project(0) == FormalSum::term(w({}), 1));

  // partition of grades reassembles x
  FormalSum sum;
  for (int k = 0; k <= 2; ++k) sum += x.grade_project(k);
  CHECK(sum == x);
}

TEST_CASE("canonical text round-trips") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    FormalSum s = random_sum(rng, 3, 2);
    std::string text = to_string(s);
    FormalSum back = parse_formal_sum(text, BasisFamily::words);
    CHECK(back == s);
  }
  // forests too
  FormalSum f;
  f.add_term(Key(parse_forest("[1:[2],[3]]", false)), rat(-5, 6));
  f.add_term(Key(parse_forest("[1].[2]", false)), rat(7));
  CHECK(parse_formal_sum(to_string(f), BasisFamily::unordered_forests) == f);
}

TEST_CASE("term order in printed output is (grade, bytes)") {
  FormalSum s;
  s.add_term(w({2, 1}), 1);
  s.add_term(w({1}), 1);
  s.add_term(w({}), 1);
  CHECK(to_string(s) == "e + 1 + 21");
}
