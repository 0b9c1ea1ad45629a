#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "logode/hopf.hpp"
#include "logode/word_hopf.hpp"

#include <set>

using namespace logode;

namespace {

// Brute-force shuffle oracle: enumerate all ways to choose the positions of u
// inside a word of length |u|+|v|.
FormalSum shuffle_oracle(const Word& u, const Word& v) {
  FormalSum out;
  int n = u.grade(), m = v.grade();
  std::vector<int> mask(n + m, 0);
  std::fill(mask.begin(), mask.begin() + n, 1);
  std::sort(mask.begin(), mask.end());
  do {
    Word w;
    int iu = 0, iv = 0;
    for (int p = 0; p < n + m; ++p)
      w.letters.push_back(mask[p] ? u.letters[iu++] : v.letters[iv++]);
    out.add_term(Key(std::move(w)), 1);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<Word> all_words(int max_len, int alphabet) {
  std::vector<Word> out;
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, max_len, alphabet))
    out.push_back(k.word());
  return out;
}

}  // namespace

TEST_CASE("concat basics") {
  CHECK(concat(Word{}, Word{1, 2}) == Word{1, 2});
  CHECK(concat(Word{1, 2}, Word{3}) == Word{1, 2, 3});
  for (const auto& u : all_words(3, 2))
    for (const auto& v : all_words(2, 2))
      CHECK(concat(u, v).grade() == u.grade() + v.grade());
}

TEST_CASE("shuffle: unit, small cases, and the oracle") {
  Word w{1, 2};
  CHECK(shuffle(Word{}, w) == FormalSum::term(Key(w)));

  FormalSum s12 = shuffle(Word{1}, Word{2});
  CHECK(s12.coeff(Key(Word{1, 2})) == 1);
  CHECK(s12.coeff(Key(Word{2, 1})) == 1);
  CHECK(s12.size() == 2);

  CHECK(shuffle(Word{1}, Word{1}) == FormalSum::term(Key(Word{1, 1}), 2));

  for (const auto& u : all_words(3, 2))
    for (const auto& v : all_words(3, 2))
      CHECK(shuffle(u, v) == shuffle_oracle(u, v));
}

TEST_CASE("shuffle is commutative and associative (words up to length 4 total)") {
  auto words = all_words(2, 2);
  for (const auto& u : words)
    for (const auto& v : words) {
      CHECK(shuffle(u, v) == shuffle(v, u));
      for (const auto& t : words) {
        if (u.grade() + v.grade() + t.grade() > 4) continue;
        FormalSum left = linear(shuffle(u, v), std::nullopt, [&](const Key& k) {
          return shuffle(k.word(), t);
        });
        FormalSum right = linear(shuffle(v, t), std::nullopt, [&](const Key& k) {
          return shuffle(u, k.word());
        });
        CHECK(left == right);
      }
    }
}

TEST_CASE("deconcat splittings") {
  FormalSum d = deconcat(Word{});
  CHECK(d == FormalSum::term(tensor_key(Key(Word{}), Key(Word{}))));

  FormalSum d1 = deconcat(Word{1});
  CHECK(d1.coeff(tensor_key(Key(Word{}), Key(Word{1}))) == 1);
  CHECK(d1.coeff(tensor_key(Key(Word{1}), Key(Word{}))) == 1);
  CHECK(d1.size() == 2);

  FormalSum d12 = deconcat(Word{1, 2});
  CHECK(d12.size() == 3);
  CHECK(d12.coeff(tensor_key(Key(Word{1}), Key(Word{2}))) == 1);
}

TEST_CASE("counit law for deconcat") {
  for (const auto& word : all_words(5, 2)) {
    FormalSum d = deconcat(word);
    FormalSum collapsed;
    for (const auto& [k, c] : d.terms())
      if (k.pair().left->grade() == 0) collapsed.add_term(*k.pair().right, c);
    CHECK(collapsed == FormalSum::term(Key(word)));
  }
}

TEST_CASE("deshuffle small cases and duality with shuffle") {
  FormalSum d1 = deshuffle(Word{1});
  CHECK(d1.coeff(tensor_key(Key(Word{}), Key(Word{1}))) == 1);
  CHECK(d1.coeff(tensor_key(Key(Word{1}), Key(Word{}))) == 1);

  FormalSum d12 = deshuffle(Word{1, 2});
  CHECK(d12.coeff(tensor_key(Key(Word{1}), Key(Word{2}))) == 1);
  CHECK(d12.coeff(tensor_key(Key(Word{2}), Key(Word{1}))) == 1);
  CHECK(d12.size() == 4);

  // <deshuffle(w), u (x) v> = <w, u shuffle v> for all words, |w| <= 4
  auto words = all_words(2, 2);
  for (const auto& w : all_words(4, 2)) {
    FormalSum dw = deshuffle(w);
    for (const auto& u : words)
      for (const auto& v : words) {
        Rational lhs = dw.coeff(tensor_key(Key(u), Key(v)));
        Rational rhs = shuffle(u, v).coeff(Key(w));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("bialgebra compatibility: deshuffle of concat is the pair product") {
  auto words = all_words(3, 2);
  for (const auto& u : words)
    for (const auto& v : words) {
      FormalSum lhs = deshuffle(concat(u, v));
      FormalSum rhs = hopf_square_product(HopfStructure::tensor_words, deshuffle(u), deshuffle(v));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("ordered shuffle") {
  CHECK(ordered_shuffle(Word{}, Word{2}) == FormalSum::term(Key(Word{2})));
  CHECK(ordered_shuffle(Word{1}, Word{2}) == FormalSum::term(Key(Word{1, 2})));

  FormalSum s = ordered_shuffle(Word{1}, Word{2, 3});
  CHECK(s.coeff(Key(Word{1, 2, 3})) == 1);
  CHECK(s.coeff(Key(Word{2, 1, 3})) == 1);
  CHECK(s.size() == 2);

  CHECK_THROWS_AS(ordered_shuffle(Word{1}, Word{}), std::invalid_argument);

  // for distinct letters the two half shuffles decompose the shuffle
  Word u{1, 2}, v{3};
  CHECK(shuffle(u, v) == ordered_shuffle(u, v) + ordered_shuffle(v, u));
  Word a{1}, b{2, 3};
  CHECK(shuffle(a, b) == ordered_shuffle(a, b) + ordered_shuffle(b, a));
}

TEST_CASE("ordered deshuffles") {
  auto splits = ordered_deshuffles(Word{1, 2, 3}, 2);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& s : splits)
    got.insert({word_to_string(s.parts[0]), word_to_string(s.parts[1])});
  std::set<std::pair<std::string, std::string>> want{{"1", "23"}, {"2", "13"}, {"12", "3"}};
  CHECK(got == want);

  // n = |w| forces the splitting into letters in order
  auto forced = ordered_deshuffles(Word{2, 1, 2}, 3);
  REQUIRE(forced.size() == 1);
  CHECK(forced[0].parts[0] == Word{2});
  CHECK(forced[0].parts[1] == Word{1});
  CHECK(forced[0].parts[2] == Word{2});

  auto whole = ordered_deshuffles(Word{1, 2}, 1);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].parts[0] == Word{1, 2});

  CHECK_THROWS_AS(ordered_deshuffles(Word{1}, 2), std::invalid_argument);
}

TEST_CASE("every ordered deshuffle reassembles to its parent by a shuffle") {
  for (const auto& w : all_words(4, 2)) {
    if (w.empty()) continue;
    for (int n = 1; n <= w.grade(); ++n) {
      for (const auto& s : ordered_deshuffles(w, n)) {
        // w must appear in the iterated shuffle of the parts
        FormalSum sh = FormalSum::term(Key(s.parts[0]));
        for (size_t i = 1; i < s.parts.size(); ++i)
          sh = linear(sh, std::nullopt,
                      [&](const Key& k) { return shuffle(k.word(), s.parts[i]); });
        CHECK(sh.coeff(Key(w)) >= 1);
      }
    }
  }
}

TEST_CASE("antipode of words: closed form matches the defining identity") {
  CHECK(antipode_word(Word{}) == FormalSum::term(Key(Word{})));
  CHECK(antipode_word(Word{1}) == FormalSum::term(Key(Word{1}), -1));

  // m(S (x) Id) deconcat(w) = 0 for |w| >= 1, in the shuffle algebra
  for (const auto& w : all_words(4, 2)) {
    if (w.empty()) continue;
    FormalSum acc;
    FormalSum dec = deconcat(w);
    for (const auto& [k, c] : dec.terms()) {
      FormalSum s_left = antipode_word(k.pair().left->word());
      FormalSum piece = bilinear(s_left, FormalSum::term(*k.pair().right), std::nullopt,
                                 [](const Key& a, const Key& b) { return shuffle(a.word(), b.word()); });
      acc += c * piece;
    }
    CHECK(acc.is_zero());
  }

  // and the grade-recursion antipode agrees with the closed form
  for (const auto& w : all_words(4, 2)) {
    CHECK(antipode(HopfStructure::shuffle_words, FormalSum::term(Key(w))) == antipode_word(w));
    CHECK(antipode(HopfStructure::tensor_words, FormalSum::term(Key(w))) == antipode_word(w));
  }
}
