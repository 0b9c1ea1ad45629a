#pragma once

#include "logode/formal_sum.hpp"
#include "logode/words.hpp"

#include <optional>

namespace logode {

/// Shuffle product: sum over all interleavings of u and v preserving the
/// internal order of each, with multiplicities.
inline FormalSum shuffle(const Word& u, const Word& v,
                         std::optional<int> level = std::nullopt) {
  if (u.empty()) return FormalSum::term(Key(v), 1, level);
  if (v.empty()) return FormalSum::term(Key(u), 1, level);
  FormalSum out(level);
  Word u_head = word_slice(u, 0, u.grade() - 1);
  Word v_head = word_slice(v, 0, v.grade() - 1);
  FormalSum left = shuffle(u, v_head);
  for (const auto& [k, c] : left.terms()) {
    Word w = k.word();
    w.letters.push_back(v.letters.back());
    out.add_term(Key(std::move(w)), c);
  }
  FormalSum right = shuffle(u_head, v);
  for (const auto& [k, c] : right.terms()) {
    Word w = k.word();
    w.letters.push_back(u.letters.back());
    out.add_term(Key(std::move(w)), c);
  }
  return out;
}

/// Deconcatenation coproduct: all prefix/suffix splittings including the
/// trivial ones.
inline FormalSum deconcat(const Word& w, std::optional<int> level = std::nullopt) {
  FormalSum out(level);
  for (int cut = 0; cut <= w.grade(); ++cut)
    out.add_term(tensor_key(Key(word_slice(w, 0, cut)), Key(word_slice(w, cut, w.grade()))), 1);
  return out;
}

/// Deshuffle coproduct: sum over position subsets S of w|_S (x) w|_{S^c}.
inline FormalSum deshuffle(const Word& w, std::optional<int> level = std::nullopt) {
  FormalSum out(level);
  const int n = w.grade();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> in, rest;
    for (int p = 0; p < n; ++p)
      (mask >> p & 1u ? in : rest).push_back(p);
    out.add_term(tensor_key(Key(word_restrict(w, in)), Key(word_restrict(w, rest))), 1);
  }
  return out;
}

/// Ordered (half) shuffle: shuffle u with w minus its last letter, then
/// append that last letter. Requires w nonempty.
inline FormalSum ordered_shuffle(const Word& u, const Word& w,
                                 std::optional<int> level = std::nullopt) {
  if (w.empty()) throw std::invalid_argument("ordered_shuffle: right word must be nonempty");
  FormalSum out(level);
  Word w_head = word_slice(w, 0, w.grade() - 1);
  FormalSum base = shuffle(u, w_head);
  for (const auto& [k, c] : base.terms()) {
    Word r = k.word();
    r.letters.push_back(w.letters.back());
    out.add_term(Key(std::move(r)), c);
  }
  return out;
}

/// Antipode of both word Hopf algebras: (-1)^{|w|} times the reversed word.
inline FormalSum antipode_word(const Word& w, std::optional<int> level = std::nullopt) {
  Rational sign = (w.grade() % 2 == 0) ? 1 : -1;
  return FormalSum::term(Key(reverse(w)), sign, level);
}

}  // namespace logode
