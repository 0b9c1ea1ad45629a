#pragma once

#include "logode/forest_hopf.hpp"
#include "logode/formal_sum.hpp"
#include "logode/word_hopf.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logode {

/// The five graded Hopf algebras in play. The first of each pair is the
/// commutative side, the second its graded dual (where the group-like
/// machinery and the rough paths live).
enum class HopfStructure {
  shuffle_words,    // (T(V), shuffle, deconcatenation)
  tensor_words,     // (T(V), concatenation, deshuffle)
  connes_kreimer,   // (span UF, forest product, admissible cuts)
  grossman_larson,  // (span UF, grafting star, weighted deconcatenation)
  mkw_dual,         // (span OF, left-grafting star, forest deshuffle)
};

/// The dual structures a rough path can live in.
enum class Structure { tensor, gl, mkw };

inline HopfStructure dual_hopf(Structure s) {
  switch (s) {
    case Structure::tensor: return HopfStructure::tensor_words;
    case Structure::gl: return HopfStructure::grossman_larson;
    case Structure::mkw: return HopfStructure::mkw_dual;
  }
  throw std::logic_error("unreachable");
}

inline std::string structure_name(Structure s) {
  switch (s) {
    case Structure::tensor: return "tensor";
    case Structure::gl: return "gl";
    case Structure::mkw: return "mkw";
  }
  throw std::logic_error("unreachable");
}

inline Structure parse_structure(const std::string& s) {
  if (s == "tensor") return Structure::tensor;
  if (s == "gl") return Structure::gl;
  if (s == "mkw") return Structure::mkw;
  throw std::invalid_argument("unknown structure: " + s);
}

inline BasisFamily family_of(HopfStructure s) {
  switch (s) {
    case HopfStructure::shuffle_words:
    case HopfStructure::tensor_words: return BasisFamily::words;
    case HopfStructure::connes_kreimer:
    case HopfStructure::grossman_larson: return BasisFamily::unordered_forests;
    case HopfStructure::mkw_dual: return BasisFamily::ordered_forests;
  }
  throw std::logic_error("unreachable");
}

inline BasisFamily family_of(Structure s) { return family_of(dual_hopf(s)); }

inline PairingConvention pairing_of(HopfStructure s) {
  return s == HopfStructure::grossman_larson || s == HopfStructure::connes_kreimer
             ? PairingConvention::symmetry_weighted
             : PairingConvention::kronecker;
}

inline Key unit_key(HopfStructure s) {
  switch (family_of(s)) {
    case BasisFamily::words: return Key(Word{});
    case BasisFamily::ordered_forests: return Key(Forest({}, true));
    case BasisFamily::unordered_forests: return Key(Forest({}, false));
  }
  throw std::logic_error("unreachable");
}

inline FormalSum unit_sum(HopfStructure s, std::optional<int> level = std::nullopt) {
  return FormalSum::term(unit_key(s), 1, level);
}

/// Product of two basis keys.
inline FormalSum hopf_product(HopfStructure s, const Key& a, const Key& b) {
  switch (s) {
    case HopfStructure::shuffle_words: return shuffle(a.word(), b.word());
    case HopfStructure::tensor_words: return FormalSum::term(Key(concat(a.word(), b.word())));
    case HopfStructure::connes_kreimer: return forest_product(a.forest(), b.forest());
    case HopfStructure::grossman_larson: return star_forest(a.forest(), b.forest());
    case HopfStructure::mkw_dual: return star_forest(a.forest(), b.forest());
  }
  throw std::logic_error("unreachable");
}

/// Coproduct of a basis key, as a sum over tensor-pair keys.
inline FormalSum hopf_coproduct(HopfStructure s, const Key& k) {
  switch (s) {
    case HopfStructure::shuffle_words: return deconcat(k.word());
    case HopfStructure::tensor_words: return deshuffle(k.word());
    case HopfStructure::connes_kreimer: return ck_coproduct(k.forest());
    case HopfStructure::grossman_larson: return gl_dual_coproduct(k.forest());
    case HopfStructure::mkw_dual: return mkw_coproduct(k.forest());
  }
  throw std::logic_error("unreachable");
}

inline FormalSum hopf_product(HopfStructure s, const FormalSum& a, const FormalSum& b,
                              std::optional<int> level = std::nullopt) {
  return bilinear(a, b, level, [s](const Key& x, const Key& y) { return hopf_product(s, x, y); });
}

/// Coproduct extended linearly; pairs with total grade above `level` are cut.
inline FormalSum hopf_coproduct(HopfStructure s, const FormalSum& a,
                                std::optional<int> level = std::nullopt) {
  FormalSum out(level);
  for (const auto& [k, c] : a.terms()) {
    FormalSum piece = hopf_coproduct(s, k);
    for (const auto& [pk, pc] : piece.terms()) out.add_term(pk, pc * c);
  }
  return out;
}

/// epsilon: the coefficient of the unit key.
inline Rational counit(HopfStructure s, const FormalSum& a) { return a.coeff(unit_key(s)); }

/// Product on the tensor square: (a (x) b)(c (x) d) = ac (x) bd.
inline FormalSum hopf_square_product(HopfStructure s, const FormalSum& a, const FormalSum& b,
                                     std::optional<int> level = std::nullopt) {
  return bilinear(a, b, level, [s](const Key& x, const Key& y) {
    FormalSum l = hopf_product(s, *x.pair().left, *y.pair().left);
    FormalSum r = hopf_product(s, *x.pair().right, *y.pair().right);
    return tensor_product(l, r, std::nullopt);
  });
}

/// Antipode by the grade-inductive solution of m(S (x) Id)Delta = unit o eps.
/// Memoizes per structure; safe because keys are immutable values.
class Antipode {
 public:
  explicit Antipode(HopfStructure s) : structure_(s) {}

  FormalSum on_key(const Key& k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    FormalSum s;
    if (k.grade() == 0) {
      s = FormalSum::term(k, 1);
    } else {
      // S(x) = -x - sum S(x') x'' over the reduced coproduct
      s = FormalSum::term(k, -1);
      FormalSum cop = hopf_coproduct(structure_, k);
      for (const auto& [pk, pc] : cop.terms()) {
        const Key& left = *pk.pair().left;
        const Key& right = *pk.pair().right;
        if (left.grade() == 0 || right.grade() == 0) continue;
        FormalSum s_left = on_key(left);
        FormalSum piece = hopf_product(structure_, s_left, FormalSum::term(right));
        piece *= -pc;
        s += piece;
      }
    }
    cache_.emplace(k, s);
    return s;
  }

  FormalSum operator()(const FormalSum& a) {
    FormalSum out(a.level());
    for (const auto& [k, c] : a.terms()) {
      FormalSum piece = on_key(k);
      piece *= c;
      out += piece;
    }
    return out;
  }

 private:
  HopfStructure structure_;
  std::map<Key, FormalSum, KeyLess> cache_;
};

inline FormalSum antipode(HopfStructure s, const FormalSum& a) { return Antipode(s)(a); }

/// All basis keys of the given grade.
inline std::vector<Key> basis_keys(HopfStructure s, int grade, int alphabet) {
  std::vector<Key> out;
  switch (family_of(s)) {
    case BasisFamily::words: {
      std::vector<int> letters(grade, 1);
      if (grade == 0) {
        out.emplace_back(Word{});
        break;
      }
      for (;;) {
        out.emplace_back(Word(letters));
        int i = grade - 1;
        while (i >= 0 && letters[i] == alphabet) letters[i--] = 1;
        if (i < 0) break;
        ++letters[i];
      }
      break;
    }
    case BasisFamily::ordered_forests:
      for (auto& f : enumerate_forests(grade, alphabet, true)) out.emplace_back(std::move(f));
      break;
    case BasisFamily::unordered_forests:
      for (auto& f : enumerate_forests(grade, alphabet, false)) out.emplace_back(std::move(f));
      break;
  }
  return out;
}

inline std::vector<Key> basis_keys_up_to(HopfStructure s, int max_grade, int alphabet) {
  std::vector<Key> out;
  for (int g = 0; g <= max_grade; ++g)
    for (auto& k : basis_keys(s, g, alphabet)) out.push_back(std::move(k));
  return out;
}

}  // namespace logode
