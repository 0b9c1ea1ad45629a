#pragma once

#include "logode/rational.hpp"
#include "logode/trees.hpp"
#include "logode/words.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace logode {

/// Basis key of a graded algebra: a word, a decorated forest (ordered or
/// unordered-canonical), or a tensor pair of keys.
struct Key;
using KeyPtr = std::shared_ptr<const Key>;

struct TensorPair {
  KeyPtr left, right;
};

struct Key {
  std::variant<Word, Forest, TensorPair> value;

  Key() : value(Word{}) {}
  Key(Word w) : value(std::move(w)) {}
  Key(Forest f) : value(std::move(f)) {}
  Key(TensorPair p) : value(std::move(p)) {}

  bool is_word() const { return std::holds_alternative<Word>(value); }
  bool is_forest() const { return std::holds_alternative<Forest>(value); }
  bool is_pair() const { return std::holds_alternative<TensorPair>(value); }

  const Word& word() const { return std::get<Word>(value); }
  const Forest& forest() const { return std::get<Forest>(value); }
  const TensorPair& pair() const { return std::get<TensorPair>(value); }

  int grade() const {
    if (is_word()) return word().grade();
    if (is_forest()) return forest().grade();
    return pair().left->grade() + pair().right->grade();
  }

  std::string encode() const {
    if (is_word()) return "w:" + word_to_string(word());
    if (is_forest()) return (forest().ordered ? "o:" : "u:") + forest_encode(forest());
    return "(" + pair().left->encode() + ")(x)(" + pair().right->encode() + ")";
  }
};

inline Key tensor_key(Key a, Key b) {
  return Key(TensorPair{std::make_shared<const Key>(std::move(a)),
                        std::make_shared<const Key>(std::move(b))});
}

/// Total order: grade first, then canonical encoding bytes. This fixes the
/// printed term order of every FormalSum.
struct KeyLess {
  bool operator()(const Key& a, const Key& b) const {
    int ga = a.grade(), gb = b.grade();
    if (ga != gb) return ga < gb;
    return a.encode() < b.encode();
  }
};

inline bool operator==(const Key& a, const Key& b) {
  return a.grade() == b.grade() && a.encode() == b.encode();
}

/// Finite linear combination of basis keys with exact coefficients and an
/// optional truncation level. Zero coefficients are never stored; all keys
/// respect the truncation level when one is set.
class FormalSum {
 public:
  using TermMap = std::map<Key, Rational, KeyLess>;

  FormalSum() = default;
  explicit FormalSum(std::optional<int> level) : level_(level) {
    if (level_ && *level_ < 0) throw std::invalid_argument("negative truncation level");
  }

  static FormalSum term(Key k, Rational c = 1, std::optional<int> level = std::nullopt) {
    FormalSum s(level);
    s.add_term(std::move(k), std::move(c));
    return s;
  }

  const TermMap& terms() const { return terms_; }
  std::optional<int> level() const { return level_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  Rational coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// In-place accumulate; drops the term if it cancels or exceeds the level.
  void add_term(Key k, Rational c) {
    if (c == 0) return;
    if (level_ && k.grade() > *level_) return;
    auto [it, inserted] = terms_.try_emplace(std::move(k), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  FormalSum& operator+=(const FormalSum& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  FormalSum& operator-=(const FormalSum& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  FormalSum& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }

  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  friend FormalSum operator*(FormalSum a, const Rational& c) { return a *= c; }
  friend FormalSum operator*(const Rational& c, FormalSum a) { return a *= c; }
  friend FormalSum operator-(FormalSum a) { return a *= Rational(-1); }

  friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms_ == b.terms_; }

  /// Keeps grades <= n and pins the level to n.
  FormalSum truncate(int n) const {
    if (n < 0) throw std::invalid_argument("negative truncation level");
    FormalSum out(n);
    for (const auto& [k, c] : terms_) out.add_term(k, c);
    return out;
  }

  /// Keeps exactly the grade-k terms; level is preserved.
  FormalSum grade_project(int k) const {
    if (k < 0) throw std::invalid_argument("negative grade");
    FormalSum out(level_);
    for (const auto& [key, c] : terms_)
      if (key.grade() == k) out.add_term(key, c);
    return out;
  }

  int max_grade() const {
    int g = 0;
    for (const auto& [k, c] : terms_) g = std::max(g, k.grade());
    return g;
  }

  /// Largest coefficient magnitude, as a double (for tolerance checks).
  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(to_double(c)));
    return m;
  }

 private:
  void check_compatible(const FormalSum& o) {
    if (level_ && o.level_ && *level_ != *o.level_)
      throw std::invalid_argument("incompatible truncation levels");
    if (!level_ && o.level_) level_ = o.level_;
  }

  TermMap terms_;
  std::optional<int> level_;
};

/// Bilinear map over term pairs.
template <typename F>
FormalSum bilinear(const FormalSum& a, const FormalSum& b, std::optional<int> level, F&& on_pair) {
  FormalSum out(level);
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      if (level && ka.grade() + kb.grade() > *level) continue;
      FormalSum piece = on_pair(ka, kb);
      piece *= ca * cb;
      out += piece;
    }
  return out;
}

/// Linear map over terms.
template <typename F>
FormalSum linear(const FormalSum& a, std::optional<int> level, F&& on_key) {
  FormalSum out(level);
  for (const auto& [k, c] : a.terms()) {
    FormalSum piece = on_key(k);
    piece *= c;
    out += piece;
  }
  return out;
}

enum class PairingConvention {
  kronecker,          // <f,g> = delta_{f,g}   (words, ordered forests)
  symmetry_weighted,  // <f,g> = sg(f) delta_{f,g}   (unordered forests)
};

inline Rational key_pairing_weight(const Key& k, PairingConvention conv) {
  if (conv == PairingConvention::kronecker) return 1;
  if (k.is_forest()) return symmetry_factor(k.forest());
  if (k.is_pair())
    return key_pairing_weight(*k.pair().left, conv) * key_pairing_weight(*k.pair().right, conv);
  return 1;
}

/// Dual action <x, y>; bilinear, diagonal in the basis with the convention's
/// weight on each key.
inline Rational pairing(const FormalSum& x, const FormalSum& y, PairingConvention conv) {
  Rational acc = 0;
  const bool x_smaller = x.size() <= y.size();
  const FormalSum& small = x_smaller ? x : y;
  const FormalSum& big = x_smaller ? y : x;
  for (const auto& [k, c] : small.terms()) {
    Rational other = big.coeff(k);
    if (other != 0) acc += c * other * key_pairing_weight(k, conv);
  }
  return acc;
}

inline FormalSum tensor_product(const FormalSum& a, const FormalSum& b, std::optional<int> level) {
  return bilinear(a, b, level,
                  [](const Key& x, const Key& y) { return FormalSum::term(tensor_key(x, y)); });
}

inline std::string key_to_display(const Key& k) {
  if (k.is_word()) return word_to_string(k.word());
  if (k.is_forest()) return forest_encode(k.forest());
  return "(" + key_to_display(*k.pair().left) + ")(x)(" + key_to_display(*k.pair().right) + ")";
}

/// Canonical text form: `coeff*key` terms joined by ` + `, keys in (grade,
/// bytes) order. Round-trips through parse_formal_sum.
inline std::string to_string(const FormalSum& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    if (c == 1)
      out += key_to_display(k);
    else
      out += to_string(c) + "*" + key_to_display(k);
  }
  return out;
}

enum class BasisFamily { words, ordered_forests, unordered_forests };

namespace detail {
inline Key parse_key(const std::string& tok, BasisFamily family) {
  auto tensor_pos = tok.find(")(x)(");
  if (tok.size() >= 2 && tok.front() == '(' && tensor_pos != std::string::npos) {
    // split "(a)(x)(b)" at the top parenthesis level
    int depth = 0;
    for (size_t i = 0; i + 4 < tok.size(); ++i) {
      if (tok[i] == '(') ++depth;
      if (tok[i] == ')') --depth;
      if (depth == 0 && tok.compare(i, 5, ")(x)(") == 0) {
        std::string a = tok.substr(1, i - 1);
        std::string b = tok.substr(i + 5, tok.size() - i - 6);
        return tensor_key(parse_key(a, family), parse_key(b, family));
      }
    }
  }
  switch (family) {
    case BasisFamily::words:
      return Key(parse_word(tok));
    case BasisFamily::ordered_forests:
      return Key(parse_forest(tok, true));
    case BasisFamily::unordered_forests:
      return Key(parse_forest(tok, false));
  }
  throw std::logic_error("unreachable");
}
}  // namespace detail

/// Inverse of to_string for a given basis family.
inline FormalSum parse_formal_sum(const std::string& text, BasisFamily family,
                                  std::optional<int> level = std::nullopt) {
  FormalSum out(level);
  if (text == "0") return out;
  size_t pos = 0;
  bool negate = false;
  if (!text.empty() && text[0] == '-') {
    negate = true;
    pos = 1;
  }
  while (pos < text.size()) {
    size_t next_plus = text.find(" + ", pos);
    size_t next_minus = text.find(" - ", pos);
    size_t end = std::min(next_plus, next_minus);
    std::string term = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    Rational c = 1;
    std::string key_text = term;
    // keys never contain '*', so the first one separates the coefficient
    auto star = term.find('*');
    if (star != std::string::npos) {
      c = parse_rational(term.substr(0, star));
      key_text = term.substr(star + 1);
    }
    if (negate) c = -c;
    out.add_term(detail::parse_key(key_text, family), c);
    if (end == std::string::npos) break;
    negate = (end == next_minus);
    pos = end + 3;
  }
  return out;
}

}  // namespace logode
