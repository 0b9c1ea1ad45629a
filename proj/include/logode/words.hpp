#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace logode {

/// A word over the alphabet {1,..,n}. The empty word is the unit.
/// Grade is the length (homogeneous grading).
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}
  Word(std::initializer_list<int> ls) : letters(ls) {}

  int grade() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }

  friend bool operator==(const Word& a, const Word& b) = default;
  friend auto operator<=>(const Word& a, const Word& b) = default;
};

inline Word concat(const Word& u, const Word& v) {
  Word w = u;
  w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
  return w;
}

inline Word word_slice(const Word& w, int from, int to) {
  return Word(std::vector<int>(w.letters.begin() + from, w.letters.begin() + to));
}

inline Word reverse(const Word& w) {
  Word r = w;
  std::ranges::reverse(r.letters);
  return r;
}

/// Restriction of w to a sorted position subset.
inline Word word_restrict(const Word& w, const std::vector<int>& positions) {
  Word r;
  r.letters.reserve(positions.size());
  for (int p : positions) r.letters.push_back(w.letters[p]);
  return r;
}

/// One part list of an ordered deshuffle: nonempty subwords of a parent word,
/// each carrying the positions it came from. Letter order inside each part
/// follows the parent; the parts' last positions are increasing.
struct OrderedSplitting {
  std::vector<std::vector<int>> position_blocks;  // positions into the parent word
  std::vector<Word> parts;
};

/// All splittings of w into n nonempty parts whose last letters appear in
/// w-order. Positions are kept, so repeated letters stay distinguishable and
/// the result carries the multiplicity the expansion formulas need.
inline std::vector<OrderedSplitting> ordered_deshuffles(const Word& w, int n) {
  const int len = w.grade();
  if (n < 1 || n > len) throw std::invalid_argument("ordered_deshuffles: part count out of range");
  std::vector<OrderedSplitting> out;
  // Assign each position to a block; block index sequence must be surjective
  // onto {0..n-1} and the blocks' maxima must be increasing. The maxima
  // condition is equivalent to: the last position of block i is the last
  // occurrence of i in the assignment, and those last occurrences are ordered,
  // i.e. after position p, every block with index > assignment[p] still gets
  // another position. Enumerate assignments recursively with that check.
  std::vector<int> assign(len, -1);
  auto emit = [&] {
    OrderedSplitting s;
    s.position_blocks.assign(n, {});
    for (int p = 0; p < len; ++p) s.position_blocks[assign[p]].push_back(p);
    for (auto& blk : s.position_blocks) s.parts.push_back(word_restrict(w, blk));
    out.push_back(std::move(s));
  };
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == len) {
      // check maxima ordered: last occurrence of block i < last occurrence of i+1
      std::vector<int> last(n, -1);
      for (int p = 0; p < len; ++p) last[assign[p]] = p;
      for (int b = 0; b < n; ++b)
        if (last[b] == -1) return;
      for (int b = 0; b + 1 < n; ++b)
        if (last[b] > last[b + 1]) return;
      emit();
      return;
    }
    for (int b = 0; b < n; ++b) {
      assign[pos] = b;
      self(self, pos + 1);
    }
    assign[pos] = -1;
  };
  rec(rec, 0);
  return out;
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  bool small = std::ranges::all_of(w.letters, [](int l) { return l >= 1 && l <= 9; });
  std::string s;
  for (int l : w.letters) {
    if (small)
      s += static_cast<char>('0' + l);
    else
      s += "[" + std::to_string(l) + "]";
  }
  return s;
}

/// Parses digit strings ("12") or bracketed letters ("[1][2]"); "e" is the unit.
inline Word parse_word(const std::string& s) {
  if (s == "e") return Word{};
  Word w;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '[') {
      auto close = s.find(']', i);
      if (close == std::string::npos) throw std::invalid_argument("unterminated letter bracket: " + s);
      w.letters.push_back(std::stoi(s.substr(i + 1, close - i - 1)));
      i = close + 1;
    } else if (s[i] >= '1' && s[i] <= '9') {
      w.letters.push_back(s[i] - '0');
      ++i;
    } else {
      throw std::invalid_argument("bad word literal: " + s);
    }
  }
  return w;
}

}  // namespace logode
