#pragma once

#include "logode/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace logode {

/// Decorated rooted tree. Child order is significant in ordered mode and
/// normalized away by canonicalize() in unordered mode.
struct Tree {
  int decoration = 1;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(int dec, std::vector<Tree> ch = {}) : decoration(dec), children(std::move(ch)) {}

  int grade() const {
    int g = 1;
    for (const auto& c : children) g += c.grade();
    return g;
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.decoration == b.decoration && a.children == b.children;
  }
};

/// Encoding used for map keys, equality and the total order on trees.
/// Tree: "[" dec (":" child ("," child)*)? "]".
inline std::string tree_encode(const Tree& t) {
  std::string s = "[" + std::to_string(t.decoration);
  if (!t.children.empty()) {
    s += ":";
    for (size_t i = 0; i < t.children.size(); ++i) {
      if (i) s += ",";
      s += tree_encode(t.children[i]);
    }
  }
  return s + "]";
}

/// Total order on trees: by grade first, then encoding bytes.
inline bool tree_less(const Tree& a, const Tree& b) {
  int ga = a.grade(), gb = b.grade();
  if (ga != gb) return ga < gb;
  return tree_encode(a) < tree_encode(b);
}

inline Tree tree_canonicalize(Tree t) {
  for (auto& c : t.children) c = tree_canonicalize(std::move(c));
  std::sort(t.children.begin(), t.children.end(), tree_less);
  return t;
}

struct Forest {
  std::vector<Tree> trees;
  bool ordered = false;

  Forest() = default;
  Forest(std::vector<Tree> ts, bool ord) : trees(std::move(ts)), ordered(ord) {}

  int grade() const {
    int g = 0;
    for (const auto& t : trees) g += t.grade();
    return g;
  }
  bool empty() const { return trees.empty(); }

  friend bool operator==(const Forest& a, const Forest& b) {
    return a.ordered == b.ordered && a.trees == b.trees;
  }
};

/// Sorts children and tree lists by the total order; idempotent. Two
/// unordered forests are equal iff their canonical forms are identical.
inline Forest canonicalize(Forest f) {
  if (f.ordered) return f;
  for (auto& t : f.trees) t = tree_canonicalize(std::move(t));
  std::sort(f.trees.begin(), f.trees.end(), tree_less);
  return f;
}

inline std::string forest_encode(const Forest& f) {
  if (f.trees.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < f.trees.size(); ++i) {
    if (i) s += ".";
    s += tree_encode(f.trees[i]);
  }
  return s;
}

/// Adds a root decorated `a` under the forest's trees.
inline Tree b_plus(const Forest& f, int a) { return Tree(a, f.trees); }

/// Removes the root, returning its children as a forest.
inline Forest b_minus(const Tree& t, bool ordered) { return Forest(t.children, ordered); }

inline Forest single_tree_forest(Tree t, bool ordered) {
  Forest f(std::vector<Tree>{std::move(t)}, ordered);
  return ordered ? f : canonicalize(std::move(f));
}

/// Symmetry factor: sg(e)=1, sg([f]_a)=sg(f), and for a forest the product
/// over distinct trees tau^m of m! * sg(tau)^m. Counts decorated-forest
/// automorphisms, which is the weight making the grafting product dual to the
/// admissible-cut coproduct.
inline Rational symmetry_factor(const Forest& f_in) {
  Forest f = f_in.ordered ? f_in : canonicalize(f_in);
  std::map<std::string, std::pair<int, const Tree*>> groups;
  for (const auto& t : f.trees) {
    auto& g = groups[tree_encode(t)];
    ++g.first;
    g.second = &t;
  }
  Rational sg = 1;
  for (auto& [enc, g] : groups) {
    sg *= factorial(g.first);
    Rational child = symmetry_factor(Forest(g.second->children, f.ordered));
    for (int i = 0; i < g.first; ++i) sg *= child;
  }
  return sg;
}

namespace detail {
inline Tree parse_tree_impl(const std::string& s, size_t& i);

inline std::vector<Tree> parse_children(const std::string& s, size_t& i) {
  std::vector<Tree> ch;
  ch.push_back(parse_tree_impl(s, i));
  while (i < s.size() && s[i] == ',') {
    ++i;
    ch.push_back(parse_tree_impl(s, i));
  }
  return ch;
}

inline Tree parse_tree_impl(const std::string& s, size_t& i) {
  if (i >= s.size() || s[i] != '[') throw std::invalid_argument("expected '[' in forest literal: " + s);
  ++i;
  size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (start == i) throw std::invalid_argument("expected decoration in forest literal: " + s);
  Tree t(std::stoi(s.substr(start, i - start)));
  if (i < s.size() && s[i] == ':') {
    ++i;
    t.children = parse_children(s, i);
  }
  if (i >= s.size() || s[i] != ']') throw std::invalid_argument("expected ']' in forest literal: " + s);
  ++i;
  return t;
}
}  // namespace detail

/// Forest literal: `[i:child,child]` nesting, `.` between forest factors,
/// e.g. `[1:[2],[3]]` for the cherry and `[1].[2]` for the two-dot forest.
/// `e` is the empty forest.
inline Forest parse_forest(const std::string& s, bool ordered) {
  if (s == "e") return Forest({}, ordered);
  Forest f({}, ordered);
  size_t i = 0;
  f.trees.push_back(detail::parse_tree_impl(s, i));
  while (i < s.size() && s[i] == '.') {
    ++i;
    f.trees.push_back(detail::parse_tree_impl(s, i));
  }
  if (i != s.size()) throw std::invalid_argument("trailing characters in forest literal: " + s);
  return ordered ? f : canonicalize(std::move(f));
}

/// All decorated trees with exactly `grade` vertices over {1..alphabet}.
inline std::vector<Tree> enumerate_trees(int grade, int alphabet, bool ordered);

/// All decorated forests with exactly `grade` vertices over {1..alphabet}.
inline std::vector<Forest> enumerate_forests(int grade, int alphabet, bool ordered) {
  if (grade == 0) return {Forest({}, ordered)};
  // first tree takes k vertices, rest is a forest on grade-k.
  std::vector<Forest> out;
  for (int k = 1; k <= grade; ++k) {
    for (const auto& t : enumerate_trees(k, alphabet, ordered)) {
      for (const auto& rest : enumerate_forests(grade - k, alphabet, ordered)) {
        if (!ordered && !rest.trees.empty() && tree_less(rest.trees.front(), t)) continue;
        // unordered: keep only sorted sequences so each multiset appears once
        Forest f({}, ordered);
        f.trees.push_back(t);
        f.trees.insert(f.trees.end(), rest.trees.begin(), rest.trees.end());
        if (!ordered) {
          bool sorted = true;
          for (size_t i = 0; i + 1 < f.trees.size(); ++i)
            if (tree_less(f.trees[i + 1], f.trees[i])) sorted = false;
          if (!sorted) continue;
        }
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

inline std::vector<Tree> enumerate_trees(int grade, int alphabet, bool ordered) {
  std::vector<Tree> out;
  for (int dec = 1; dec <= alphabet; ++dec) {
    for (const auto& f : enumerate_forests(grade - 1, alphabet, ordered)) {
      Tree t(dec, f.trees);
      if (!ordered) t = tree_canonicalize(std::move(t));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace logode
