#pragma once

#include "logode/formal_sum.hpp"
#include "logode/trees.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace logode {

namespace detail {

inline int count_vertices(const Forest& f) { return f.grade(); }

/// Rebuilds `t` with `inserts[v]` grafted at each vertex v (ids in DFS
/// preorder, counter shared across the forest). Ordered mode inserts the new
/// trees as leftmost children, keeping their given order; unordered mode
/// appends (canonicalized later).
inline Tree rebuild_with_inserts(const Tree& t, const std::vector<std::vector<Tree>>& inserts,
                                 int& vertex_id, bool ordered) {
  int my_id = vertex_id++;
  Tree out(t.decoration);
  const auto& new_children = inserts[my_id];
  if (ordered) out.children = new_children;
  for (const auto& c : t.children)
    out.children.push_back(rebuild_with_inserts(c, inserts, vertex_id, ordered));
  if (!ordered)
    out.children.insert(out.children.end(), new_children.begin(), new_children.end());
  return out;
}

/// Sum over all maps from the trees of `f` to the target vertex set. Target
/// vertex 0 is a virtual root when `with_virtual_root` is set (trees sent
/// there become new top-level trees, in front in ordered mode); the remaining
/// ids are the vertices of `g` in DFS preorder.
inline FormalSum graft_impl(const Forest& f, const Forest& g, bool with_virtual_root) {
  const bool ordered = g.ordered;
  const int base = with_virtual_root ? 1 : 0;
  const int n_targets = base + count_vertices(g);
  const int n_trees = static_cast<int>(f.trees.size());
  FormalSum out;
  if (n_targets == 0) {
    if (n_trees == 0) out.add_term(Key(g), 1);
    return out;  // nothing to graft onto
  }
  std::vector<int> assign(n_trees, 0);
  for (;;) {
    std::vector<std::vector<Tree>> inserts(n_targets);
    for (int i = 0; i < n_trees; ++i) inserts[assign[i]].push_back(f.trees[i]);
    Forest result({}, ordered);
    if (with_virtual_root) result.trees = inserts[0];
    int counter = base;
    for (const auto& t : g.trees)
      result.trees.push_back(rebuild_with_inserts(t, inserts, counter, ordered));
    if (!ordered) result = canonicalize(std::move(result));
    out.add_term(Key(std::move(result)), 1);
    // next assignment
    int i = n_trees - 1;
    while (i >= 0 && assign[i] == n_targets - 1) assign[i--] = 0;
    if (i < 0) break;
    ++assign[i];
  }
  return out;
}

}  // namespace detail

/// Grafting f onto the vertices of g (every vertex of the target forest is a
/// slot). With a single-tree target this is the grafting product; summands
/// are collected with multiplicity in canonical form.
inline FormalSum graft(const Forest& f, const Forest& g) {
  return detail::graft_impl(f, g, /*with_virtual_root=*/false);
}

inline FormalSum graft(const Forest& f, const Tree& s, bool ordered) {
  return graft(f, single_tree_forest(s, ordered));
}

/// Grossman-Larson / Munthe-Kaas-Wright product on basis forests:
/// B^-(f grafted onto B^+(g)). The mode of g decides which one.
inline FormalSum star_forest(const Forest& f, const Forest& g) {
  return detail::graft_impl(f, g, /*with_virtual_root=*/true);
}

inline FormalSum gl_star(const FormalSum& a, const FormalSum& b,
                         std::optional<int> level = std::nullopt) {
  return bilinear(a, b, level, [](const Key& x, const Key& y) {
    return star_forest(x.forest(), y.forest());
  });
}

inline FormalSum mkw_star(const FormalSum& a, const FormalSum& b,
                          std::optional<int> level = std::nullopt) {
  return gl_star(a, b, level);  // same construction; the keys carry the mode
}

namespace detail {
/// All admissible cuts of t, as (cut-off forest, remaining tree) pairs. The
/// empty cut is included; the full cut t (x) 1 is added by the coproduct.
inline std::vector<std::pair<std::vector<Tree>, Tree>> admissible_cuts(const Tree& t) {
  // per child: either cut the edge (child joins the cut-off forest) or keep
  // it and recurse; at most one cut per root path holds by construction.
  std::vector<std::pair<std::vector<Tree>, Tree>> acc{{{}, Tree(t.decoration)}};
  for (const auto& child : t.children) {
    std::vector<std::pair<std::vector<Tree>, Tree>> next;
    auto child_cuts = admissible_cuts(child);
    for (const auto& [cut_so_far, rem_so_far] : acc) {
      {  // cut this edge
        auto cut = cut_so_far;
        cut.push_back(child);
        next.emplace_back(std::move(cut), rem_so_far);
      }
      for (const auto& [ccut, crem] : child_cuts) {  // keep the edge
        auto cut = cut_so_far;
        cut.insert(cut.end(), ccut.begin(), ccut.end());
        Tree rem = rem_so_far;
        rem.children.push_back(crem);
        next.emplace_back(std::move(cut), std::move(rem));
      }
    }
    acc = std::move(next);
  }
  return acc;
}
}  // namespace detail

/// Connes-Kreimer coproduct: admissible-cut sum per tree, multiplied across
/// the forest. Unordered mode only.
inline FormalSum ck_coproduct(const Forest& f, std::optional<int> level = std::nullopt) {
  if (f.ordered) throw std::invalid_argument("ck_coproduct needs an unordered forest");
  FormalSum acc = FormalSum::term(tensor_key(Key(Forest({}, false)), Key(Forest({}, false))), 1, level);
  for (const auto& t : f.trees) {
    FormalSum tree_cop(level);
    tree_cop.add_term(tensor_key(Key(single_tree_forest(t, false)), Key(Forest({}, false))), 1);
    for (const auto& [cut, rem] : detail::admissible_cuts(t)) {
      Forest left = canonicalize(Forest(cut, false));
      tree_cop.add_term(tensor_key(Key(std::move(left)), Key(single_tree_forest(rem, false))), 1);
    }
    // multiply in the tensor square: (a (x) b)(c (x) d) = ac (x) bd
    acc = bilinear(acc, tree_cop, level, [](const Key& x, const Key& y) {
      Forest l = x.pair().left->forest(), r = x.pair().right->forest();
      const Forest& l2 = y.pair().left->forest();
      const Forest& r2 = y.pair().right->forest();
      l.trees.insert(l.trees.end(), l2.trees.begin(), l2.trees.end());
      r.trees.insert(r.trees.end(), r2.trees.begin(), r2.trees.end());
      return FormalSum::term(
          tensor_key(Key(canonicalize(std::move(l))), Key(canonicalize(std::move(r)))));
    });
  }
  return acc;
}

/// Dual coproduct of the Grossman-Larson algebra: deconcatenation over
/// ordered two-block splittings of the tree multiset, weighted with
/// sg(f)/(sg(g)sg(h)).
inline FormalSum gl_dual_coproduct(const Forest& f_in, std::optional<int> level = std::nullopt) {
  if (f_in.ordered) throw std::invalid_argument("gl_dual_coproduct needs an unordered forest");
  Forest f = canonicalize(f_in);
  // group equal trees
  std::vector<std::pair<Tree, int>> groups;
  for (const auto& t : f.trees) {
    if (!groups.empty() && groups.back().first == t)
      ++groups.back().second;
    else
      groups.emplace_back(t, 1);
  }
  Rational sg_f = symmetry_factor(f);
  FormalSum out(level);
  std::vector<int> take(groups.size(), 0);
  for (;;) {
    Forest g({}, false), h({}, false);
    for (size_t i = 0; i < groups.size(); ++i) {
      for (int k = 0; k < take[i]; ++k) g.trees.push_back(groups[i].first);
      for (int k = take[i]; k < groups[i].second; ++k) h.trees.push_back(groups[i].first);
    }
    g = canonicalize(std::move(g));
    h = canonicalize(std::move(h));
    Rational coeff = sg_f / (symmetry_factor(g) * symmetry_factor(h));
    out.add_term(tensor_key(Key(std::move(g)), Key(std::move(h))), coeff);
    size_t i = 0;
    while (i < groups.size() && take[i] == groups[i].second) take[i++] = 0;
    if (i == groups.size()) break;
    ++take[i];
  }
  return out;
}

/// Coproduct of the dual Munthe-Kaas-Wright algebra: deshuffle of the forest
/// viewed as a word of trees.
inline FormalSum mkw_coproduct(const Forest& f, std::optional<int> level = std::nullopt) {
  if (!f.ordered) throw std::invalid_argument("mkw_coproduct needs an ordered forest");
  FormalSum out(level);
  const int n = static_cast<int>(f.trees.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Forest l({}, true), r({}, true);
    for (int p = 0; p < n; ++p)
      (mask >> p & 1u ? l : r).trees.push_back(f.trees[p]);
    out.add_term(tensor_key(Key(std::move(l)), Key(std::move(r))), 1);
  }
  return out;
}

/// Commutative forest concatenation (the Connes-Kreimer product).
inline FormalSum forest_product(const Forest& a, const Forest& b) {
  Forest f = a;
  f.trees.insert(f.trees.end(), b.trees.begin(), b.trees.end());
  if (!f.ordered) f = canonicalize(std::move(f));
  return FormalSum::term(Key(std::move(f)));
}

/// Shuffle product of ordered forests as words of trees (the product of the
/// Munthe-Kaas-Wright Hopf algebra).
inline FormalSum forest_shuffle(const Forest& u, const Forest& v) {
  if (!u.ordered || !v.ordered) throw std::invalid_argument("forest_shuffle needs ordered forests");
  if (u.trees.empty()) return FormalSum::term(Key(v));
  if (v.trees.empty()) return FormalSum::term(Key(u));
  Forest u_head(std::vector<Tree>(u.trees.begin(), u.trees.end() - 1), true);
  Forest v_head(std::vector<Tree>(v.trees.begin(), v.trees.end() - 1), true);
  FormalSum out;
  FormalSum left = forest_shuffle(u, v_head);
  for (const auto& [k, c] : left.terms()) {
    Forest w = k.forest();
    w.trees.push_back(v.trees.back());
    out.add_term(Key(std::move(w)), c);
  }
  FormalSum right = forest_shuffle(u_head, v);
  for (const auto& [k, c] : right.terms()) {
    Forest w = k.forest();
    w.trees.push_back(u.trees.back());
    out.add_term(Key(std::move(w)), c);
  }
  return out;
}

}  // namespace logode
