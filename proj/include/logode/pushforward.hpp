#pragma once

#include "logode/polynomial.hpp"
#include "logode/rough_path.hpp"
#include "logode/word_hopf.hpp"

#include <map>
#include <vector>

namespace logode {

/// R^d-valued one-form on R^n: nu = nu_i d^i with nu_i : R^n -> R^d.
/// comps[i-1][a-1] is the a-th component of nu_i, a polynomial in n variables.
struct OneForm {
  std::vector<std::vector<Polynomial>> comps;

  int source_dim() const { return static_cast<int>(comps.size()); }
  int target_dim() const { return comps.empty() ? 0 : static_cast<int>(comps[0].size()); }

  /// nu_w = d_{w_1} ... d_{w_{|w|-1}} nu_{w_{|w|}}; a vector of d polynomials.
  std::vector<Polynomial> word_coeff(const Word& w) const {
    if (w.empty()) throw std::invalid_argument("one-form word coefficient needs a nonempty word");
    std::vector<Polynomial> out = comps.at(w.letters.back() - 1);
    for (size_t j = 0; j + 1 < w.letters.size(); ++j)
      for (auto& p : out) p = p.derivative(w.letters[j] - 1);
    return out;
  }
};

/// The exterior derivative of a polynomial map phi : R^n -> R^d, as the
/// one-form with nu_i = d_i phi.
inline OneForm differential_one_form(const std::vector<Polynomial>& phi) {
  if (phi.empty()) throw std::invalid_argument("empty map");
  const int n = phi[0].dim();
  OneForm nu;
  nu.comps.assign(n, {});
  for (int i = 0; i < n; ++i) {
    nu.comps[i].reserve(phi.size());
    for (const auto& comp : phi) nu.comps[i].push_back(comp.derivative(i));
  }
  return nu;
}

/// Local model of the integral of a one-form against a rough path: per target
/// word w, the polynomial coefficient of each source-word signature entry,
///   coeff(w, u) = sum over ordered deshuffles (s_1..s_{|w|}) of u of
///                 prod_j nu_{s_j}^{w_j}.
/// Coefficients vanish unless |u| >= |w|.
struct LocalExpansion {
  int source_alphabet = 0;
  int target_alphabet = 0;
  int level = 0;
  std::map<Word, std::map<Word, Polynomial>> coeffs;  // target word -> source word -> poly

  const Polynomial* coeff(const Word& w, const Word& u) const {
    auto it = coeffs.find(w);
    if (it == coeffs.end()) return nullptr;
    auto jt = it->second.find(u);
    return jt == it->second.end() ? nullptr : &jt->second;
  }
};

inline LocalExpansion one_form_expansion(const OneForm& nu, int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  const int n = nu.source_dim(), d = nu.target_dim();
  LocalExpansion out;
  out.source_alphabet = n;
  out.target_alphabet = d;
  out.level = level;
  // cache nu_s per source word s
  std::map<Word, std::vector<Polynomial>> nu_cache;
  auto nu_of = [&](const Word& s) -> const std::vector<Polynomial>& {
    auto it = nu_cache.find(s);
    if (it == nu_cache.end()) it = nu_cache.emplace(s, nu.word_coeff(s)).first;
    return it->second;
  };

  std::vector<Word> source_words;
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, level, n))
    if (!k.word().empty()) source_words.push_back(k.word());
  std::vector<Word> target_words;
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, level, d))
    if (!k.word().empty()) target_words.push_back(k.word());

  for (const auto& w : target_words) {
    auto& per_u = out.coeffs[w];
    for (const auto& u : source_words) {
      if (u.grade() < w.grade()) continue;
      Polynomial acc(n);
      for (const auto& split : ordered_deshuffles(u, w.grade())) {
        Polynomial term = Polynomial::constant(n, 1);
        for (int j = 0; j < w.grade(); ++j)
          term = term * nu_of(split.parts[j])[w.letters[j] - 1];
        acc += term;
      }
      if (!acc.is_zero()) per_u.emplace(u, std::move(acc));
    }
  }
  return out;
}

/// Push-forward local model: the one-form is d(phi).
inline LocalExpansion local_pushforward_expansion(const std::vector<Polynomial>& phi, int level) {
  return one_form_expansion(differential_one_form(phi), level);
}

class GridTooCoarse : public std::runtime_error {
 public:
  GridTooCoarse(const std::string& what, double defect) : std::runtime_error(what), defect(defect) {}
  double defect;
};

/// Push-forward of a geometric rough path under a polynomial map: evaluates
/// the local models on the given grid and Chen-composes them to macroscopic
/// intervals. Evaluation times must lie on the grid. With a tolerance, the
/// composed macroscopic value is compared against the one-shot local model
/// over the whole horizon; a larger defect reports the grid as too coarse.
inline RoughPath pushforward(const RoughPath& x, const std::vector<Polynomial>& phi, int level,
                             const std::vector<Rational>& grid,
                             std::optional<double> tolerance = std::nullopt) {
  if (x.structure != Structure::tensor)
    throw std::invalid_argument("push-forward acts on geometric (tensor) rough paths");
  if (!x.trace) throw std::invalid_argument("push-forward needs the driver trace");
  if (grid.size() < 2) throw std::invalid_argument("push-forward needs a grid with >= 2 points");
  const int d = static_cast<int>(phi.size());
  LocalExpansion model = local_pushforward_expansion(phi, level);

  // local group elements on consecutive grid intervals
  auto locals = std::make_shared<std::vector<DualElement>>();
  for (size_t j = 0; j + 1 < grid.size(); ++j) {
    std::vector<Rational> base = x.trace(grid[j]);
    DualElement xv = x.evaluate(grid[j], grid[j + 1]);
    FormalSum y(level);
    y.add_term(Key(Word{}), 1);
    for (const auto& [w, per_u] : model.coeffs) {
      Rational c = 0;
      for (const auto& [u, poly] : per_u) c += poly.eval<Rational>(base) * xv.value.coeff(Key(u));
      y.add_term(Key(w), c);
    }
    locals->push_back(DualElement(std::move(y), Structure::tensor, level));
  }

  auto grid_copy = std::make_shared<std::vector<Rational>>(grid);
  auto index_of = [grid_copy](const Rational& t) -> size_t {
    for (size_t i = 0; i < grid_copy->size(); ++i)
      if ((*grid_copy)[i] == t) return i;
    throw std::invalid_argument("push-forward evaluation time is not a grid point");
  };

  RoughPath out;
  out.structure = Structure::tensor;
  out.level = level;
  out.alphabet = d;
  out.alpha = x.alpha;
  out.t0 = grid.front();
  out.t1 = grid.back();
  out.eval = [locals, index_of, level](const Rational& s, const Rational& t) {
    size_t a = index_of(s), b = index_of(t);
    DualElement acc = unit_element(Structure::tensor, level);
    for (size_t j = a; j < b; ++j) acc = star(acc, (*locals)[j]);
    return acc;
  };
  auto inner_trace = x.trace;
  auto phi_copy = phi;
  out.trace = [inner_trace, phi_copy](const Rational& t) {
    std::vector<Rational> base = inner_trace(t);
    std::vector<Rational> out_pt;
    out_pt.reserve(phi_copy.size());
    for (const auto& comp : phi_copy) out_pt.push_back(comp.eval<Rational>(base));
    return out_pt;
  };
  if (tolerance) {
    // refinement estimate: redo the construction on every second grid point
    // and compare over the full horizon
    std::vector<Rational> coarse;
    for (size_t i = 0; i < grid.size(); i += 2) coarse.push_back(grid[i]);
    if (coarse.back() != grid.back()) coarse.push_back(grid.back());
    if (coarse.size() >= 2 && coarse.size() < grid.size()) {
      RoughPath rough_version = pushforward(x, phi, level, coarse);
      FormalSum diff = out.eval(grid.front(), grid.back()).value -
                       rough_version.eval(coarse.front(), coarse.back()).value;
      double defect = diff.max_abs_coeff();
      if (defect > *tolerance)
        throw GridTooCoarse("push-forward grid too coarse: refinement defect " +
                                std::to_string(defect) + " exceeds tolerance",
                            defect);
    }
  }
  return out;
}

/// Local expansion of the solution path of a differential equation driven by
/// the given fields, seen through the map phi: the coefficient of each driver
/// word u in the target word w is
///   sum over ordered deshuffles (s_1..s_{|w|}) of u of
///   prod_j (V_{s_j,1} o ... o V_{s_j,last}) phi^{w_j},
/// the word-indexed elementary differentials replacing plain derivatives. At
/// single-letter words this is exactly the local expansion the solver uses.
inline LocalExpansion solution_expansion(const std::vector<PolyVectorField>& fields,
                                         const std::vector<Polynomial>& phi, int level) {
  if (fields.empty() || phi.empty()) throw std::invalid_argument("empty fields or map");
  const int n = static_cast<int>(fields.size());
  const int d = static_cast<int>(phi.size());
  const int dim = fields[0].dim();
  LocalExpansion out;
  out.source_alphabet = n;
  out.target_alphabet = d;
  out.level = level;

  std::map<std::pair<std::string, int>, Polynomial> cache;  // (word, target comp) -> poly
  auto apply_word = [&](const Word& s, int comp) -> const Polynomial& {
    auto key = std::make_pair(word_to_string(s), comp);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Polynomial g = phi[comp];
      for (auto letter = s.letters.rbegin(); letter != s.letters.rend(); ++letter)
        g = fields[*letter - 1].apply(g);
      it = cache.emplace(key, std::move(g)).first;
    }
    return it->second;
  };

  for (const auto& wk : basis_keys_up_to(HopfStructure::tensor_words, level, d)) {
    const Word& w = wk.word();
    if (w.empty()) continue;
    auto& per_u = out.coeffs[w];
    for (const auto& uk : basis_keys_up_to(HopfStructure::tensor_words, level, n)) {
      const Word& u = uk.word();
      if (u.grade() < w.grade()) continue;
      Polynomial acc(dim);
      for (const auto& split : ordered_deshuffles(u, w.grade())) {
        Polynomial term = Polynomial::constant(dim, 1);
        for (int j = 0; j < w.grade(); ++j)
          term = term * apply_word(split.parts[j], w.letters[j] - 1);
        acc += term;
      }
      if (!acc.is_zero()) per_u.emplace(u, std::move(acc));
    }
  }
  return out;
}

/// The derivative of a composite along a word:
///   d_w (psi o phi) = sum_{1<=|v|<=|w|} (d_v psi)(phi) *
///                     sum over ordered deshuffles (s_1..s_{|v|}) of w of
///                     prod_j d_{s_j} phi^{v_j}.
/// psi lives on the middle space (phi's target), w runs over phi's domain.
inline Polynomial chain_rule_words(const Polynomial& psi, const std::vector<Polynomial>& phi,
                                   const Word& w) {
  if (w.empty()) return psi.compose(phi);
  const int mid = static_cast<int>(phi.size());
  const int dom = phi[0].dim();
  Polynomial acc(dom);
  for (int vlen = 1; vlen <= w.grade(); ++vlen) {
    auto splits = ordered_deshuffles(w, vlen);
    // iterate middle words v of length vlen
    std::vector<int> v(vlen, 1);
    for (;;) {
      Polynomial dv_psi = psi;
      for (int j = 0; j < vlen; ++j) dv_psi = dv_psi.derivative(v[j] - 1);
      if (!dv_psi.is_zero()) {
        Polynomial inner(dom);
        for (const auto& split : splits) {
          Polynomial term = Polynomial::constant(dom, 1);
          for (int j = 0; j < vlen; ++j) {
            Polynomial dphi = phi[v[j] - 1];
            for (int letter : split.parts[j].letters) dphi = dphi.derivative(letter - 1);
            term = term * dphi;
          }
          inner += term;
        }
        acc += dv_psi.compose(phi) * inner;
      }
      int j = vlen - 1;
      while (j >= 0 && v[j] == mid) v[j--] = 1;
      if (j < 0) break;
      ++v[j];
    }
  }
  return acc;
}

/// Exact factorization defect of the push-forward: compares the local model
/// of psi o phi against the composition of the local models of psi and phi,
/// coefficient by coefficient. Returns the largest absolute coefficient.
inline Rational factorization_defect(const std::vector<Polynomial>& phi,
                                     const std::vector<Polynomial>& psi, int level) {
  const int n = static_cast<int>(phi.size());   // middle dimension
  const int m = static_cast<int>(psi.size());   // final dimension
  const int d = phi[0].dim();                   // source dimension
  // direct: expansion of the composite map
  std::vector<Polynomial> composite;
  composite.reserve(m);
  for (const auto& comp : psi) composite.push_back(comp.compose(phi));
  LocalExpansion direct = local_pushforward_expansion(composite, level);

  LocalExpansion outer = local_pushforward_expansion(psi, level);  // over middle words
  LocalExpansion inner = local_pushforward_expansion(phi, level);  // over source words

  Rational worst = 0;
  std::vector<Word> target_words, source_words, middle_words;
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, level, m))
    if (!k.word().empty()) target_words.push_back(k.word());
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, level, d))
    if (!k.word().empty()) source_words.push_back(k.word());
  for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, level, n))
    if (!k.word().empty()) middle_words.push_back(k.word());

  for (const auto& w : target_words)
    for (const auto& u : source_words) {
      if (u.grade() < w.grade()) continue;
      Polynomial composed(d);
      for (const auto& v : middle_words) {
        if (v.grade() < w.grade() || v.grade() > u.grade()) continue;
        const Polynomial* a = outer.coeff(w, v);
        const Polynomial* b = inner.coeff(v, u);
        if (!a || !b) continue;
        composed += a->compose(phi) * (*b);
      }
      const Polynomial* want = direct.coeff(w, u);
      Polynomial defect = want ? composed - *want : composed;
      for (const auto& [e, c] : defect.terms()) worst = std::max(worst, rational_abs(c));
    }
  return worst;
}

/// The splitting-triple bijection behind the factorization. A-side data:
/// an ordered deshuffle t of u into |w| parts, words s_i over the middle
/// alphabet with |s_i| <= |t_i|, and ordered deshuffles z^i of t_i into
/// |s_i| parts. B-side: a middle word v, an ordered deshuffle of v into |w|
/// parts matching the s_i, and an ordered deshuffle z of u into |v| parts.
struct TripleA {
  OrderedSplitting t;                       // of u into |w| parts
  std::vector<Word> s;                      // middle words, one per part
  std::vector<OrderedSplitting> z;          // z[i]: splitting of t_i into |s_i| parts
};

struct TripleB {
  Word v;                                   // middle word
  OrderedSplitting s_split;                 // of v into |w| parts
  OrderedSplitting z;                       // of u into |v| parts
};

/// Forward map A -> B: order all blocks z^i_k by their last positions in u;
/// that order strings the letters of the s_i into v and lines the blocks up
/// as a splitting of u.
inline TripleB triple_forward(const TripleA& a, const Word& u) {
  struct Item {
    int letter;                 // letter of s_i
    std::vector<int> block;     // positions in t_i, to be mapped into u
    int owner;                  // which i
    int last_in_u;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < a.s.size(); ++i) {
    const auto& t_block = a.t.position_blocks[i];
    for (size_t k = 0; k < a.s[i].letters.size(); ++k) {
      Item item;
      item.letter = a.s[i].letters[k];
      for (int pos_in_ti : a.z[i].position_blocks[k]) item.block.push_back(t_block[pos_in_ti]);
      item.owner = static_cast<int>(i);
      item.last_in_u = item.block.back();
      items.push_back(std::move(item));
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item& x, const Item& y) { return x.last_in_u < y.last_in_u; });
  TripleB b;
  b.s_split.position_blocks.assign(a.s.size(), {});
  for (size_t idx = 0; idx < items.size(); ++idx) {
    b.v.letters.push_back(items[idx].letter);
    b.z.position_blocks.push_back(items[idx].block);
    b.z.parts.push_back(word_restrict(u, items[idx].block));
    b.s_split.position_blocks[items[idx].owner].push_back(static_cast<int>(idx));
  }
  for (const auto& blk : b.s_split.position_blocks)
    b.s_split.parts.push_back(word_restrict(b.v, blk));
  return b;
}

/// Inverse map B -> A: the positions of s_i inside v pick out the z-blocks
/// that reassemble into t_i; re-sorting them by u recovers each z^i.
inline TripleA triple_backward(const TripleB& b, const Word& u) {
  TripleA a;
  const size_t parts = b.s_split.position_blocks.size();
  a.s.resize(parts);
  a.z.resize(parts);
  a.t.position_blocks.assign(parts, {});
  for (size_t i = 0; i < parts; ++i) {
    const auto& v_positions = b.s_split.position_blocks[i];
    a.s[i] = b.s_split.parts[i];
    // gather this part's u-position blocks and flatten into t_i
    std::vector<std::vector<int>> blocks;
    for (int vp : v_positions) blocks.push_back(b.z.position_blocks[vp]);
    std::vector<int> t_positions;
    for (const auto& blk : blocks) t_positions.insert(t_positions.end(), blk.begin(), blk.end());
    std::sort(t_positions.begin(), t_positions.end());
    a.t.position_blocks[i] = t_positions;
    a.t.parts.push_back(word_restrict(u, t_positions));
    // z^i: each block expressed through its indices inside t_i
    OrderedSplitting zi;
    for (const auto& blk : blocks) {
      std::vector<int> rel;
      for (int p : blk) {
        auto it = std::lower_bound(t_positions.begin(), t_positions.end(), p);
        rel.push_back(static_cast<int>(it - t_positions.begin()));
      }
      zi.position_blocks.push_back(rel);
      zi.parts.push_back(word_restrict(a.t.parts[i], rel));
    }
    a.z[i] = std::move(zi);
  }
  return a;
}

/// Enumerates the whole A side for given u and part count |w|.
inline std::vector<TripleA> enumerate_triples_a(const Word& u, int parts, int middle_alphabet) {
  std::vector<TripleA> out;
  if (parts < 1 || parts > u.grade()) return out;
  for (const auto& t : ordered_deshuffles(u, parts)) {
    // choose s_i lengths 1..|t_i| and letters, then z^i splittings
    std::vector<TripleA> partial{TripleA{t, {}, {}}};
    for (int i = 0; i < parts; ++i) {
      std::vector<TripleA> next;
      const Word& ti = t.parts[i];
      for (int slen = 1; slen <= ti.grade(); ++slen) {
        std::vector<int> letters(slen, 1);
        for (;;) {
          auto zs = ordered_deshuffles(ti, slen);
          for (const auto& z : zs)
            for (const auto& base : partial) {
              TripleA extended = base;
              extended.s.push_back(Word(letters));
              extended.z.push_back(z);
              next.push_back(std::move(extended));
            }
          int j = slen - 1;
          while (j >= 0 && letters[j] == middle_alphabet) letters[j--] = 1;
          if (j < 0) break;
          ++letters[j];
        }
      }
      partial = std::move(next);
    }
    for (auto& tr : partial) out.push_back(std::move(tr));
  }
  return out;
}

/// Enumerates the whole B side.
inline std::vector<TripleB> enumerate_triples_b(const Word& u, int parts, int middle_alphabet) {
  std::vector<TripleB> out;
  for (int vlen = parts; vlen <= u.grade(); ++vlen) {
    std::vector<int> letters(vlen, 1);
    for (;;) {
      Word v(letters);
      auto ss = ordered_deshuffles(v, parts);
      auto zs = ordered_deshuffles(u, vlen);
      for (const auto& s : ss)
        for (const auto& z : zs) out.push_back(TripleB{v, s, z});
      int j = vlen - 1;
      while (j >= 0 && letters[j] == middle_alphabet) letters[j--] = 1;
      if (j < 0) break;
      ++letters[j];
    }
  }
  return out;
}

inline std::string triple_signature(const TripleB& b) {
  std::string s = word_to_string(b.v) + "|";
  for (const auto& blk : b.s_split.position_blocks) {
    for (int p : blk) s += std::to_string(p) + ",";
    s += ";";
  }
  s += "|";
  for (const auto& blk : b.z.position_blocks) {
    for (int p : blk) s += std::to_string(p) + ",";
    s += ";";
  }
  return s;
}

inline std::string triple_signature(const TripleA& a) {
  std::string s;
  for (const auto& blk : a.t.position_blocks) {
    for (int p : blk) s += std::to_string(p) + ",";
    s += ";";
  }
  s += "|";
  for (const auto& w : a.s) s += word_to_string(w) + ";";
  s += "|";
  for (const auto& zi : a.z) {
    for (const auto& blk : zi.position_blocks) {
      for (int p : blk) s += std::to_string(p) + ",";
      s += ";";
    }
    s += "/";
  }
  return s;
}

/// Pushes the first path through the transition map and measures the largest
/// coefficient defect against the second path over grid pairs.
inline Rational manifold_consistency_defect(const RoughPath& x_i, const RoughPath& x_j,
                                            const std::vector<Polynomial>& transition, int level,
                                            const std::vector<Rational>& grid) {
  RoughPath pushed = pushforward(x_i, transition, level, grid);
  Rational worst = 0;
  for (size_t a = 0; a < grid.size(); ++a)
    for (size_t b = a + 1; b < grid.size(); ++b) {
      FormalSum defect =
          pushed.evaluate(grid[a], grid[b]).value - x_j.evaluate(grid[a], grid[b]).value;
      for (const auto& [k, c] : defect.terms()) worst = std::max(worst, rational_abs(c));
    }
  return worst;
}

}  // namespace logode
