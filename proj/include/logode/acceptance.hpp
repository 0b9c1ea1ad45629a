#pragma once

#include "logode/charts.hpp"
#include "logode/elementary.hpp"
#include "logode/pushforward.hpp"
#include "logode/solver.hpp"
#include "logode/verify.hpp"

#include <set>
#include <sstream>

namespace logode {

namespace detail {

inline Polynomial sample_poly(RationalSampler& s, int dim, int max_deg) {
  Polynomial p(dim);
  MultiIndex e(dim, 0);
  for (;;) {
    int total = 0;
    for (int v : e) total += v;
    if (total <= max_deg && s.coin(2)) p.add_term(e, s.small());
    int i = 0;
    while (i < dim && e[i] == max_deg) e[i++] = 0;
    if (i == dim) break;
    ++e[i];
  }
  return p;
}

inline PolyVectorField sample_field(RationalSampler& s, int dim, int max_deg) {
  std::vector<Polynomial> comps;
  for (int i = 0; i < dim; ++i) comps.push_back(sample_poly(s, dim, max_deg));
  return PolyVectorField(std::move(comps));
}

inline Connection sample_connection(RationalSampler& s, int dim, int max_deg) {
  Connection c(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) c.set_gamma(k, i, j, sample_poly(s, dim, max_deg));
  return c;
}

}  // namespace detail

/// The worked identities: the nine-term unordered star product and the
/// two-part ordered deshuffle of 123.
inline std::vector<CheckResult> worked_examples_suite() {
  std::vector<CheckResult> out;
  {
    FormalSum product = gl_star(FormalSum::term(Key(parse_forest("[1].[2]", false))),
                                FormalSum::term(Key(parse_forest("[3:[4]]", false))));
    std::set<std::string> expect = {
        "u:[3:[4:[1],[2]]]", "u:[3:[1],[4:[2]]]", "u:[3:[2],[4:[1]]]",
        "u:[3:[1],[2],[4]]", "u:[1].[3:[2],[4]]", "u:[1].[3:[4:[2]]]",
        "u:[2].[3:[1],[4]]", "u:[2].[3:[4:[1]]]", "u:[1].[2].[3:[4]]",
    };
    bool pass = product.size() == 9;
    for (const auto& [k, c] : product.terms())
      pass = pass && c == 1 && expect.count(k.encode()) == 1;
    detail::record(out, "gl: nine-term star product [1].[2] * [3:[4]], all coefficients 1", pass,
                   to_string(product));
  }
  {
    auto splits = ordered_deshuffles(Word{1, 2, 3}, 2);
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& s : splits)
      got.insert({word_to_string(s.parts[0]), word_to_string(s.parts[1])});
    std::set<std::pair<std::string, std::string>> want{{"1", "23"}, {"2", "13"}, {"12", "3"}};
    detail::record(out, "words: ordered deshuffles of 123 into two parts = {(1,23),(2,13),(12,3)}",
                   got == want);
  }
  return out;
}

/// Chen identity of the signature lift (exact) and the shuffle identity of
/// its coefficients, on random rational piecewise-linear paths.
inline std::vector<CheckResult> chen_suite(uint64_t seed, int paths = 4) {
  std::vector<CheckResult> out;
  RationalSampler s(seed);
  bool chen_ok = true, shuffle_ok = true;
  std::string detail_msg;
  for (int trial = 0; trial < paths; ++trial) {
    int segments = 2 + static_cast<int>(s.raw() % 3);  // up to 4 segments
    PiecewiseLinearPath p;
    p.times.push_back(0);
    for (int i = 1; i <= segments; ++i)
      p.times.push_back(p.times.back() + Rational(1, 1 + static_cast<long long>(s.raw() % 4)));
    p.points.assign(segments + 1, std::vector<Rational>(2));
    for (auto& pt : p.points)
      for (auto& c : pt) c = s.small();
    RoughPath x = signature_lift(p, 3);
    std::vector<Rational> grid;
    for (size_t i = 0; i + 1 < p.times.size(); ++i) {
      grid.push_back(p.times[i]);
      grid.push_back((p.times[i] + p.times[i + 1]) / 2);
    }
    grid.push_back(p.times.back());
    if (chen_check(x, grid) != 0) {
      chen_ok = false;
      detail_msg = "chen defect on trial " + std::to_string(trial);
    }
    DualElement val = x.evaluate(p.times.front(), p.times.back());
    for (const auto& uk : basis_keys_up_to(HopfStructure::tensor_words, 2, 2))
      for (const auto& wk : basis_keys_up_to(HopfStructure::tensor_words, 2, 2)) {
        if (uk.grade() + wk.grade() > 3) continue;
        Rational lhs = val.value.coeff(uk) * val.value.coeff(wk);
        Rational rhs = 0;
        FormalSum sh = shuffle(uk.word(), wk.word());
        for (const auto& [k, c] : sh.terms()) rhs += c * val.value.coeff(k);
        if (lhs != rhs) {
          shuffle_ok = false;
          detail_msg = "shuffle identity " + word_to_string(uk.word()) + " , " +
                       word_to_string(wk.word());
        }
      }
  }
  detail::record(out, "tensor: Chen identity of the signature lift is exactly zero (level 3)",
                 chen_ok, detail_msg);
  detail::record(out, "tensor: shuffle identity <X,u><X,w> = <X,u shuffle w> exact (|u|+|w| <= 3)",
                 shuffle_ok, detail_msg);
  return out;
}

/// Pseudo-bialgebra certification with a random polynomial connection:
/// both defects vanish for all ordered-forest pairs with <= `max_total`
/// vertices, and grafting matches the covariant derivative for tree pairs.
inline std::vector<CheckResult> pseudo_bialgebra_suite(uint64_t seed, int max_total = 3,
                                                       int graft_tau_grade = 3,
                                                       int graft_sigma_grade = 2) {
  std::vector<CheckResult> out;
  RationalSampler s(seed);
  std::vector<PolyVectorField> fields{detail::sample_field(s, 2, 2), detail::sample_field(s, 2, 2)};
  Connection conn = detail::sample_connection(s, 2, 2);
  Polynomial phi = detail::sample_poly(s, 2, 2), psi = detail::sample_poly(s, 2, 2);
  ElementaryDifferential map(Structure::mkw, fields, conn);

  bool defects_ok = true;
  std::string bad;
  auto keys = basis_keys_up_to(HopfStructure::mkw_dual, max_total, 2);
  std::vector<std::pair<const Key*, const Key*>> pairs;
  for (const auto& x : keys)
    for (const auto& y : keys)
      if (x.grade() + y.grade() <= max_total) pairs.emplace_back(&x, &y);
  std::vector<uint8_t> ok(pairs.size(), 1);
  parallel_for(static_cast<int>(pairs.size()), [&](int i) {
    auto [d1, d2] =
        check_pseudo_bialgebra(map, FormalSum::term(*pairs[i].first),
                               FormalSum::term(*pairs[i].second), phi, psi);
    ok[i] = d1.is_zero() && d2.is_zero();
  });
  for (size_t i = 0; i < pairs.size(); ++i)
    if (!ok[i] && defects_ok) {
      defects_ok = false;
      bad = pairs[i].first->encode() + " , " + pairs[i].second->encode();
    }
  detail::record(out,
                 "mkw: pseudo-bialgebra defects exactly zero, forest pairs <= " +
                     std::to_string(max_total) + " vertices, random degree-2 connection",
                 defects_ok, bad);

  bool graft_ok = true;
  std::string graft_bad;
  for (int gt = 1; gt <= graft_tau_grade && graft_ok; ++gt)
    for (int gs = 1; gs <= graft_sigma_grade && graft_ok; ++gs)
      for (const auto& tau : enumerate_trees(gt, 2, true))
        for (const auto& sigma : enumerate_trees(gs, 2, true))
          if (!check_graft_compatibility(map, tau, sigma).is_zero()) {
            graft_ok = false;
            graft_bad = tree_encode(tau) + " onto " + tree_encode(sigma);
          }
  detail::record(out,
                 "mkw: grafting matches the covariant derivative, tree pairs <= " +
                     std::to_string(graft_tau_grade) + "+" + std::to_string(graft_sigma_grade) +
                     " vertices",
                 graft_ok, graft_bad);
  return out;
}

/// Flat-case consistency: symmetric associators (field and tree level) and
/// agreement of the unordered differentials with order-forgetting ordered
/// ones up to `max_grade` vertices.
inline std::vector<CheckResult> prelie_suite(uint64_t seed, int max_grade = 4) {
  std::vector<CheckResult> out;
  RationalSampler s(seed);
  Connection flat(2);

  bool assoc_ok = true;
  for (int trial = 0; trial < 5 && assoc_ok; ++trial) {
    PolyVectorField u = detail::sample_field(s, 2, 2), v = detail::sample_field(s, 2, 2),
                    w = detail::sample_field(s, 2, 2);
    auto assoc = [&](const PolyVectorField& a, const PolyVectorField& b,
                     const PolyVectorField& c) {
      return flat.cov_deriv(a, flat.cov_deriv(b, c)) - flat.cov_deriv(flat.cov_deriv(a, b), c);
    };
    assoc_ok = assoc(u, v, w) == assoc(v, u, w);
  }
  detail::record(out, "gl: flat covariant product has a symmetric associator (pre-Lie identity)",
                 assoc_ok);

  bool tree_ok = true;
  auto tree_sum = [](const Tree& t) { return FormalSum::term(Key(single_tree_forest(t, false))); };
  auto graft_sum = [](const FormalSum& x, const FormalSum& y) {
    return bilinear(x, y, std::nullopt,
                    [](const Key& a, const Key& b) { return graft(a.forest(), b.forest()); });
  };
  for (int ga = 1; ga <= 2 && tree_ok; ++ga)
    for (const auto& a : enumerate_trees(ga, 2, false))
      for (const auto& b : enumerate_trees(1, 2, false))
        for (const auto& c : enumerate_trees(2, 2, false)) {
          FormalSum lhs = graft_sum(tree_sum(a), graft_sum(tree_sum(b), tree_sum(c))) -
                          graft_sum(graft_sum(tree_sum(a), tree_sum(b)), tree_sum(c));
          FormalSum rhs = graft_sum(tree_sum(b), graft_sum(tree_sum(a), tree_sum(c))) -
                          graft_sum(graft_sum(tree_sum(b), tree_sum(a)), tree_sum(c));
          if (!(lhs == rhs)) tree_ok = false;
        }
  detail::record(out, "gl: grafting associator on trees is symmetric in the first two slots",
                 tree_ok);

  std::vector<PolyVectorField> fields{detail::sample_field(s, 2, 2),
                                      detail::sample_field(s, 2, 2)};
  ElementaryDifferential gl_map(Structure::gl, fields);
  ElementaryDifferential mkw_flat(Structure::mkw, fields, Connection(2));
  bool agree_ok = true;
  std::string bad;
  for (int g = 1; g <= max_grade && agree_ok; ++g)
    for (const auto& t : enumerate_trees(g, 2, true)) {
      Tree unordered = tree_canonicalize(t);
      if (!(mkw_flat.field_of_tree(t) == gl_map.field_of_tree(unordered))) {
        agree_ok = false;
        bad = tree_encode(t);
        break;
      }
    }
  detail::record(out,
                 "gl: unordered differentials equal order-forgetting ordered ones (trees <= " +
                     std::to_string(max_grade) + " vertices, flat space)",
                 agree_ok, bad);
  return out;
}

/// Level-2 expansion with the torsion-symmetrized connection against the
/// closed level-2 formula, as an exact identity in the increment symbols.
inline std::vector<CheckResult> davie_level2_suite(uint64_t seed) {
  std::vector<CheckResult> out;
  RationalSampler s(seed);
  const int d = 2, n = 2;
  // variables: x_1, x_2, then A^a (letters), then A^{ab} (one per letter pair)
  const int total = d + n + n * n;
  auto xvar = [&](int a) { return Polynomial::variable(total, d + (a - 1)); };
  auto xxvar = [&](int a, int b) {
    return Polynomial::variable(total, d + n + (a - 1) * n + (b - 1));
  };

  std::vector<PolyVectorField> fields{detail::sample_field(s, d, 2),
                                      detail::sample_field(s, d, 2)};
  Connection conn = detail::sample_connection(s, d, 2);
  Connection sym = conn.symmetrized();
  ElementaryDifferential map(Structure::mkw, fields, sym);

  bool ok = true;
  std::string bad;
  for (int k = 0; k < d && ok; ++k) {
    Polynomial coord = Polynomial::variable(d, k);

    // weighted sum over the unordered basis up to grade 2, with the tree
    // symbols: dot_a -> A^a, [dot_a]_b -> A^{ab}, dot_a dot_b -> A^a A^b
    Polynomial lhs(total);
    for (const auto& key : basis_keys_up_to(HopfStructure::grossman_larson, 2, n)) {
      const Forest& f = key.forest();
      if (f.trees.empty()) continue;
      Polynomial symbol(total);
      if (f.trees.size() == 1 && f.trees[0].children.empty()) {
        symbol = xvar(f.trees[0].decoration);
      } else if (f.trees.size() == 1) {
        int child = f.trees[0].children[0].decoration;
        int root = f.trees[0].decoration;
        symbol = xxvar(child, root);
      } else {
        symbol = xvar(f.trees[0].decoration) * xvar(f.trees[1].decoration);
      }
      // evaluate the unordered differential through an ordered representative
      Forest rep = f;
      rep.ordered = true;
      Polynomial diff =
          ElementaryDifferential(Structure::mkw, fields, sym).differential(Key(rep)).apply(coord);
      Rational weight = 1 / symmetry_factor(f);
      lhs += weight * (diff.widen(total) * symbol);
    }

    // closed level-2 form with the raw connection
    Polynomial rhs(total);
    for (int a = 1; a <= n; ++a)
      rhs += fields[a - 1].components[k].widen(total) * xvar(a);
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        Polynomial dd(d);
        for (int al = 0; al < d; ++al)
          dd += fields[a - 1].components[al] * fields[b - 1].components[k].derivative(al);
        rhs += dd.widen(total) * xxvar(a, b);
        Polynomial gamma_term(d);
        for (int al = 0; al < d; ++al)
          for (int be = 0; be < d; ++be)
            gamma_term +=
                fields[a - 1].components[al] * fields[b - 1].components[be] * conn.gamma(k, al, be);
        rhs -= Rational(1, 2) * (gamma_term.widen(total) *
                                 (xvar(a) * xvar(b) - xxvar(a, b) - xxvar(b, a)));
      }

    if (!(lhs == rhs)) {
      ok = false;
      bad = "coordinate " + std::to_string(k + 1);
    }
  }
  detail::record(out,
                 "gl: level-2 weighted expansion with the symmetrized connection equals the "
                 "closed level-2 formula (exact in the increment symbols)",
                 ok, bad);
  return out;
}

/// Closed-form solver checks: translation, exponential and area flows.
inline std::vector<CheckResult> solver_closed_forms_suite() {
  std::vector<CheckResult> out;
  {
    PolyVectorField v(1);
    v.components[0] = Polynomial::constant(1, 1);
    ElementaryDifferential map(Structure::tensor, {v});
    PiecewiseLinearPath p;
    p.times = {0, 1};
    p.points = {{Rational(0)}, {Rational(1)}};
    RoughPath x = signature_lift(p, 2);
    SolverConfig cfg;
    cfg.substeps = 8;
    FlowResult fr = sew(map, x, Rational(0), Rational(1), {0.5}, cfg);
    double err = std::abs(fr.endpoint[0] - 1.5);
    detail::record(out, "solver: constant field translates exactly (error <= 1e-12)", err <= 1e-12,
                   "error " + std::to_string(err));
  }
  {
    PolyVectorField v(1);
    v.components[0] = Polynomial::variable(1, 0);
    ElementaryDifferential map(Structure::tensor, {v});
    PiecewiseLinearPath p;
    p.times = {0, 1};
    p.points = {{Rational(0)}, {Rational(1)}};
    RoughPath x = signature_lift(p, 2);
    SolverConfig cfg;
    cfg.substeps = 64;
    cfg.max_depth = 10;
    FlowResult fr = sew(map, x, Rational(0), Rational(1), {1.0}, cfg);
    double err = std::abs(fr.endpoint[0] - std::exp(1.0));
    detail::record(out, "solver: linear field matches e^{t-s} within 1e-8 (M=64, depth<=10)",
                   err <= 1e-8, "error " + std::to_string(err));
  }
  {
    PolyVectorField v1(2), v2(2);
    v1.components[0] = Polynomial::constant(2, 1);
    v2.components[1] = Polynomial::variable(2, 0);
    ElementaryDifferential map(Structure::tensor, {v1, v2});
    FormalSum area(2);
    area.add_term(Key(Word{1, 2}), 1);
    area.add_term(Key(Word{2, 1}), -1);
    RoughPath x = from_primitive(area, Structure::tensor, 2, 2, 0.45, 0, 1);
    SolverConfig cfg;
    cfg.substeps = 32;
    FlowResult fr = sew(map, x, Rational(0), Rational(1), {0.0, 0.0}, cfg);
    double err = std::abs(fr.endpoint[1] - 1.0);
    detail::record(out,
                   "solver: pure-area driver with nilpotent fields matches the closed level-2 "
                   "solution within 1e-6",
                   err <= 1e-6, "error " + std::to_string(err));
  }
  return out;
}

/// Davie residual rate for the pure-area driver (alpha = 0.45, N = 2) and the
/// geometric decay of the sewing Cauchy increments.
inline std::vector<CheckResult> davie_rate_suite() {
  std::vector<CheckResult> out;
  FormalSum area(2);
  area.add_term(Key(Word{1, 2}), 1);
  area.add_term(Key(Word{2, 1}), -1);
  RoughPath x = from_primitive(area, Structure::tensor, 2, 2, 0.45, 0, 1, /*strict=*/true);

  {
    PolyVectorField v1(2), v2(2);
    v1.components[0] = Polynomial::constant(2, 1);
    v2.components[1] = Polynomial::variable(2, 0);
    ElementaryDifferential map(Structure::tensor, {v1, v2});
    SolverConfig cfg;
    cfg.substeps = 16;
    Polynomial phi = Polynomial::variable(2, 1) * Polynomial::variable(2, 1);
    std::vector<double> scales;
    for (int k = 3; k <= 8; ++k) scales.push_back(std::pow(2.0, -k));
    DavieTable table = davie_residual(map, x, phi, {0.0, 0.0}, 0.0, 1.0, scales, cfg);
    double target = (2 + 1) * 0.45 - 0.15;
    detail::record(out,
                   "solver: Davie residual log-log slope >= " + std::to_string(target) +
                       " for the pure-area driver",
                   table.slope >= target, "slope " + std::to_string(table.slope));

    FlowResult fr = sew(map, x, Rational(0), Rational(1), {0.25, -0.5}, cfg);
    detail::record(out,
                   "solver: sewing Cauchy increments decay with ratio <= 0.9 (nilpotent fields)",
                   fr.diagnostics.cauchy_ratio <= 0.9,
                   "ratio " + std::to_string(fr.diagnostics.cauchy_ratio));
  }
  {
    // a non-nilpotent variant exercises a genuinely geometric decay
    PolyVectorField v1(2), v2(2);
    v1.components[0] = Polynomial::constant(2, 1);
    v2.components[1] = Polynomial::variable(2, 0) * Polynomial::variable(2, 1);
    ElementaryDifferential map(Structure::tensor, {v1, v2});
    SolverConfig cfg;
    cfg.substeps = 12;
    cfg.tolerance = 1e-9;
    FlowResult fr = sew(map, x, Rational(0), Rational(1), {0.5, 1.0}, cfg);
    bool measurable = fr.diagnostics.cauchy_increments.size() >= 2;
    detail::record(out,
                   "solver: sewing Cauchy increments decay with ratio <= 0.9 (exponential fields)",
                   measurable && fr.diagnostics.cauchy_ratio <= 0.9 &&
                       fr.diagnostics.cauchy_ratio > 0,
                   "ratio " + std::to_string(fr.diagnostics.cauchy_ratio));
  }
  return out;
}

/// Two-chart circle solve: coordinate independence on overlaps.
inline std::vector<CheckResult> charts_suite() {
  std::vector<CheckResult> out;
  Polynomial u = Polynomial::variable(1, 0);
  PolyVectorField fu(1), fv(1);
  fu.components[0] = Rational(-1, 2) * (Polynomial::constant(1, 1) + u * u);
  fv.components[0] = Rational(1, 2) * (Polynomial::constant(1, 1) + u * u);
  RationalMap inv;
  inv.num = {Polynomial::constant(1, 1)};
  inv.den = {Polynomial::variable(1, 0)};
  Atlas atlas;
  atlas.charts.push_back(Chart{"north", Box{{{-2.0, 2.0}}}, {fu}, std::nullopt, {{"south", inv}}});
  atlas.charts.push_back(Chart{"south", Box{{{-2.0, 2.0}}}, {fv}, std::nullopt, {{"north", inv}}});

  double roundtrip = transition_roundtrip_defect(atlas.charts[0], atlas.charts[1],
                                                 {{0.6}, {1.0}, {1.7}, {-0.8}, {-1.5}});
  detail::record(out, "charts: transition round-trip is the identity on overlap samples (<=1e-10)",
                 roundtrip <= 1e-10, "defect " + std::to_string(roundtrip));

  PiecewiseLinearPath p;
  p.times = {0, Rational(5)};
  p.points = {{Rational(0)}, {Rational(5)}};
  RoughPath x = signature_lift(p, 2);
  SolverConfig cfg;
  cfg.substeps = 64;
  cfg.tolerance = 1e-10;
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(5.0 * i / 40);
  const double theta0 = 3.14159265358979323846 / 2;
  ChartSolveReport report = solve_on_charts(atlas, Structure::tensor, x, "north",
                                            {1.0 / std::tan(theta0 / 2)}, grid, cfg);
  bool pass = report.switches >= 1 && report.max_overlap_discrepancy <= 1e-8;
  double theta1 = theta0 + 5.0;
  double expect =
      report.rows.back().chart == "north" ? 1.0 / std::tan(theta1 / 2) : std::tan(theta1 / 2);
  pass = pass && std::abs(report.rows.back().x[0] - expect) <= 1e-6;
  detail::record(out, "charts: two-chart circle solve, overlap discrepancy <= 1e-8",
                 pass,
                 "overlap " + std::to_string(report.max_overlap_discrepancy) + ", switches " +
                     std::to_string(report.switches));
  return out;
}

/// Push-forward factorization and the word chain rule, exact.
inline std::vector<CheckResult> pushforward_suite(uint64_t seed) {
  std::vector<CheckResult> out;
  RationalSampler s(seed);

  bool fact_ok = true;
  std::string bad;
  for (int trial = 0; trial < 2 && fact_ok; ++trial) {
    std::vector<Polynomial> phi{detail::sample_poly(s, 2, 2), detail::sample_poly(s, 2, 2)};
    std::vector<Polynomial> psi{detail::sample_poly(s, 2, 2), detail::sample_poly(s, 2, 2)};
    Rational defect = factorization_defect(phi, psi, 3);
    if (defect != 0) {
      fact_ok = false;
      bad = "defect " + to_string(defect) + " on trial " + std::to_string(trial);
    }
  }
  detail::record(out,
                 "pushforward: factorization of local models is exactly zero (degree-2 maps, "
                 "level 3)",
                 fact_ok, bad);

  bool chain_ok = true;
  for (int trial = 0; trial < 3 && chain_ok; ++trial) {
    std::vector<Polynomial> phi{detail::sample_poly(s, 2, 2), detail::sample_poly(s, 2, 2)};
    Polynomial psi = detail::sample_poly(s, 2, 2);
    Polynomial composite = psi.compose(phi);
    for (const auto& k : basis_keys_up_to(HopfStructure::tensor_words, 3, 2)) {
      if (k.word().empty()) continue;
      Polynomial direct = composite;
      for (int letter : k.word().letters) direct = direct.derivative(letter - 1);
      if (!(chain_rule_words(psi, phi, k.word()) == direct)) chain_ok = false;
    }
  }
  detail::record(out, "pushforward: word chain rule equals direct differentiation (|w| <= 3)",
                 chain_ok);

  // the splitting-triple bijection that drives the factorization
  Word u{1, 2, 1};
  auto as = enumerate_triples_a(u, 2, 2);
  auto bs = enumerate_triples_b(u, 2, 2);
  bool bij_ok = as.size() == bs.size();
  std::set<std::string> fwd, all;
  for (const auto& b : bs) all.insert(triple_signature(b));
  for (const auto& a : as) {
    TripleB b = triple_forward(a, u);
    fwd.insert(triple_signature(b));
    bij_ok = bij_ok && triple_signature(triple_backward(b, u)) == triple_signature(a);
  }
  bij_ok = bij_ok && fwd == all;
  detail::record(out, "pushforward: splitting-triple correspondence is a bijection (round trip)",
                 bij_ok);
  return out;
}

struct AcceptanceCriterion {
  std::string label;
  std::vector<CheckResult> results;
  double seconds = 0;

  bool pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

/// Runs all twelve acceptance criteria with the pinned tolerances.
inline std::vector<AcceptanceCriterion> run_acceptance(uint64_t seed) {
  std::vector<AcceptanceCriterion> out;
  auto timed = [&](const std::string& label, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results = fn();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back({label, std::move(results), secs});
  };
  timed("1. Hopf axiom suite, grade <= 4, all five structures",
        [&] { return hopf_axiom_suite_all(4, 2); });
  timed("2-3. worked combinatorial identities", [&] { return worked_examples_suite(); });
  timed("4. exp/log inversion at level 4, 20 random elements per structure",
        [&] { return exp_log_suite(4, 20, seed); });
  timed("5. Chen and shuffle identities of the signature lift",
        [&] { return chen_suite(seed + 1); });
  timed("6. pseudo-bialgebra certification with a random connection",
        [&] { return pseudo_bialgebra_suite(seed + 2); });
  timed("7. flat-case consistency (symmetric associators, unordered agreement)",
        [&] { return prelie_suite(seed + 3); });
  timed("8. level-2 expansion with the symmetrized connection",
        [&] { return davie_level2_suite(seed + 4); });
  timed("9. solver closed forms", [&] { return solver_closed_forms_suite(); });
  timed("10. Davie residual rate and Cauchy decay", [&] { return davie_rate_suite(); });
  timed("11. two-chart coordinate independence", [&] { return charts_suite(); });
  timed("12. push-forward factorization and word chain rule",
        [&] { return pushforward_suite(seed + 5); });
  return out;
}

}  // namespace logode
