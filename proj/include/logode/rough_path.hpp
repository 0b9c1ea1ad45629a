#pragma once

#include "logode/grouplike.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace logode {

/// Piecewise-linear driver with rational knots, the input of the signature
/// lift. Times strictly increasing.
struct PiecewiseLinearPath {
  std::vector<Rational> times;
  std::vector<std::vector<Rational>> points;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

  void validate() const {
    if (times.size() < 2 || times.size() != points.size())
      throw std::invalid_argument("piecewise-linear path needs matching times/points, >= 2 knots");
    for (size_t i = 0; i + 1 < times.size(); ++i)
      if (!(times[i] < times[i + 1])) throw std::invalid_argument("knot times must increase strictly");
    for (const auto& p : points)
      if (static_cast<int>(p.size()) != dim()) throw std::invalid_argument("point dimension mismatch");
  }

  std::vector<Rational> at(const Rational& t) const {
    if (t < times.front() || t > times.back()) throw std::invalid_argument("time outside the horizon");
    size_t seg = 0;
    while (seg + 2 < times.size() && t > times[seg + 1]) ++seg;
    Rational lam = (t - times[seg]) / (times[seg + 1] - times[seg]);
    std::vector<Rational> x(dim());
    for (int i = 0; i < dim(); ++i)
      x[i] = points[seg][i] + lam * (points[seg + 1][i] - points[seg][i]);
    return x;
  }
};

/// Two-parameter family of truncated group-like elements. Lazy: evaluations
/// are computed on demand from the stored closure; every value satisfies the
/// Chen identity by construction of the provided evaluators.
struct RoughPath {
  Structure structure = Structure::tensor;
  int level = 1;
  int alphabet = 1;
  double alpha = 1.0;
  Rational t0 = 0, t1 = 1;
  std::function<DualElement(const Rational&, const Rational&)> eval;
  std::function<std::vector<Rational>(const Rational&)> trace;  // may be empty

  DualElement evaluate(const Rational& s, const Rational& t) const {
    if (s > t) throw std::invalid_argument("evaluate needs s <= t");
    if (s < t0 || t > t1) throw std::invalid_argument("times outside the horizon");
    return eval(s, t);
  }

  DualElement evaluate(double s, double t) const {
    return evaluate(rational_from_double(s), rational_from_double(t));
  }
};

/// The level/alpha coupling N*alpha <= 1 < (N+1)*alpha. Smooth drivers
/// (alpha = 1) are exempt unless `strict`.
inline void validate_level_alpha(int level, double alpha, bool strict) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0,1]");
  if (!strict && alpha == 1.0) return;
  if (!(level * alpha <= 1.0 && (level + 1) * alpha > 1.0))
    throw std::invalid_argument("level/alpha coupling violated: need N*alpha <= 1 < (N+1)*alpha");
}

/// Signature lift of a piecewise-linear path: per segment the exponential of
/// the increment placed on the letters, star-multiplied along the way. Exact
/// in rational arithmetic; Chen holds identically.
inline RoughPath signature_lift(const PiecewiseLinearPath& path, int level) {
  path.validate();
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  const int n = path.dim();
  RoughPath out;
  out.structure = Structure::tensor;
  out.level = level;
  out.alphabet = n;
  out.alpha = 1.0;  // smooth-case exemption
  out.t0 = path.times.front();
  out.t1 = path.times.back();
  out.eval = [path, level, n](const Rational& s, const Rational& t) {
    DualElement acc = unit_element(Structure::tensor, level);
    for (size_t seg = 0; seg + 1 < path.times.size(); ++seg) {
      Rational a = std::max(path.times[seg], s);
      Rational b = std::min(path.times[seg + 1], t);
      if (!(a < b)) continue;
      std::vector<Rational> xa = path.at(a), xb = path.at(b);
      FormalSum h(level);
      for (int i = 0; i < n; ++i) h.add_term(Key(Word{i + 1}), xb[i] - xa[i]);
      acc = star(acc, exp_n(DualElement(std::move(h), Structure::tensor, level)));
    }
    return acc;
  };
  out.trace = [path](const Rational& t) { return path.at(t); };
  return out;
}

/// Rough path from a path of group-like elements: X_{s,t} = g_s^{-1} * g_t.
/// Chen's identity holds identically; each g_t is checked group-like.
inline RoughPath from_group_path(std::function<DualElement(const Rational&)> g, Structure structure,
                                 int level, int alphabet, double alpha, const Rational& t0,
                                 const Rational& t1, bool strict = false) {
  validate_level_alpha(level, alpha, strict);
  RoughPath out;
  out.structure = structure;
  out.level = level;
  out.alphabet = alphabet;
  out.alpha = alpha;
  out.t0 = t0;
  out.t1 = t1;
  out.eval = [g, structure](const Rational& s, const Rational& t) {
    DualElement gs = g(s), gt = g(t);
    if (!is_grouplike(gs) || !is_grouplike(gt))
      throw std::invalid_argument("group path value is not group-like");
    return star(inverse(gs, /*check=*/false), gt);
  };
  out.trace = [g, alphabet, structure, level](const Rational& t) {
    DualElement gt = g(t);
    std::vector<Rational> x(alphabet, Rational(0));
    for (int i = 1; i <= alphabet; ++i) {
      Key k = structure == Structure::tensor
                  ? Key(Word{i})
                  : Key(single_tree_forest(Tree(i), structure == Structure::mkw));
      x[i - 1] = gt.value.coeff(k);
    }
    return x;
  };
  return out;
}

/// Group path t -> exp_n(t * p) for a primitive p.
inline RoughPath from_primitive(const FormalSum& p, Structure structure, int level, int alphabet,
                                double alpha, const Rational& t0, const Rational& t1,
                                bool strict = false) {
  DualElement pe(p, structure, level);
  if (!is_primitive(pe)) throw std::invalid_argument("generator is not primitive");
  auto g = [pe, structure, level](const Rational& t) {
    return exp_n(DualElement(t * pe.value, structure, level));
  };
  return from_group_path(g, structure, level, alphabet, alpha, t0, t1, strict);
}

/// Max Chen defect coefficient over all grid triples s <= u <= t; exact.
inline Rational chen_check(const RoughPath& x, const std::vector<Rational>& grid) {
  Rational worst = 0;
  for (size_t a = 0; a < grid.size(); ++a)
    for (size_t b = a; b < grid.size(); ++b)
      for (size_t c = b; c < grid.size(); ++c) {
        DualElement su = x.evaluate(grid[a], grid[b]);
        DualElement ut = x.evaluate(grid[b], grid[c]);
        DualElement st = x.evaluate(grid[a], grid[c]);
        FormalSum defect = star(su, ut).value - st.value;
        for (const auto& [k, coeff] : defect.terms()) worst = std::max(worst, rational_abs(coeff));
      }
  return worst;
}

/// Infimum-constant estimate for the graded Hoelder bound:
/// max over grid pairs and grade-k keys of |<X_{s,t}, key>|^{1/k} / |t-s|^alpha.
inline double holder_norm(const RoughPath& x, double alpha, const std::vector<Rational>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("holder_norm needs a grid with >= 2 points");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0,1]");
  double worst = 0;
  for (size_t a = 0; a < grid.size(); ++a)
    for (size_t b = a + 1; b < grid.size(); ++b) {
      double dt = to_double(grid[b] - grid[a]);
      if (dt <= 0) continue;
      DualElement v = x.evaluate(grid[a], grid[b]);
      for (const auto& [k, c] : v.value.terms()) {
        if (k.grade() == 0) continue;
        double mag = std::pow(std::abs(to_double(c)), 1.0 / k.grade());
        worst = std::max(worst, mag / std::pow(dt, alpha));
      }
    }
  return worst;
}

struct LogNormComparison {
  double path_norm = 0;  // ||X||
  double log_norm = 0;   // ||L||, L = log X
  double ratio = 0;      // ||L|| / ||X|| when defined
};

/// Compares the Hoelder constants of X and of its logarithm on a grid.
inline LogNormComparison log_norm_compare(const RoughPath& x, double alpha,
                                          const std::vector<Rational>& grid) {
  LogNormComparison out;
  out.path_norm = holder_norm(x, alpha, grid);
  double worst = 0;
  for (size_t a = 0; a < grid.size(); ++a)
    for (size_t b = a + 1; b < grid.size(); ++b) {
      double dt = to_double(grid[b] - grid[a]);
      if (dt <= 0) continue;
      DualElement l = log_n(x.evaluate(grid[a], grid[b]));
      for (const auto& [k, c] : l.value.terms()) {
        if (k.grade() == 0) continue;
        double mag = std::pow(std::abs(to_double(c)), 1.0 / k.grade());
        worst = std::max(worst, mag / std::pow(dt, alpha));
      }
    }
  out.log_norm = worst;
  out.ratio = out.path_norm > 0 ? out.log_norm / out.path_norm : 0.0;
  return out;
}

}  // namespace logode
