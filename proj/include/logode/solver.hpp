#pragma once

#include "logode/elementary.hpp"
#include "logode/rough_path.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace logode {

using Point = std::vector<double>;

struct Box {
  std::vector<std::pair<double, double>> bounds;  // per coordinate

  bool contains(const Point& x) const {
    for (size_t i = 0; i < bounds.size(); ++i)
      if (x[i] < bounds[i].first || x[i] > bounds[i].second) return false;
    return true;
  }

  double boundary_distance(const Point& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < bounds.size(); ++i) {
      d = std::min(d, x[i] - bounds[i].first);
      d = std::min(d, bounds[i].second - x[i]);
    }
    return d;
  }

  double radius() const {
    double r = 0;
    for (const auto& [lo, hi] : bounds) r = std::max(r, (hi - lo) / 2);
    return r;
  }

  /// Lattice sup-norm estimate of a polynomial field over the box.
  double sup_norm(const PolyVectorField& v, int samples_per_axis = 9) const {
    std::vector<int> idx(bounds.size(), 0);
    double worst = 0;
    for (;;) {
      Point x(bounds.size());
      for (size_t i = 0; i < bounds.size(); ++i) {
        double lam = samples_per_axis == 1 ? 0.5 : double(idx[i]) / (samples_per_axis - 1);
        x[i] = bounds[i].first + lam * (bounds[i].second - bounds[i].first);
      }
      for (const auto& comp : v.components) worst = std::max(worst, std::abs(comp.eval<double>(x)));
      size_t i = 0;
      while (i < idx.size() && idx[i] == samples_per_axis - 1) idx[i++] = 0;
      if (i == idx.size()) break;
      ++idx[i];
    }
    return worst;
  }
};

struct SolverConfig {
  int substeps = 32;          // RK4 substeps per unit log-ODE time
  int max_depth = 14;         // dyadic refinement limit
  double tolerance = 1e-9;    // successive-level displacement target
  std::optional<Box> box;     // compact box K; enables the explosion guard
  bool validate_increments = true;  // check log X_{s,t} primitive
};

struct FlowDiagnostics {
  std::vector<double> cauchy_increments;  // per dyadic level
  double cauchy_ratio = 0;                // worst measurable successive ratio
  double holder_constant = 0;             // B(K) estimate over visited steps
  double lipschitz_estimate = 0;          // L(K,s,t) estimate (finite difference)
  double almost_flow_constant = 0;        // C(K) estimate from the first split defect
  int level_used = 0;
  bool converged = false;
};

class DomainExit : public std::runtime_error {
 public:
  explicit DomainExit(const std::string& what) : std::runtime_error(what) {}
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double rate) : std::runtime_error(what), rate(rate) {}
  double rate;
};

/// log_N X_{s,t}; validated primitive in exact arithmetic.
inline DualElement log_increment(const RoughPath& x, const Rational& s, const Rational& t,
                                 bool validate = true) {
  DualElement l = log_n(x.evaluate(s, t));
  if (validate && !is_primitive(l))
    throw std::invalid_argument("log increment is not primitive; driver is not group-like");
  return l;
}

namespace detail {
inline Point rk4_unit_time(const PolyVectorField& field, Point x, int substeps,
                           const std::optional<Box>& box) {
  const double h = 1.0 / substeps;
  const int d = field.dim();
  auto eval = [&](const Point& p) { return field.eval<double>(p); };
  for (int m = 0; m < substeps; ++m) {
    Point k1 = eval(x);
    Point x2(d), x3(d), x4(d);
    for (int i = 0; i < d; ++i) x2[i] = x[i] + 0.5 * h * k1[i];
    Point k2 = eval(x2);
    for (int i = 0; i < d; ++i) x3[i] = x[i] + 0.5 * h * k2[i];
    Point k3 = eval(x3);
    for (int i = 0; i < d; ++i) x4[i] = x[i] + h * k3[i];
    Point k4 = eval(x4);
    for (int i = 0; i < d; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (box && !box->contains(x)) throw DomainExit("trajectory left the chart box");
  }
  return x;
}
}  // namespace detail

/// One log-ODE step: integrate the field F(log X_{s,t}) over unit time from x.
inline Point almost_flow_step(const ElementaryDifferential& map, const RoughPath& x,
                              const Rational& s, const Rational& t, Point start,
                              const SolverConfig& cfg) {
  if (cfg.box && !cfg.box->contains(start)) throw DomainExit("start point outside the chart box");
  DualElement l = log_increment(x, s, t, cfg.validate_increments);
  PolyVectorField field = map.field_of(l.value);
  if (cfg.box) {
    double guard = std::min(1.0, cfg.box->boundary_distance(start));
    if (cfg.box->sup_norm(field) > guard)
      throw DomainExit("explosion guard: field norm exceeds the boundary margin");
  }
  return detail::rk4_unit_time(field, std::move(start), cfg.substeps, cfg.box);
}

/// Composite of almost-flow steps over the k-th dyadic partition of [s,t].
inline Point dyadic_composite(const ElementaryDifferential& map, const RoughPath& x,
                              const Rational& s, const Rational& t, Point start, int k,
                              const SolverConfig& cfg, double* holder_acc = nullptr,
                              double alpha = 1.0) {
  const long pieces = 1L << k;
  Point p = std::move(start);
  for (long i = 0; i < pieces; ++i) {
    Rational a = s + (t - s) * Rational(i, pieces);
    Rational b = s + (t - s) * Rational(i + 1, pieces);
    Point next = almost_flow_step(map, x, a, b, p, cfg);
    if (holder_acc) {
      double diff = 0;
      for (size_t j = 0; j < p.size(); ++j) diff = std::max(diff, std::abs(next[j] - p[j]));
      double dt = to_double(b - a);
      if (dt > 0) *holder_acc = std::max(*holder_acc, diff / std::pow(dt, alpha));
    }
    p = std::move(next);
  }
  return p;
}

struct FlowResult {
  std::function<Point(double, double, Point)> evaluate;  // sewn flow at the chosen depth
  FlowDiagnostics diagnostics;
  Point endpoint;
  std::string chart;
};

/// Sews the almost-flow to a flow on [s,t]: refines the dyadic level until
/// the endpoint is Cauchy within tolerance and reports the per-level
/// increments plus the measured geometric rate.
inline FlowResult sew(const ElementaryDifferential& map, const RoughPath& x, const Rational& s,
                      const Rational& t, Point start, const SolverConfig& cfg) {
  FlowResult out;
  FlowDiagnostics& diag = out.diagnostics;
  double holder = 0;
  Point prev = dyadic_composite(map, x, s, t, start, 0, cfg, &holder, x.alpha);
  int level = 0;
  for (int k = 1; k <= cfg.max_depth; ++k) {
    Point next = dyadic_composite(map, x, s, t, start, k, cfg, &holder, x.alpha);
    double diff = 0;
    for (size_t i = 0; i < prev.size(); ++i) diff = std::max(diff, std::abs(next[i] - prev[i]));
    diag.cauchy_increments.push_back(diff);
    prev = std::move(next);
    level = k;
    if (diff < cfg.tolerance) {
      diag.converged = true;
      break;
    }
  }
  diag.level_used = level;
  diag.holder_constant = holder;
  // the first increment is the midpoint-split defect |mu_{u,t} mu_{s,u} - mu_{s,t}|
  if (!diag.cauchy_increments.empty()) {
    double dt = to_double(t - s);
    double expo = (x.level + 1) * x.alpha;
    if (dt > 0) diag.almost_flow_constant = diag.cauchy_increments[0] / std::pow(dt, expo);
  }
  // worst successive ratio over increments above the noise floor
  double floor = std::max(cfg.tolerance * 1e-3, 1e-14);
  diag.cauchy_ratio = 0;
  for (size_t i = 0; i + 1 < diag.cauchy_increments.size(); ++i) {
    double a = diag.cauchy_increments[i], b = diag.cauchy_increments[i + 1];
    if (a > floor && b > floor) diag.cauchy_ratio = std::max(diag.cauchy_ratio, b / a);
  }
  // finite-difference Lipschitz estimate at the chosen depth
  {
    const double bump = 1e-6;
    double worst = 0;
    for (size_t i = 0; i < start.size(); ++i) {
      Point shifted = start;
      shifted[i] += bump;
      Point alt = dyadic_composite(map, x, s, t, shifted, level, cfg);
      double diff = 0;
      for (size_t j = 0; j < alt.size(); ++j) diff = std::max(diff, std::abs(alt[j] - prev[j]));
      worst = std::max(worst, diff / bump);
    }
    diag.lipschitz_estimate = worst;
  }
  if (!diag.converged && static_cast<int>(diag.cauchy_increments.size()) == cfg.max_depth) {
    double rate = diag.cauchy_ratio;
    throw NoConvergence("sewing did not meet tolerance within the depth limit (measured ratio " +
                            std::to_string(rate) + ")",
                        rate);
  }
  out.endpoint = prev;
  const int depth = level;
  out.evaluate = [map, x, cfg, depth](double a, double b, Point p) {
    return dyadic_composite(map, x, rational_from_double(a), rational_from_double(b), std::move(p),
                            depth, cfg);
  };
  return out;
}

/// max_{s in grid} |phi(eta_{s,s+h} x_s) - F(X_{s,s+h}) phi(x_s)| per scale h,
/// with x_s the sewn solution started at (t0, x0). Returns (h, residual) rows.
struct DavieTable {
  std::vector<std::pair<double, double>> rows;  // scale, max residual
  double slope = 0;                             // log2-log2 least-squares slope
};

inline DavieTable davie_residual(const ElementaryDifferential& map, const RoughPath& x,
                                 const Polynomial& phi, const Point& x0, double t0, double t1,
                                 const std::vector<double>& scales, const SolverConfig& cfg) {
  DavieTable out;
  for (double h : scales) {
    double worst = 0;
    const int steps = static_cast<int>(std::floor((t1 - t0) / h + 1e-12));
    Point p = x0;
    for (int i = 0; i < steps; ++i) {
      Rational a = rational_from_double(t0 + i * h);
      Rational b = rational_from_double(t0 + (i + 1) * h);
      FlowResult fr = sew(map, x, a, b, p, cfg);
      Point next = fr.endpoint;
      // F(X_{a,b}) phi evaluated at p
      DualElement xv = x.evaluate(a, b);
      Polynomial expansion = map.differential(xv.value).apply(phi);
      double predicted = expansion.eval<double>(p);
      double actual = phi.eval<double>(next);
      worst = std::max(worst, std::abs(actual - predicted));
      p = std::move(next);
    }
    out.rows.emplace_back(h, worst);
  }
  // least-squares slope of log(residual) against log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (auto& [h, r] : out.rows) {
    if (r <= 0) continue;
    double lx = std::log2(h), ly = std::log2(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  out.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return out;
}

/// One-step Taylor residual and midpoint composition residual at u = (s+t)/2:
///   |phi(mu_{s,t} x) - F(X_{s,t}) phi(x)|  and
///   |(F(X_{s,u}) o F(X_{u,t}) - F(X_{s,t})) phi(x)|.
inline std::pair<double, double> taylor_check(const ElementaryDifferential& map,
                                              const RoughPath& x, const Rational& s,
                                              const Rational& t, const Point& p,
                                              const Polynomial& phi, const SolverConfig& cfg) {
  Point stepped = almost_flow_step(map, x, s, t, p, cfg);
  Polynomial expansion = map.differential(x.evaluate(s, t).value).apply(phi);
  double taylor = std::abs(phi.eval<double>(stepped) - expansion.eval<double>(p));

  Rational u = (s + t) / 2;
  Polynomial right = map.differential(x.evaluate(u, t).value).apply(phi);
  Polynomial both = map.differential(x.evaluate(s, u).value).apply(right);
  double comp = std::abs(both.eval<double>(p) - expansion.eval<double>(p));
  return {taylor, comp};
}

/// Flow-property defect |eta_{u,t}(eta_{s,u}(x)) - eta_{s,t}(x)| of the sewn
/// flow at matching depths, for diagnostics and tests.
inline double flow_property_defect(const ElementaryDifferential& map, const RoughPath& x,
                                   const Rational& s, const Rational& u, const Rational& t,
                                   const Point& p, const SolverConfig& cfg) {
  FlowResult left = sew(map, x, s, u, p, cfg);
  FlowResult right = sew(map, x, u, t, left.endpoint, cfg);
  FlowResult direct = sew(map, x, s, t, p, cfg);
  double diff = 0;
  for (size_t i = 0; i < p.size(); ++i)
    diff = std::max(diff, std::abs(right.endpoint[i] - direct.endpoint[i]));
  return diff;
}

}  // namespace logode
