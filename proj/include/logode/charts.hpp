#pragma once

#include "logode/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace logode {

/// Componentwise rational map (numerator/denominator polynomials); the shape
/// of chart transition functions.
struct RationalMap {
  std::vector<Polynomial> num, den;

  int dim_out() const { return static_cast<int>(num.size()); }

  Point eval(const Point& x) const {
    Point out(num.size());
    for (size_t i = 0; i < num.size(); ++i) {
      double d = den[i].eval<double>(x);
      if (std::abs(d) < 1e-300) throw DomainExit("transition map denominator vanished");
      out[i] = num[i].eval<double>(x) / d;
    }
    return out;
  }
};

struct ChartTransition {
  std::string to;
  RationalMap map;
};

/// Coordinate chart: a box domain, per-chart driving fields and connection,
/// and transition maps into overlapping charts.
struct Chart {
  std::string name;
  Box box;
  std::vector<PolyVectorField> fields;
  std::optional<Connection> connection;
  std::vector<ChartTransition> transitions;
};

struct Atlas {
  std::vector<Chart> charts;

  const Chart* find_chart(const std::string& name) const {
    for (const auto& c : charts)
      if (c.name == name) return &c;
    return nullptr;
  }

  const Chart& chart(const std::string& name) const {
    if (const Chart* c = find_chart(name)) return *c;
    throw std::invalid_argument("unknown chart: " + name);
  }

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < charts.size(); ++i)
      if (charts[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown chart: " + name);
  }
};

struct ChartSolveRow {
  double t = 0;
  std::string chart;
  Point x;
  double davie_residual = 0;
  int level_used = 0;
};

struct ChartSolveReport {
  std::vector<ChartSolveRow> rows;
  double max_overlap_discrepancy = 0;  // both-chart solves compared after transition
  int switches = 0;
};

/// Transition validation: transition o inverse-transition is the identity on
/// overlap samples, within tolerance (the inverse is the named back edge).
inline double transition_roundtrip_defect(const Chart& from, const Chart& to,
                                          const std::vector<Point>& samples) {
  const ChartTransition* fwd = nullptr;
  for (const auto& t : from.transitions)
    if (t.to == to.name) fwd = &t;
  const ChartTransition* bwd = nullptr;
  for (const auto& t : to.transitions)
    if (t.to == from.name) bwd = &t;
  if (!fwd || !bwd) throw std::invalid_argument("charts are not connected by transitions");
  double worst = 0;
  for (const auto& x : samples) {
    Point back = bwd->map.eval(fwd->map.eval(x));
    for (size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
  }
  return worst;
}

/// Advances the solution chartwise over the time grid. At every sub-step
/// start the chart is switched when the state sits within 10% of the box
/// radius from the boundary; a step that breaches the explosion guard is
/// bisected (this realizes the per-chart step horizon adaptively). On
/// overlaps the step is also solved in the neighbour chart and the
/// discrepancy after transition is recorded.
class ChartSolver {
 public:
  ChartSolver(const Atlas& atlas, Structure structure, const RoughPath& x,
              const SolverConfig& base_cfg, int max_switches)
      : atlas_(atlas), structure_(structure), x_(x), base_cfg_(base_cfg),
        max_switches_(max_switches) {}

  ChartSolveReport run(const std::string& start_chart, Point x0,
                       const std::vector<double>& time_grid) {
    ChartSolveReport report;
    int chart_idx = atlas_.index_of(start_chart);
    Point p = std::move(x0);
    report.rows.push_back({time_grid.front(), atlas_.charts[chart_idx].name, p, 0.0, 0});
    for (size_t step = 0; step + 1 < time_grid.size(); ++step) {
      ChartSolveRow row;
      row.t = time_grid[step + 1];
      advance(chart_idx, p, rational_from_double(time_grid[step]),
              rational_from_double(time_grid[step + 1]), 0, row, report);
      row.chart = atlas_.charts[chart_idx].name;
      row.x = p;
      report.rows.push_back(row);
    }
    return report;
  }

 private:
  ElementaryDifferential map_for(const Chart& c) const {
    return ElementaryDifferential(
        structure_, c.fields,
        structure_ == Structure::mkw
            ? std::optional<Connection>(c.connection.value_or(Connection(c.fields[0].dim())))
            : c.connection);
  }

  void maybe_switch(int& chart_idx, Point& p, ChartSolveReport& report) const {
    const Chart& chart = atlas_.charts[chart_idx];
    if (chart.box.bounds.empty()) return;  // unbounded chart
    if (chart.box.boundary_distance(p) >= 0.1 * chart.box.radius()) return;
    for (const auto& tr : chart.transitions) {
      const Chart* target = atlas_.find_chart(tr.to);
      if (!target) continue;
      Point q = tr.map.eval(p);
      if (target->box.contains(q) &&
          target->box.boundary_distance(q) > chart.box.boundary_distance(p)) {
        p = std::move(q);
        chart_idx = atlas_.index_of(tr.to);
        ++report.switches;
        if (report.switches > max_switches_)
          throw std::runtime_error("chart-switch thrashing: more than " +
                                   std::to_string(max_switches_) + " switches");
        return;
      }
    }
    if (!chart.box.contains(p)) throw DomainExit("state left the atlas");
  }

  void advance(int& chart_idx, Point& p, const Rational& a, const Rational& b, int depth,
               ChartSolveRow& row, ChartSolveReport& report) {
    maybe_switch(chart_idx, p, report);
    const Chart& chart = atlas_.charts[chart_idx];
    SolverConfig cfg = base_cfg_;
    if (!chart.box.bounds.empty()) cfg.box = chart.box;
    ElementaryDifferential map = map_for(chart);
    try {
      FlowResult fr = sew(map, x_, a, b, p, cfg);
      const Polynomial phi0 = Polynomial::variable(static_cast<int>(p.size()), 0);
      Polynomial expansion = map.differential(x_.evaluate(a, b).value).apply(phi0);
      row.davie_residual = std::max(
          row.davie_residual,
          std::abs(phi0.eval<double>(fr.endpoint) - expansion.eval<double>(p)));
      row.level_used = std::max(row.level_used, fr.diagnostics.level_used);
      compare_on_overlaps(chart, p, fr.endpoint, a, b, report);
      p = fr.endpoint;
    } catch (const DomainExit&) {
      if (depth >= 12) throw;
      Rational mid = (a + b) / 2;  // step exceeds the chart horizon: bisect
      advance(chart_idx, p, a, mid, depth + 1, row, report);
      advance(chart_idx, p, mid, b, depth + 1, row, report);
    }
  }

  void compare_on_overlaps(const Chart& chart, const Point& start, const Point& end,
                           const Rational& a, const Rational& b, ChartSolveReport& report) const {
    for (const auto& tr : chart.transitions) {
      const Chart* other = atlas_.find_chart(tr.to);
      if (!other) continue;
      Point q = tr.map.eval(start);
      if (!other->box.contains(q)) continue;
      SolverConfig ocfg = base_cfg_;
      if (!other->box.bounds.empty()) ocfg.box = other->box;
      try {
        FlowResult alt = sew(map_for(*other), x_, a, b, q, ocfg);
        Point mapped = tr.map.eval(end);
        for (size_t i = 0; i < mapped.size(); ++i)
          report.max_overlap_discrepancy =
              std::max(report.max_overlap_discrepancy, std::abs(alt.endpoint[i] - mapped[i]));
      } catch (const DomainExit&) {
        // neighbour chart cannot hold this step; nothing to compare
      }
    }
  }

  const Atlas& atlas_;
  Structure structure_;
  const RoughPath& x_;
  SolverConfig base_cfg_;
  int max_switches_;
};

inline ChartSolveReport solve_on_charts(const Atlas& atlas, Structure structure,
                                        const RoughPath& x, const std::string& start_chart,
                                        Point x0, const std::vector<double>& time_grid,
                                        const SolverConfig& base_cfg, int max_switches = 64) {
  ChartSolver solver(atlas, structure, x, base_cfg, max_switches);
  return solver.run(start_chart, std::move(x0), time_grid);
}

}  // namespace logode
