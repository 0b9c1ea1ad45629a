// Batch front door: algebra ops, signature lifts, the log-ODE solver, Davie
// diagnostics, push-forwards and the identity-suite runner.

#include "logode/acceptance.hpp"
#include "logode/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace logode;

struct GlobalOpts {
  bool float_mode = false;
  uint64_t seed = 20240817;
};

std::string coeff_str(const Rational& c, bool float_mode) {
  if (!float_mode) return to_string(c);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", to_double(c));
  return buf;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config file: " + path);
  Json j;
  in >> j;
  return j;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

BasisFamily family_for_op(const std::string& op, const std::string& structure) {
  static const std::set<std::string> word_ops = {"shuffle",        "concat",
                                                 "deconcat",       "deshuffle",
                                                 "ordered_shuffle", "ordered_deshuffles",
                                                 "antipode_word"};
  static const std::set<std::string> unordered_ops = {"gl_star", "graft", "ck_coproduct",
                                                      "gl_dual_coproduct", "sg", "canonicalize"};
  static const std::set<std::string> ordered_ops = {"mkw_star", "left_graft", "mkw_coproduct"};
  if (word_ops.count(op)) return BasisFamily::words;
  if (unordered_ops.count(op)) return BasisFamily::unordered_forests;
  if (ordered_ops.count(op)) return BasisFamily::ordered_forests;
  if (op == "antipode") {
    if (structure == "shuffle" || structure == "tensor") return BasisFamily::words;
    if (structure == "ck" || structure == "gl") return BasisFamily::unordered_forests;
    if (structure == "mkw") return BasisFamily::ordered_forests;
    throw SchemaError("antipode needs --structure shuffle|tensor|ck|gl|mkw");
  }
  throw SchemaError("unknown algebra op: " + op);
}

int run_algebra(const std::string& op, const std::string& lhs, const std::string& rhs,
                const std::string& structure, int level, const GlobalOpts&) {
  BasisFamily family = family_for_op(op, structure);
  std::optional<int> lvl = level >= 0 ? std::optional<int>(level) : std::nullopt;
  auto parse = [&](const std::string& text) { return parse_formal_sum(text, family, lvl); };
  auto need_rhs = [&]() {
    if (rhs.empty()) throw SchemaError("op '" + op + "' needs --rhs");
  };

  FormalSum result;
  if (op == "shuffle" || op == "concat" || op == "ordered_shuffle") {
    need_rhs();
    FormalSum a = parse(lhs), b = parse(rhs);
    auto word_op = [&](const Key& x, const Key& y) {
      if (op == "shuffle") return shuffle(x.word(), y.word());
      if (op == "concat") return FormalSum::term(Key(concat(x.word(), y.word())));
      return ordered_shuffle(x.word(), y.word());
    };
    result = bilinear(a, b, lvl, word_op);
  } else if (op == "gl_star" || op == "mkw_star") {
    need_rhs();
    result = gl_star(parse(lhs), parse(rhs), lvl);
  } else if (op == "graft" || op == "left_graft") {
    need_rhs();
    result = bilinear(parse(lhs), parse(rhs), lvl,
                      [](const Key& x, const Key& y) { return graft(x.forest(), y.forest()); });
  } else if (op == "deconcat" || op == "deshuffle" || op == "ck_coproduct" ||
             op == "gl_dual_coproduct" || op == "mkw_coproduct") {
    result = linear(parse(lhs), lvl, [&](const Key& k) {
      if (op == "deconcat") return deconcat(k.word());
      if (op == "deshuffle") return deshuffle(k.word());
      if (op == "ck_coproduct") return ck_coproduct(k.forest());
      if (op == "gl_dual_coproduct") return gl_dual_coproduct(k.forest());
      return mkw_coproduct(k.forest());
    });
  } else if (op == "antipode" || op == "antipode_word") {
    HopfStructure hs = op == "antipode_word" || structure == "tensor"
                           ? HopfStructure::tensor_words
                       : structure == "shuffle" ? HopfStructure::shuffle_words
                       : structure == "ck"      ? HopfStructure::connes_kreimer
                       : structure == "gl"      ? HopfStructure::grossman_larson
                                                : HopfStructure::mkw_dual;
    result = antipode(hs, parse(lhs));
  } else if (op == "ordered_deshuffles") {
    need_rhs();
    Word w = parse_word(lhs);
    int parts = std::stoi(rhs);
    for (const auto& split : ordered_deshuffles(w, parts)) {
      std::string line;
      for (size_t i = 0; i < split.parts.size(); ++i) {
        if (i) line += ",";
        line += word_to_string(split.parts[i]);
      }
      std::cout << "(" << line << ")\n";
    }
    return 0;
  } else if (op == "sg") {
    std::cout << to_string(symmetry_factor(parse_forest(lhs, false))) << "\n";
    return 0;
  } else if (op == "canonicalize") {
    std::cout << forest_encode(canonicalize(parse_forest(lhs, false))) << "\n";
    return 0;
  } else {
    throw SchemaError("unknown algebra op: " + op);
  }
  std::cout << to_string(result) << "\n";
  return 0;
}

int run_lift(const std::string& config_path, const std::string& out_path,
             const GlobalOpts& opts) {
  Json cfg = load_config(config_path);
  jsonio::require_keys(cfg, {"level", "driver", "grid"}, {"alpha"}, "lift config");
  int level = cfg.at("level").get<int>();
  double alpha = cfg.contains("alpha") ? cfg.at("alpha").get<double>() : 1.0;
  RoughPath x = jsonio::driver_value(cfg.at("driver"), level, alpha, "driver");
  auto grid = jsonio::grid_value(cfg.at("grid"), "grid");

  std::ofstream out = open_out(out_path);
  out << "s,t,key,coefficient\n";
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    DualElement v = x.evaluate(grid[i], grid[i + 1]);
    for (const auto& [k, c] : v.value.terms())
      out << grid[i] << "," << grid[i + 1] << "," << key_to_display(k) << ","
          << coeff_str(c, opts.float_mode) << "\n";
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_solve(const std::string& config_path, const std::string& out_path, const GlobalOpts&) {
  Json cfg = load_config(config_path);
  jsonio::require_keys(cfg,
                       {"structure", "level", "driver", "x0", "grid"},
                       {"alpha", "fields", "connection", "solver", "atlas", "box", "seed"},
                       "solve config");
  Structure structure = parse_structure(cfg.at("structure").get<std::string>());
  int level = cfg.at("level").get<int>();
  double alpha = cfg.contains("alpha") ? cfg.at("alpha").get<double>() : 1.0;
  RoughPath x = jsonio::driver_value(cfg.at("driver"), level, alpha, "driver");

  Point x0;
  for (const auto& v : cfg.at("x0")) x0.push_back(v.get<double>());
  const int dim = static_cast<int>(x0.size());
  auto grid = jsonio::grid_value(cfg.at("grid"), "grid");
  SolverConfig solver =
      jsonio::solver_value(cfg.contains("solver") ? cfg.at("solver") : Json(), "solver");

  ChartSolveReport report;
  if (cfg.contains("atlas")) {
    Atlas atlas = jsonio::atlas_value(cfg.at("atlas"), dim, "atlas");
    std::string start = cfg.at("atlas").contains("start")
                            ? cfg.at("atlas").at("start").get<std::string>()
                            : atlas.charts.front().name;
    report = solve_on_charts(atlas, structure, x, start, x0, grid, solver);
  } else {
    if (!cfg.contains("fields")) throw SchemaError("solve config: fields or atlas required");
    Atlas atlas;
    Chart chart;
    chart.name = "chart";
    if (cfg.contains("box")) chart.box = jsonio::box_value(cfg.at("box"), "box");
    chart.fields = jsonio::fields_value(cfg.at("fields"), dim, "fields");
    if (cfg.contains("connection"))
      chart.connection = jsonio::connection_value(cfg.at("connection"), dim, "connection");
    atlas.charts.push_back(std::move(chart));
    report = solve_on_charts(atlas, structure, x, "chart", x0, grid, solver);
  }

  std::ofstream out = open_out(out_path);
  out << "t,chart";
  for (int i = 1; i <= dim; ++i) out << ",x" << i;
  out << ",davie_residual,level_used\n";
  char buf[64];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.t);
    out << buf << "," << row.chart;
    for (double v : row.x) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", row.davie_residual);
    out << "," << buf << "," << row.level_used << "\n";
  }
  std::cout << "wrote " << out_path;
  if (report.switches > 0)
    std::cout << " (chart switches: " << report.switches
              << ", max overlap discrepancy: " << report.max_overlap_discrepancy << ")";
  std::cout << "\n";
  return 0;
}

int run_davie(const std::string& config_path, const std::string& out_path, const GlobalOpts&) {
  Json cfg = load_config(config_path);
  jsonio::require_keys(cfg, {"structure", "level", "alpha", "driver", "fields", "x0", "phi"},
                       {"connection", "solver", "t0", "t1", "scales"}, "davie config");
  Structure structure = parse_structure(cfg.at("structure").get<std::string>());
  int level = cfg.at("level").get<int>();
  double alpha = cfg.at("alpha").get<double>();
  RoughPath x = jsonio::driver_value(cfg.at("driver"), level, alpha, "driver");

  Point x0;
  for (const auto& v : cfg.at("x0")) x0.push_back(v.get<double>());
  const int dim = static_cast<int>(x0.size());
  auto fields = jsonio::fields_value(cfg.at("fields"), dim, "fields");
  std::optional<Connection> conn;
  if (cfg.contains("connection"))
    conn = jsonio::connection_value(cfg.at("connection"), dim, "connection");
  if (structure == Structure::mkw && !conn) conn = Connection(dim);
  ElementaryDifferential map(structure, fields, conn);

  Polynomial phi = jsonio::polynomial_value(cfg.at("phi"), dim, "phi");
  double t0 = cfg.contains("t0") ? cfg.at("t0").get<double>() : 0.0;
  double t1 = cfg.contains("t1") ? cfg.at("t1").get<double>() : 1.0;
  std::vector<double> scales;
  if (cfg.contains("scales"))
    for (const auto& h : cfg.at("scales")) scales.push_back(h.get<double>());
  else
    for (int k = 3; k <= 8; ++k) scales.push_back(std::pow(2.0, -k));
  SolverConfig solver =
      jsonio::solver_value(cfg.contains("solver") ? cfg.at("solver") : Json(), "solver");

  DavieTable table = davie_residual(map, x, phi, x0, t0, t1, scales, solver);
  std::ofstream out = open_out(out_path);
  out << "scale,max_residual\n";
  char buf[64];
  for (const auto& [h, r] : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", h);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", r);
    out << "," << buf << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%.6f", table.slope);
  out << "# slope," << buf << "\n";
  std::cout << "wrote " << out_path << " (fitted slope " << buf << ")\n";
  return 0;
}

int run_pushforward(const std::string& config_path, const std::string& out_path,
                    const GlobalOpts& opts) {
  Json cfg = load_config(config_path);
  jsonio::require_keys(cfg, {"level", "driver", "map", "grid"}, {"alpha", "source_dim"},
                       "pushforward config");
  int level = cfg.at("level").get<int>();
  double alpha = cfg.contains("alpha") ? cfg.at("alpha").get<double>() : 1.0;
  RoughPath x = jsonio::driver_value(cfg.at("driver"), level, alpha, "driver");
  int source_dim = cfg.contains("source_dim") ? cfg.at("source_dim").get<int>() : x.alphabet;
  std::vector<Polynomial> phi;
  for (const auto& comp : cfg.at("map"))
    phi.push_back(jsonio::polynomial_value(comp, source_dim, "map"));

  std::vector<Rational> grid;
  for (double t : jsonio::grid_value(cfg.at("grid"), "grid"))
    grid.push_back(rational_from_double(t));
  RoughPath y = pushforward(x, phi, level, grid);

  std::ofstream out = open_out(out_path);
  out << "s,t,word,coefficient\n";
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    DualElement v = y.evaluate(grid[i], grid[i + 1]);
    for (const auto& [k, c] : v.value.terms())
      out << to_double(grid[i]) << "," << to_double(grid[i + 1]) << ","
          << key_to_display(k) << "," << coeff_str(c, opts.float_mode) << "\n";
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_verify(const std::string& suite, const GlobalOpts& opts) {
  std::vector<CheckResult> results;
  auto matches = [&](const std::string& name) { return suite.empty() || suite == name; };
  if (matches("hopf-axioms"))
    for (auto& r : hopf_axiom_suite_all(4, 2)) results.push_back(std::move(r));
  if (matches("worked-examples"))
    for (auto& r : worked_examples_suite()) results.push_back(std::move(r));
  if (matches("exp-log"))
    for (auto& r : exp_log_suite(4, 20, opts.seed)) results.push_back(std::move(r));
  if (matches("chen"))
    for (auto& r : chen_suite(opts.seed + 1)) results.push_back(std::move(r));
  if (matches("pseudo-bialgebra"))
    for (auto& r : pseudo_bialgebra_suite(opts.seed + 2)) results.push_back(std::move(r));
  if (matches("pre-lie"))
    for (auto& r : prelie_suite(opts.seed + 3)) results.push_back(std::move(r));
  if (matches("davie-level2"))
    for (auto& r : davie_level2_suite(opts.seed + 4)) results.push_back(std::move(r));
  if (matches("solver"))
    for (auto& r : solver_closed_forms_suite()) results.push_back(std::move(r));
  if (matches("davie-rate"))
    for (auto& r : davie_rate_suite()) results.push_back(std::move(r));
  if (matches("charts"))
    for (auto& r : charts_suite()) results.push_back(std::move(r));
  if (matches("pushforward"))
    for (auto& r : pushforward_suite(opts.seed + 5)) results.push_back(std::move(r));
  if (results.empty()) throw SchemaError("unknown suite: " + suite);

  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " -- " << r.detail;
    std::cout << "\n";
    if (!r.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed" : "failures: " + std::to_string(failures))
            << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logode: combinatorial Hopf algebras and the log-ODE solver for rough "
               "differential equations"};
  app.require_subcommand(1);

  GlobalOpts opts;
  auto* exact_flag = app.add_flag("--exact", "print exact rational coefficients (default)");
  auto* float_flag =
      app.add_flag("--float", opts.float_mode, "print coefficients as doubles");
  float_flag->excludes(exact_flag);
  app.add_option("--seed", opts.seed, "seed for randomized sweeps");

  auto* algebra = app.add_subcommand("algebra", "evaluate a Hopf-algebra operation");
  std::string op, lhs, rhs, structure = "tensor";
  int level = -1;
  algebra->add_option("--op", op, "operation name")->required();
  algebra->add_option("--lhs", lhs, "left operand literal")->required();
  algebra->add_option("--rhs", rhs, "right operand literal (or part count)");
  algebra->add_option("--structure", structure, "shuffle|tensor|ck|gl|mkw (for antipode)");
  algebra->add_option("--level", level, "optional truncation level");

  std::string config_path, out_path = "out.csv", suite;
  auto* lift = app.add_subcommand("lift", "signature-lift a driver and emit coefficients");
  lift->add_option("--config", config_path, "JSON config")->required();
  lift->add_option("--out", out_path, "output CSV path");

  auto* solve = app.add_subcommand("solve", "sew the log-ODE flow along a time grid");
  solve->add_option("--config", config_path, "JSON config")->required();
  solve->add_option("--out", out_path, "output CSV path");

  auto* davie = app.add_subcommand("davie", "per-scale local-expansion residuals");
  davie->add_option("--config", config_path, "JSON config")->required();
  davie->add_option("--out", out_path, "output CSV path");

  auto* push = app.add_subcommand("pushforward", "push a geometric rough path through a map");
  push->add_option("--config", config_path, "JSON config")->required();
  push->add_option("--out", out_path, "output CSV path");

  auto* verify = app.add_subcommand("verify", "run the exact identity suites");
  verify->add_option("--suite", suite,
                     "hopf-axioms|worked-examples|exp-log|chen|pseudo-bialgebra|pre-lie|"
                     "davie-level2|solver|davie-rate|charts|pushforward (default: all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*algebra) return run_algebra(op, lhs, rhs, structure, level, opts);
    if (*lift) return run_lift(config_path, out_path, opts);
    if (*solve) return run_solve(config_path, out_path, opts);
    if (*davie) return run_davie(config_path, out_path, opts);
    if (*push) return run_pushforward(config_path, out_path, opts);
    if (*verify) return run_verify(suite, opts);
  } catch (const SchemaError& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "schema"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "computation"}}.dump() << "\n";
    return 1;
  }
  return 0;
}
