#pragma once

#include "logode/charts.hpp"
#include "logode/pushforward.hpp"
#include "logode/rough_path.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace logode {

using Json = nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

namespace jsonio {

inline void require_keys(const Json& obj, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, val] : obj.items()) {
    if (!required.count(key) && !optional.count(key))
      throw SchemaError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required)
    if (!obj.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
}

/// Rationals come in as integers or "p/q" strings; plain doubles are taken
/// exactly (every double is a dyadic rational).
inline Rational rational_value(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(static_cast<long long>(v.get<int64_t>()));
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw SchemaError(where + ": expected a rational (integer, double or \"p/q\")");
}

/// Polynomial: [ {"exp": [e_1..e_d], "num": p, "den": q}, ... ]; den defaults
/// to 1 and "coeff" may replace num/den with a rational value.
inline Polynomial polynomial_value(const Json& v, int dim, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + ": expected an array of monomials");
  Polynomial p(dim);
  for (const auto& term : v) {
    require_keys(term, {"exp"}, {"num", "den", "coeff"}, where);
    const Json& exp = term.at("exp");
    if (!exp.is_array() || static_cast<int>(exp.size()) != dim)
      throw SchemaError(where + ": exponent vector must have length " + std::to_string(dim));
    MultiIndex e;
    for (const auto& x : exp) e.push_back(x.get<int>());
    Rational c;
    if (term.contains("coeff")) {
      c = rational_value(term.at("coeff"), where);
    } else {
      Rational num = term.contains("num") ? rational_value(term.at("num"), where) : Rational(1);
      Rational den = term.contains("den") ? rational_value(term.at("den"), where) : Rational(1);
      if (den == 0) throw SchemaError(where + ": zero denominator");
      c = num / den;
    }
    p.add_term(std::move(e), c);
  }
  return p;
}

inline Json polynomial_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json term;
    term["exp"] = e;
    term["num"] = numerator(c).str();
    term["den"] = denominator(c).str();
    out.push_back(term);
  }
  return out;
}

inline PolyVectorField field_value(const Json& v, int dim, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw SchemaError(where + ": a field needs " + std::to_string(dim) + " components");
  std::vector<Polynomial> comps;
  for (const auto& comp : v) comps.push_back(polynomial_value(comp, dim, where));
  return PolyVectorField(std::move(comps));
}

inline std::vector<PolyVectorField> fields_value(const Json& v, int dim,
                                                 const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a nonempty field array");
  std::vector<PolyVectorField> out;
  for (const auto& f : v) out.push_back(field_value(f, dim, where));
  return out;
}

inline Connection connection_value(const Json& v, int dim, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw SchemaError(where + ": christoffel symbols need " + std::to_string(dim) + " sheets");
  Connection c(dim);
  for (int k = 0; k < dim; ++k) {
    const Json& sheet = v[k];
    if (!sheet.is_array() || static_cast<int>(sheet.size()) != dim)
      throw SchemaError(where + ": sheet " + std::to_string(k) + " malformed");
    for (int i = 0; i < dim; ++i) {
      const Json& row = sheet[i];
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw SchemaError(where + ": row " + std::to_string(i) + " malformed");
      for (int j = 0; j < dim; ++j)
        c.set_gamma(k, i, j, polynomial_value(row[j], dim, where));
    }
  }
  return c;
}

/// Driver descriptors:
///  {"type":"piecewise_linear","times":[...],"points":[[...],...]}
///  {"type":"group_path","structure":"tensor","alphabet":n,
///   "primitive":"<formal sum literal>","scale":"t"}
inline RoughPath driver_value(const Json& v, int level, double alpha, const std::string& where) {
  require_keys(v, {"type"}, {"times", "points", "structure", "alphabet", "primitive", "scale",
                             "strict"},
               where);
  std::string type = v.at("type").get<std::string>();
  bool strict = v.contains("strict") && v.at("strict").get<bool>();
  if (type == "piecewise_linear") {
    require_keys(v, {"type", "times", "points"}, {"strict"}, where);
    PiecewiseLinearPath p;
    for (const auto& t : v.at("times")) p.times.push_back(rational_value(t, where));
    for (const auto& pt : v.at("points")) {
      std::vector<Rational> row;
      for (const auto& x : pt) row.push_back(rational_value(x, where));
      p.points.push_back(std::move(row));
    }
    RoughPath x = signature_lift(p, level);
    x.alpha = alpha > 0 ? alpha : 1.0;
    return x;
  }
  if (type == "group_path") {
    require_keys(v, {"type", "primitive"}, {"structure", "alphabet", "scale", "strict"}, where);
    Structure structure = v.contains("structure")
                              ? parse_structure(v.at("structure").get<std::string>())
                              : Structure::tensor;
    if (v.contains("scale") && v.at("scale").get<std::string>() != "t")
      throw SchemaError(where + ": only the linear scale \"t\" is supported");
    int alphabet = v.contains("alphabet") ? v.at("alphabet").get<int>() : 2;
    FormalSum p = parse_formal_sum(v.at("primitive").get<std::string>(),
                                   family_of(structure), level);
    return from_primitive(p, structure, level, alphabet, alpha, 0, 1, strict);
  }
  throw SchemaError(where + ": unknown driver type '" + type + "'");
}

inline Box box_value(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": box needs per-coordinate bounds");
  Box box;
  for (const auto& b : v) {
    if (!b.is_array() || b.size() != 2) throw SchemaError(where + ": bounds come as [lo, hi]");
    box.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
  }
  return box;
}

inline SolverConfig solver_value(const Json& v, const std::string& where) {
  SolverConfig cfg;
  if (v.is_null()) return cfg;
  require_keys(v, {}, {"substeps", "max_depth", "tolerance", "validate_increments"}, where);
  if (v.contains("substeps")) cfg.substeps = v.at("substeps").get<int>();
  if (v.contains("max_depth")) cfg.max_depth = v.at("max_depth").get<int>();
  if (v.contains("tolerance")) cfg.tolerance = v.at("tolerance").get<double>();
  if (v.contains("validate_increments"))
    cfg.validate_increments = v.at("validate_increments").get<bool>();
  if (cfg.substeps < 1 || cfg.max_depth < 1 || !(cfg.tolerance > 0))
    throw SchemaError(where + ": substeps >= 1, max_depth >= 1, tolerance > 0 required");
  return cfg;
}

inline Atlas atlas_value(const Json& v, int dim, const std::string& where) {
  require_keys(v, {"charts"}, {"start"}, where);
  Atlas atlas;
  for (const auto& cj : v.at("charts")) {
    require_keys(cj, {"name", "box", "fields"}, {"connection", "transitions"}, where + ".charts");
    Chart chart;
    chart.name = cj.at("name").get<std::string>();
    chart.box = box_value(cj.at("box"), where + ".box");
    chart.fields = fields_value(cj.at("fields"), dim, where + ".fields");
    if (cj.contains("connection"))
      chart.connection = connection_value(cj.at("connection"), dim, where + ".connection");
    if (cj.contains("transitions"))
      for (const auto& tj : cj.at("transitions")) {
        require_keys(tj, {"to", "num", "den"}, {}, where + ".transitions");
        ChartTransition tr;
        tr.to = tj.at("to").get<std::string>();
        for (const auto& p : tj.at("num")) tr.map.num.push_back(polynomial_value(p, dim, where));
        for (const auto& p : tj.at("den")) tr.map.den.push_back(polynomial_value(p, dim, where));
        if (tr.map.num.size() != tr.map.den.size())
          throw SchemaError(where + ": transition num/den arity mismatch");
        chart.transitions.push_back(std::move(tr));
      }
    atlas.charts.push_back(std::move(chart));
  }
  return atlas;
}

inline std::vector<double> grid_value(const Json& v, const std::string& where) {
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& t : v) out.push_back(t.get<double>());
    return out;
  }
  require_keys(v, {"t0", "t1", "steps"}, {}, where);
  double t0 = v.at("t0").get<double>(), t1 = v.at("t1").get<double>();
  int steps = v.at("steps").get<int>();
  if (steps < 1 || !(t1 > t0)) throw SchemaError(where + ": need steps >= 1 and t1 > t0");
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(t0 + (t1 - t0) * i / steps);
  return out;
}

}  // namespace jsonio

}  // namespace logode
