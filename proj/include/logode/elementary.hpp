#pragma once

#include "logode/connection.hpp"
#include "logode/diff_op.hpp"
#include "logode/forest_hopf.hpp"
#include "logode/grouplike.hpp"
#include "logode/hopf.hpp"

#include <map>
#include <optional>
#include <vector>

namespace logode {

/// Elementary-differential map F from one of the three dual Hopf algebras
/// into differential operators, driven by vector fields V_1..V_n and (for
/// trees) a connection:
///   F(empty) = Id,  F(dot_i) = V_i,
///   F([t_1..t_k]_i)     = nabla^k V_i (F t_1, ..., F t_k),
///   F(t_1...t_k) psi    = nabla^k psi (F t_1, ..., F t_k),
///   F(word w)           = V_{w_1} o ... o V_{w_k}.
/// The tensor structure takes no connection; the unordered (GL) structure is
/// only defined for the zero connection, where the derivative slots commute.
class ElementaryDifferential {
 public:
  ElementaryDifferential(Structure structure, std::vector<PolyVectorField> fields,
                         std::optional<Connection> conn = std::nullopt)
      : structure_(structure), fields_(std::move(fields)) {
    if (fields_.empty()) throw std::invalid_argument("need at least one driving field");
    dim_ = fields_[0].dim();
    for (const auto& f : fields_)
      if (f.dim() != dim_) throw std::invalid_argument("driving field dimension mismatch");
    switch (structure_) {
      case Structure::tensor:
        if (conn) throw std::invalid_argument("tensor differentials take no connection");
        conn_ = Connection(dim_);
        break;
      case Structure::gl:
        if (conn && !conn->is_zero())
          throw std::invalid_argument(
              "unordered-forest differentials need the flat torsion-free mode (zero connection)");
        conn_ = Connection(dim_);
        break;
      case Structure::mkw:
        if (!conn) throw std::invalid_argument("ordered-forest differentials need a connection");
        if (conn->dim() != dim_) throw std::invalid_argument("connection dimension mismatch");
        conn_ = std::move(*conn);
        break;
    }
  }

  Structure structure() const { return structure_; }
  int dim() const { return dim_; }
  int alphabet() const { return static_cast<int>(fields_.size()); }
  const Connection& connection() const { return conn_; }
  const std::vector<PolyVectorField>& fields() const { return fields_; }

  const PolyVectorField& driving_field(int letter) const {
    if (letter < 1 || letter > alphabet())
      throw std::invalid_argument("decoration out of range: " + std::to_string(letter));
    return fields_[letter - 1];
  }

  /// F on a tree, always a vector field.
  PolyVectorField field_of_tree(const Tree& t) const {
    std::vector<PolyVectorField> args;
    args.reserve(t.children.size());
    for (const auto& c : t.children) args.push_back(field_of_tree(c));
    return conn_.cov_deriv_field_n(driving_field(t.decoration), args);
  }

  /// F on a basis key.
  DiffOperator differential(const Key& k) const {
    if (structure_ == Structure::tensor) {
      const Word& w = k.word();
      DiffOperator op = DiffOperator::identity(dim_);
      for (int letter : w.letters) op = compose(op, DiffOperator::from_field(driving_field(letter)));
      return op;
    }
    const Forest& f = k.forest();
    std::vector<PolyVectorField> args;
    args.reserve(f.trees.size());
    for (const auto& t : f.trees) args.push_back(field_of_tree(t));
    return conn_.cov_scalar_operator(args);
  }

  /// Linear extension to formal sums.
  DiffOperator differential(const FormalSum& x) const {
    DiffOperator out(dim_);
    for (const auto& [k, c] : x.terms()) out += c * differential(k);
    return out;
  }

  /// F of a primitive element, as a vector field (throws if any term fails
  /// to be first-order, which flags a non-primitive input).
  PolyVectorField field_of(const FormalSum& primitive) const {
    return differential(primitive).as_field();
  }

 private:
  Structure structure_;
  std::vector<PolyVectorField> fields_;
  Connection conn_;
  int dim_ = 0;
};

/// Both defects of the pseudo-bialgebra property for elements x, y and test
/// functions phi, psi:
///   defect1 = F(x*y) phi - F(x)(F(y) phi)
///   defect2 = F(delta x)(phi (x) psi) - F(x)(phi psi).
/// Exact zero polynomials certify the map on those inputs.
inline std::pair<Polynomial, Polynomial> check_pseudo_bialgebra(const ElementaryDifferential& map,
                                                                const FormalSum& x,
                                                                const FormalSum& y,
                                                                const Polynomial& phi,
                                                                const Polynomial& psi) {
  HopfStructure dual = dual_hopf(map.structure());
  FormalSum xy = hopf_product(dual, x, y);
  Polynomial defect1 =
      map.differential(xy).apply(phi) - map.differential(x).apply(map.differential(y).apply(phi));

  Polynomial defect2(map.dim());
  FormalSum cop = hopf_coproduct(dual, x);
  for (const auto& [pk, pc] : cop.terms()) {
    Polynomial left = map.differential(*pk.pair().left).apply(phi);
    Polynomial right = map.differential(*pk.pair().right).apply(psi);
    defect2 += pc * (left * right);
  }
  defect2 -= map.differential(x).apply(phi * psi);
  return {defect1, defect2};
}

/// Grafting compatibility F(tau grafted on sigma) - nabla_{F tau} F sigma for
/// nonempty trees; must vanish for the tree structures.
inline PolyVectorField check_graft_compatibility(const ElementaryDifferential& map,
                                                 const Tree& tau, const Tree& sigma) {
  if (map.structure() == Structure::tensor)
    throw std::invalid_argument("graft compatibility concerns the tree structures");
  bool ordered = map.structure() == Structure::mkw;
  FormalSum grafted =
      graft(single_tree_forest(tau, ordered), single_tree_forest(sigma, ordered));
  PolyVectorField lhs(map.dim());
  for (const auto& [k, c] : grafted.terms()) {
    PolyVectorField piece = map.field_of_tree(k.forest().trees.at(0));
    piece *= c;
    lhs += piece;
  }
  PolyVectorField rhs = map.connection().cov_deriv(map.field_of_tree(tau), map.field_of_tree(sigma));
  return lhs - rhs;
}

/// Extends an assignment on the primitive generators (letters, single trees)
/// to the whole algebra: words compose letter fields; a forest is reduced by
/// tau * g = tau g + tau grafted on g, so
///   F(tau g) = F(tau) o F(g) - F(tau grafted on g),
/// which only ever consumes assignments on trees. Realizes the enveloping-
/// algebra extension of a Lie map.
class LieMapExtension {
 public:
  LieMapExtension(Structure structure, std::map<std::string, PolyVectorField> assignments, int dim)
      : structure_(structure), assignments_(std::move(assignments)), dim_(dim) {}

  /// Convenience: the generator assignment dot_i -> fields[i-1].
  static LieMapExtension from_generators(const ElementaryDifferential& map) {
    std::map<std::string, PolyVectorField> a;
    if (map.structure() == Structure::tensor) {
      for (int i = 1; i <= map.alphabet(); ++i)
        a[Key(Word{i}).encode()] = map.driving_field(i);
    } else {
      bool ordered = map.structure() == Structure::mkw;
      int max_grade = 5;  // plenty for the sweeps this backs
      for (int g = 1; g <= max_grade; ++g)
        for (const auto& t : enumerate_trees(g, map.alphabet(), ordered))
          a[Key(single_tree_forest(t, ordered)).encode()] = map.field_of_tree(t);
    }
    return LieMapExtension(map.structure(), std::move(a), map.dim());
  }

  DiffOperator evaluate(const FormalSum& x) const {
    DiffOperator out(dim_);
    for (const auto& [k, c] : x.terms()) out += c * evaluate_key(k);
    return out;
  }

  DiffOperator evaluate_key(const Key& k) const {
    if (structure_ == Structure::tensor) {
      DiffOperator op = DiffOperator::identity(dim_);
      for (int letter : k.word().letters)
        op = compose(op, DiffOperator::from_field(lookup(Key(Word{letter}))));
      return op;
    }
    const Forest& f = k.forest();
    if (f.trees.empty()) return DiffOperator::identity(dim_);
    if (f.trees.size() == 1) return DiffOperator::from_field(lookup(k));
    Tree head = f.trees.front();
    Forest tail(std::vector<Tree>(f.trees.begin() + 1, f.trees.end()), f.ordered);
    DiffOperator composed = compose(evaluate_key(Key(single_tree_forest(head, f.ordered))),
                                    evaluate_key(Key(tail)));
    FormalSum grafted = graft(single_tree_forest(head, f.ordered), tail);
    return composed - evaluate(grafted);
  }

 private:
  const PolyVectorField& lookup(const Key& k) const {
    auto it = assignments_.find(k.encode());
    if (it == assignments_.end())
      throw std::invalid_argument("no assignment for primitive " + k.encode());
    return it->second;
  }

  Structure structure_;
  std::map<std::string, PolyVectorField> assignments_;
  int dim_;
};

}  // namespace logode
