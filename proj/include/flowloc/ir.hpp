#pragma once

// Constraint vocabulary shared by the CFG, the solver, the MCS engine and the
// explorer: versioned variable names, canonical linear terms, formulas and
// provenance-tagged constraints.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowloc/common.hpp"

namespace flowloc {

/// A variable version. `version == kUnversioned` is used before DSA renaming.
struct SsaName {
  static constexpr int kUnversioned = -1;

  std::string base;
  int version = kUnversioned;

  auto operator<=>(const SsaName&) const = default;

  /// `k_1`, or just `k` when unversioned.
  std::string str() const;
};

/// Concrete valuation of variable versions.
using Model = std::map<SsaName, int64_t>;

/// sum(coefficient * variable) + constant, canonical: no zero coefficients,
/// variables ordered by (base, version).
class LinTerm {
 public:
  LinTerm() = default;
  static LinTerm constant(int64_t value);
  static LinTerm variable(const SsaName& name, int64_t coefficient = 1);

  const std::map<SsaName, int64_t>& coefficients() const { return coefficients_; }
  int64_t constant_term() const { return constant_; }
  bool is_constant() const { return coefficients_.empty(); }
  /// The variable when the term is exactly `1 * v + 0`.
  std::optional<SsaName> as_variable() const;

  LinTerm& operator+=(const LinTerm& other);
  LinTerm& operator-=(const LinTerm& other);
  LinTerm scaled(int64_t factor) const;
  LinTerm renamed(const std::function<SsaName(const SsaName&)>& rename) const;

  /// Throws Error when a variable is missing from the model.
  int64_t evaluate(const Model& model) const;

  /// Positive terms first, then negative ones, then the constant:
  /// `k_0 + 2`, `j_0 - i_0`, `-x_0 - 3`.
  std::string str() const;

  friend bool operator==(const LinTerm&, const LinTerm&) = default;

 private:
  void add_term(const SsaName& name, int64_t coefficient);

  std::map<SsaName, int64_t> coefficients_;
  int64_t constant_ = 0;
};

LinTerm operator+(LinTerm a, const LinTerm& b);
LinTerm operator-(LinTerm a, const LinTerm& b);

/// Quantifier-free linear integer formula.
struct Formula {
  enum class Kind { True, False, Atom, And, Or, Not };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;  // Atom only
  LinTerm lhs;           // Atom only
  LinTerm rhs;           // Atom only
  std::vector<Formula> children;

  static Formula truth();
  static Formula falsity();
  static Formula atom(CmpOp op, LinTerm lhs, LinTerm rhs);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula negation(Formula inner);
  /// Or(negate(premise), conclusion).
  static Formula implication(const Formula& premise, Formula conclusion);

  Formula renamed(const std::function<SsaName(const SsaName&)>& rename) const;
  void collect_variables(std::vector<SsaName>& out) const;

  /// Rendering used in reports: `k_1 = 1 && i_0 != j_0`.
  std::string str() const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Logical negation in negation normal form (no Not nodes in the result).
Formula negate(const Formula& f);
/// Negation normal form of `f`.
Formula to_nnf(const Formula& f);
/// Throws Error on an unbound variable.
bool eval_formula(const Formula& f, const Model& model);

enum class ConstraintKind { Input, Assignment, SyntheticCopy, Guard, Postcondition };

std::string_view to_string(ConstraintKind kind);
bool is_soft_kind(ConstraintKind kind);

struct Constraint {
  int id = 0;
  Formula formula;
  ConstraintKind kind = ConstraintKind::Assignment;
  SourceLoc loc;
  /// Position along the collecting path; 0 for inputs.
  int path_index = 0;
  /// Extra remark attached to the constraint in reports (synthetic copies).
  std::string note;

  /// `k_1 = k_0 + 2 @ line 10`
  std::string str() const;
};

/// `target = rhs` as an Assignment, or a SyntheticCopy when `synthetic`.
Constraint assign_to_constraint(const SsaName& target, const LinTerm& rhs, SourceLoc loc,
                                bool synthetic, int id = 0, int path_index = 0);

/// Hard/soft partition of a path's constraint system. Input, Postcondition
/// and Guard constraints are hard; Assignment and SyntheticCopy are soft.
struct ConstraintSet {
  std::vector<Constraint> hard;
  std::vector<Constraint> soft;

  void add(Constraint c);
};

}  // namespace flowloc
