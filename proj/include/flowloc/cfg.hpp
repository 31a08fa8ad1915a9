#pragma once

#include <string>
#include <vector>

#include "flowloc/ast.hpp"
#include "flowloc/ir.hpp"

namespace flowloc {

using NodeId = int;

enum class NodeKind { Entry, Exit, Block, Decision };
enum class Branch { Then, Else };

std::string_view to_string(Branch b);
Branch opposite(Branch b);

/// `target = rhs` inside a Block.
struct Assignment {
  SsaName target;
  LinTerm rhs;
  SourceLoc loc;
  /// Copy inserted by to_dsa to unify versions at a join.
  bool synthetic = false;
  /// Initialiser of a declaration (`int k = 0;`); targets version 0.
  bool declaration = false;
  /// Binding of the return value before DSA.
  bool is_return = false;
  /// For synthetic copies: the decision whose branch lacked the assignment.
  NodeId governor = -1;
  Branch branch = Branch::Then;
  /// 1-based, increasing along every path. Assigned by to_dsa.
  int id = 0;

  std::string str() const;
};

struct CfgNode {
  NodeId id = -1;
  NodeKind kind = NodeKind::Block;
  std::vector<Assignment> assignments;  // Block
  Formula guard;                        // Decision
  SourceLoc loc;
  NodeId next = -1;       // Entry and Block
  NodeId then_next = -1;  // Decision
  NodeId else_next = -1;  // Decision
  /// Decision: first node shared by both branches.
  NodeId join = -1;

  NodeId successor(Branch b) const { return b == Branch::Then ? then_next : else_next; }
};

struct CfgEdge {
  enum class Label { Next, Then, Else };
  NodeId from;
  NodeId to;
  Label label;

  friend bool operator==(const CfgEdge&, const CfgEdge&) = default;
};

/// Control-flow graph of one loop-free function. Node ids index `nodes`.
struct Cfg {
  std::string name;
  std::vector<Param> params;
  std::vector<CfgNode> nodes;
  NodeId entry = -1;
  NodeId exit = -1;
  Formula precondition;  // True without a `requires` clause
  Formula postcondition;
  SourceLoc requires_loc;
  SourceLoc ensures_loc;
  /// Decisions in source order, which is the order along every path.
  std::vector<NodeId> decision_order;
  /// What `\result` denotes once in DSA form.
  SsaName result;
  bool dsa = false;

  const CfgNode& node(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }
  std::vector<CfgEdge> edges() const;
  std::size_t decision_count() const { return decision_order.size(); }
  /// Position of `decision` in decision_order.
  std::size_t decision_index(NodeId decision) const;
};

/// One Decision per `if`, straight-line statements grouped into Blocks,
/// `return e` lowered to a Block assignment to `\result`.
/// Pre: `typecheck(f)` is empty.
Cfg build_cfg(const Function& f);

/// Dynamic single assignment: every assignment gets a fresh version, joins
/// are reconciled with synthetic copies on the branch that lacks the latest
/// version, the postcondition is rewritten over version-0 parameters and the
/// returned version.
Cfg to_dsa(const Cfg& g);

/// Node sequences of all entry-to-exit paths. Throws Error beyond `limit`.
std::vector<std::vector<NodeId>> enumerate_paths(const Cfg& g, std::size_t limit = 1u << 12);

/// Names assigned more than once along some path (empty for a DSA graph).
std::vector<SsaName> path_reassignments(const Cfg& g, std::size_t path_limit = 1u << 12);

/// Graphviz rendering: blocks list their assignments with line numbers,
/// decisions show their guard.
std::string to_dot(const Cfg& g);

/// Linear form of an AST expression over unversioned names. Throws Error on
/// a product of two non-constant terms.
LinTerm linearize(const Expr& e);
/// Formula of a condition over unversioned names; implications are expanded.
Formula to_formula(const BoolExpr& b);

}  // namespace flowloc
