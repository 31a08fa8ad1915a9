#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flowloc/common.hpp"

namespace flowloc {

struct Expr;
struct BoolExpr;
using ExprPtr = std::shared_ptr<const Expr>;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

/// Integer expression. `Mul` is accepted by the parser for any operands;
/// typecheck reports products where neither side is variable-free.
struct Expr {
  enum class Kind { IntLit, Var, Result, Neg, Add, Sub, Mul };

  Kind kind = Kind::IntLit;
  int64_t value = 0;  // IntLit
  std::string name;   // Var
  ExprPtr lhs;        // Neg uses lhs only
  ExprPtr rhs;
  SourceLoc loc;
};

struct BoolExpr {
  enum class Kind { Literal, Cmp, And, Or, Not, Implies };

  Kind kind = Kind::Literal;
  bool value = true;      // Literal
  CmpOp op = CmpOp::Eq;   // Cmp
  ExprPtr a;              // Cmp
  ExprPtr b;              // Cmp
  BoolExprPtr left;       // And/Or/Implies, Not uses left only
  BoolExprPtr right;
  SourceLoc loc;
};

struct Stmt {
  enum class Kind { Decl, Assign, If, Return };

  Kind kind = Kind::Assign;
  std::string name;  // Decl/Assign target
  ExprPtr expr;      // Decl init (optional), Assign rhs, Return value
  BoolExprPtr cond;  // If
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;  // empty when the source had no else
  SourceLoc loc;
};

struct Param {
  std::string name;
  SourceLoc loc;
};

struct Function {
  std::string name;
  std::string class_name;  // empty without an enclosing class
  std::vector<Param> params;
  std::vector<Stmt> body;
  BoolExprPtr precondition;   // may be null
  BoolExprPtr postcondition;  // never null after parsing
  SourceLoc loc;
  SourceLoc requires_loc;
  SourceLoc ensures_loc;
};

}  // namespace flowloc
