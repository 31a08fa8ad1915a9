#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flowloc/ast.hpp"
#include "flowloc/ir.hpp"

namespace flowloc {

/// Parses one annotated function, optionally wrapped in a class, e.g.
///
///     class AbsMinus {
///       /*@ ensures ((i < j) ==> (\result == j-i)); */
///       int AbsMinus(int i, int j) { ... }
///     }
///
/// Throws ParseError on syntax errors and unsupported constructs (loops,
/// floating-point literals, division).
Function parse_program(std::string_view text);

struct Diagnostic {
  SourceLoc loc;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Static checks beyond the grammar. An empty result means the function can
/// be lowered to a CFG.
std::vector<Diagnostic> typecheck(const Function& f);

/// Source text that parses back to a structurally identical AST.
std::string print_program(const Function& f);

/// Structural equality ignoring source locations.
bool same_function(const Function& a, const Function& b);

using Inputs = std::map<std::string, int64_t>;

/// Reference interpreter over the AST. Returns the value of the return
/// expression. Throws Error on unbound inputs or ArithmeticOverflow.
int64_t interpret(const Function& f, const Inputs& inputs);
/// Evaluates the postcondition with `\result` bound to `result`.
bool satisfies_postcondition(const Function& f, const Inputs& inputs, int64_t result);
/// True when there is no precondition.
bool satisfies_precondition(const Function& f, const Inputs& inputs);

/// Parses a standalone formula over versioned names such as
/// `k_1 = k_0 + 2 && i_0 != j_0`. `=` and `==` both denote equality and
/// `==>` is implication. A name without a numeric `_N` suffix gets version 0.
Formula parse_formula(std::string_view text);

}  // namespace flowloc
