#pragma once

#include <string_view>
#include <vector>

#include "flowloc/explorer.hpp"
#include "flowloc/frontend.hpp"

namespace flowloc {

/// Typecheck failure; what() lists every diagnostic as `line:col: message`.
class TypecheckError : public Error {
 public:
  explicit TypecheckError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct Program {
  Function ast;
  Cfg cfg;  // DSA form
};

/// parse_program, typecheck, build_cfg and to_dsa in one step.
Program load_program(std::string_view text);

Report localize(const Program& p, const Counterexample& ce, const ExplorerConfig& config);

}  // namespace flowloc
