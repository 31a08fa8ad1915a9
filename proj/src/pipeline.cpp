#include "flowloc/pipeline.hpp"

namespace flowloc {
namespace {

std::string describe(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const Diagnostic& d : ds) {
    if (!out.empty()) out += "\n";
    out += std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " + d.message;
  }
  return out;
}

}  // namespace

TypecheckError::TypecheckError(std::vector<Diagnostic> diagnostics)
    : Error(describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Program load_program(std::string_view text) {
  Function f = parse_program(text);
  std::vector<Diagnostic> ds = typecheck(f);
  if (!ds.empty()) throw TypecheckError(std::move(ds));
  Cfg g = to_dsa(build_cfg(f));
  return Program{std::move(f), std::move(g)};
}

Report localize(const Program& p, const Counterexample& ce, const ExplorerConfig& config) {
  return run_localization(p.cfg, ce, config);
}

}  // namespace flowloc
