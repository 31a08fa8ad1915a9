#pragma once

// Reference procedures for tests. None of them goes through the solver, the
// CFG or the explorer: they enumerate valuations and walk the AST directly.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flowloc/explorer.hpp"
#include "flowloc/frontend.hpp"
#include "flowloc/ir.hpp"

namespace flowloc::oracle {

/// First satisfying valuation in lexicographic order of (variable, value),
/// or nullopt. Variables are those occurring in `fs`.
std::optional<Model> exhaustive_sat(const std::vector<Formula>& fs, int64_t lo, int64_t hi);

using McsSet = std::set<std::set<int>>;

/// All minimal correction sets by subset enumeration of increasing size.
/// Throws when there are more than 12 soft constraints. Empty when hard is
/// unsatisfiable or hard and soft are jointly satisfiable.
McsSet bruteforce_mcs(const ConstraintSet& cs, int64_t lo, int64_t hi);

/// Correction and irreducibility of `members` w.r.t. `cs`, decided by
/// exhaustive enumeration. Returns an empty string when both hold.
std::string certify_exhaustive(const ConstraintSet& cs, const std::vector<int>& members, int64_t lo, int64_t hi);

/// Same property, decided by fresh solvers (for domains too large to
/// enumerate).
std::string certify_with_solver(const ConstraintSet& cs, const std::vector<int>& members, const DomainConfig& dom);

/// Random formulas and systems over variables x_0 .. x_{n-1}.
class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi);
  LinTerm term(int vars, int max_coef, int max_const);
  Formula atom(int vars);
  Formula formula(int vars, int depth);
  /// Conjunction material for solver tests: up to `atoms` atoms, a few
  /// wrapped in Or / Not.
  std::vector<Formula> conjunction(int vars, int atoms);
  /// Hard/soft system with soft ids 1..n and path_index == id.
  ConstraintSet system(int vars, int soft, int hard);

 private:
  std::mt19937_64 rng_;
};

/// Runs the AST directly, flipping the `if` statements whose source-order
/// (pre-order) index is in `flips`. Returns the returned value.
int64_t run_with_flips(const Function& f, const Inputs& inputs, const std::set<int>& flips);
/// Postcondition of `f` evaluated on the AST with `\result` = result.
bool post_holds(const Function& f, const Inputs& inputs, int64_t result);

/// Path constraint system of a diagnosis, rebuilt from the DSA graph:
/// initial path: inputs + postcondition hard, path assignments soft;
/// deviation: inputs + required guard hard, assignments before the last
/// deviated decision soft.
ConstraintSet diagnosis_system(const Cfg& g, const Counterexample& ce, const Diagnosis& d);

}  // namespace flowloc::oracle
