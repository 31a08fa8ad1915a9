#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "flowloc/ir.hpp"
#include "flowloc/solver.hpp"

namespace flowloc {

struct McsConfig {
  /// Maximum number of correction sets returned.
  int b_mcs = 3;
  /// Maximum cardinality of a correction set.
  int k_max = 2;

  static constexpr int kUnbounded = std::numeric_limits<int>::max();

  /// Throws Error unless both bounds are at least 1.
  void validate() const;
};

/// Minimal correction set: soft constraint ids, ascending.
struct Mcs {
  std::vector<int> members;

  std::size_t cardinality() const { return members.size(); }
  friend bool operator==(const Mcs&, const Mcs&) = default;
  friend auto operator<=>(const Mcs&, const Mcs&) = default;
};

enum class McsStatus {
  Ok,
  /// The hard constraints alone are unsatisfiable; nothing was enumerated.
  HardUnsat,
  /// Hard and soft constraints are jointly satisfiable; nothing to correct.
  Satisfiable,
};

std::string_view to_string(McsStatus s);

struct McsResult {
  McsStatus status = McsStatus::Ok;
  /// By cardinality, then latest-on-path first.
  std::vector<Mcs> mcs;
  uint64_t checks = 0;
};

/// Enumerates correction sets of `cs.soft` with a private solver.
McsResult enumerate_mcs(const ConstraintSet& cs, const McsConfig& config,
                        const DomainConfig& dom = {});

/// Same enumeration on a solver that already holds the hard constraints and
/// `soft` guarded by `selectors` (parallel vectors). The solver is left in
/// the state it was given in.
McsResult enumerate_mcs(Solver& solver, const std::vector<Constraint>& soft,
                        const std::vector<Selector>& selectors, const McsConfig& config);

}  // namespace flowloc
