#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowloc/cfg.hpp"
#include "flowloc/frontend.hpp"
#include "flowloc/mcs.hpp"

namespace flowloc {

/// Failing input: one value per parameter.
struct Counterexample {
  Inputs inputs;
};

struct ExplorerConfig {
  /// Maximum number of deviated decisions per path.
  int b_cond = 2;
  McsConfig mcs;
  DomainConfig dom;
  /// Share solver frames between paths with a common prefix.
  bool incremental = true;

  void validate() const;
};

/// The counterexample is malformed or cannot be run inside the domain.
class CounterexampleError : public Error {
 public:
  using Error::Error;
};

/// The counterexample already satisfies the postcondition.
class NothingToLocalize : public Error {
 public:
  using Error::Error;
};

struct DecisionStep {
  NodeId decision = -1;
  Branch taken = Branch::Then;
  bool deviated = false;

  friend auto operator<=>(const DecisionStep&, const DecisionStep&) = default;
};

/// One concrete traversal of a DSA graph.
struct PathTrace {
  std::vector<DecisionStep> decisions;
  /// Every node visited, entry to exit.
  std::vector<NodeId> nodes;
  /// Assignment and synthetic-copy constraints, in path order.
  std::vector<Constraint> collected;
  Model final_model;
  int64_t result = 0;
};

enum class PropagateStatus { Ok, DeviationUnreached, OutOfDomain };

struct Propagation {
  PropagateStatus status = PropagateStatus::Ok;
  PathTrace trace;
  std::string message;
};

/// Runs the counterexample through `g`, taking the opposite branch at every
/// decision in `deviations`.
Propagation propagate(const Cfg& g, const Counterexample& ce, const std::vector<NodeId>& deviations,
                      const DomainConfig& dom = {});

/// The postcondition evaluated on the trace's final model.
bool path_satisfies_post(const PathTrace& t, const Cfg& g);

/// Constraint ids: inputs 1..P, assignments P + assignment id, then the
/// postcondition, then one slot per (decision, branch) requirement.
std::vector<Constraint> input_constraints(const Cfg& g, const Counterexample& ce);
Constraint postcondition_constraint(const Cfg& g);
Constraint requirement_constraint(const Cfg& g, NodeId decision, Branch branch);

enum class DiagnosisKind { InitialPath, DeviationCorrects };

/// A deviated decision: the condition itself is a suspect.
struct DeviationRef {
  int index = 0;  // position in decision_order
  int line = 0;
  std::string guard;
  Branch taken = Branch::Then;

  friend bool operator==(const DeviationRef&, const DeviationRef&) = default;
};

struct SuspectRef {
  int id = 0;
  ConstraintKind kind = ConstraintKind::Assignment;
  int line = 0;
  int path_index = 0;
  std::string formula;
  std::string note;

  friend bool operator==(const SuspectRef&, const SuspectRef&) = default;
};

struct McsRef {
  std::vector<SuspectRef> members;

  friend bool operator==(const McsRef&, const McsRef&) = default;
};

struct PathStep {
  int index = 0;
  int line = 0;
  Branch taken = Branch::Then;
  bool deviated = false;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct Diagnosis {
  DiagnosisKind kind = DiagnosisKind::InitialPath;
  std::vector<DeviationRef> deviated;
  McsStatus mcs_status = McsStatus::Ok;
  std::vector<McsRef> mcs;
  std::vector<PathStep> path;
  int64_t result = 0;

  friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

enum class CandidateOutcome { Corrected, Ignored, RejectedMarked, RejectedPrefix, Unreached, OutOfDomain };

std::string_view to_string(DiagnosisKind k);
std::string_view to_string(CandidateOutcome o);

struct CandidateRecord {
  std::vector<int> indices;  // deviated positions in decision_order
  std::vector<int> lines;
  CandidateOutcome outcome = CandidateOutcome::Ignored;
  uint64_t solver_checks = 0;

  friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

struct Statistics {
  int paths_explored = 0;  // propagated to the exit, initial path included
  int ignored = 0;
  int rejected_marked = 0;
  int rejected_prefix = 0;
  int unreached = 0;
  int out_of_domain = 0;
  uint64_t solver_checks = 0;
  uint64_t assertions = 0;
  uint64_t propagations = 0;
  bool incremental = true;

  friend bool operator==(const Statistics&, const Statistics&) = default;
};

struct Report {
  std::string program;
  std::vector<std::pair<std::string, int64_t>> counterexample;  // parameter order
  int b_cond = 0;
  int b_mcs = 0;
  int k_max = 0;
  int64_t lo = 0;
  int64_t hi = 0;
  std::vector<Diagnosis> diagnoses;
  std::vector<CandidateRecord> explored;
  Statistics statistics;

  friend bool operator==(const Report&, const Report&) = default;
};

Diagnosis diagnose_initial(const Cfg& g, const Counterexample& ce, const PathTrace& t,
                           const ExplorerConfig& config);

/// `prefix`: soft constraints collected before `dev`; `required`: the guard
/// value forcing the deviated branch.
Diagnosis diagnose_deviation(const Cfg& g, const Counterexample& ce, const PathTrace& t,
                             const std::vector<Constraint>& prefix, NodeId dev,
                             const Constraint& required, const ExplorerConfig& config);

/// Whole localization run on a DSA graph. Throws CounterexampleError for a
/// malformed counterexample and NothingToLocalize when it does not fail.
Report run_localization(const Cfg& g, const Counterexample& ce, const ExplorerConfig& config);

}  // namespace flowloc
