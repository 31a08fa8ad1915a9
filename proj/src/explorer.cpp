#include "flowloc/explorer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>

namespace flowloc {

void ExplorerConfig::validate() const {
  if (b_cond < 0) throw Error("b_cond must be non-negative");
  mcs.validate();
  dom.validate();
}

std::string_view to_string(DiagnosisKind k) {
  return k == DiagnosisKind::InitialPath ? "initial_path" : "deviation_corrects";
}

std::string_view to_string(CandidateOutcome o) {
  switch (o) {
    case CandidateOutcome::Corrected: return "corrected";
    case CandidateOutcome::Ignored: return "ignored";
    case CandidateOutcome::RejectedMarked: return "rejected_marked";
    case CandidateOutcome::RejectedPrefix: return "rejected_prefix";
    case CandidateOutcome::Unreached: return "unreached";
    case CandidateOutcome::OutOfDomain: return "out_of_domain";
  }
  return "ignored";
}

namespace {

int assignment_count(const Cfg& g) {
  int n = 0;
  for (const CfgNode& node : g.nodes) n += static_cast<int>(node.assignments.size());
  return n;
}

std::string copy_note(const Cfg& g, const Assignment& a) {
  return "synthetic copy: possible missing assignment to " + a.target.base + " in the " +
         std::string(to_string(a.branch)) + " branch of line " +
         std::to_string(g.node(a.governor).loc.line);
}

}  // namespace

// ---------------------------------------------------------------------------
// concrete propagation

Propagation propagate(const Cfg& g, const Counterexample& ce, const std::vector<NodeId>& deviations,
                      const DomainConfig& dom) {
  if (!g.dsa) throw Error("propagate expects a graph in DSA form");
  Propagation out;
  PathTrace& t = out.trace;
  Model& m = t.final_model;
  for (const Param& p : g.params) {
    auto it = ce.inputs.find(p.name);
    if (it == ce.inputs.end()) throw CounterexampleError("missing value for parameter '" + p.name + "'");
    m[SsaName{p.name, 0}] = it->second;
  }
  const int params = static_cast<int>(g.params.size());
  const std::set<NodeId> flips(deviations.begin(), deviations.end());
  std::set<NodeId> reached;

  NodeId id = g.entry;
  int index = 0;
  while (true) {
    t.nodes.push_back(id);
    const CfgNode& n = g.node(id);
    if (n.kind == NodeKind::Exit) break;
    if (n.kind == NodeKind::Entry) {
      id = n.next;
      continue;
    }
    if (n.kind == NodeKind::Block) {
      for (const Assignment& a : n.assignments) {
        int64_t v = 0;
        try {
          v = a.rhs.evaluate(m);
        } catch (const ArithmeticOverflow&) {
          out.status = PropagateStatus::OutOfDomain;
          out.message = "overflow at line " + std::to_string(a.loc.line);
          return out;
        }
        if (!dom.contains(v)) {
          out.status = PropagateStatus::OutOfDomain;
          out.message = a.target.str() + " = " + std::to_string(v) + " leaves the domain at line " +
                        std::to_string(a.loc.line);
          return out;
        }
        m[a.target] = v;
        Constraint c = assign_to_constraint(a.target, a.rhs, a.loc, a.synthetic, params + a.id, ++index);
        if (a.synthetic) c.note = copy_note(g, a);
        t.collected.push_back(std::move(c));
      }
      id = n.next;
      continue;
    }
    Branch b = eval_formula(n.guard, m) ? Branch::Then : Branch::Else;
    bool flip = flips.count(id) > 0;
    if (flip) b = opposite(b);
    reached.insert(id);
    t.decisions.push_back(DecisionStep{id, b, flip});
    id = n.successor(b);
  }
  for (NodeId d : flips) {
    if (!reached.count(d)) {
      out.status = PropagateStatus::DeviationUnreached;
      out.message = "decision at line " + std::to_string(g.node(d).loc.line) + " not reached";
      return out;
    }
  }
  t.result = m.at(g.result);
  return out;
}

bool path_satisfies_post(const PathTrace& t, const Cfg& g) {
  return eval_formula(g.postcondition, t.final_model);
}

// ---------------------------------------------------------------------------
// constraint ids

std::vector<Constraint> input_constraints(const Cfg& g, const Counterexample& ce) {
  std::vector<Constraint> out;
  int id = 1;
  for (const Param& p : g.params) {
    Constraint c;
    c.id = id++;
    c.formula = Formula::atom(CmpOp::Eq, LinTerm::variable(SsaName{p.name, 0}),
                              LinTerm::constant(ce.inputs.at(p.name)));
    c.kind = ConstraintKind::Input;
    c.loc = p.loc;
    out.push_back(std::move(c));
  }
  return out;
}

Constraint postcondition_constraint(const Cfg& g) {
  Constraint c;
  c.id = static_cast<int>(g.params.size()) + assignment_count(g) + 1;
  c.formula = g.postcondition;
  c.kind = ConstraintKind::Postcondition;
  c.loc = g.ensures_loc;
  return c;
}

Constraint requirement_constraint(const Cfg& g, NodeId decision, Branch branch) {
  const CfgNode& n = g.node(decision);
  Constraint c;
  c.id = static_cast<int>(g.params.size()) + assignment_count(g) + 2 +
         2 * static_cast<int>(g.decision_index(decision)) + (branch == Branch::Else ? 1 : 0);
  c.formula = branch == Branch::Then ? n.guard : negate(n.guard);
  c.kind = ConstraintKind::Guard;
  c.loc = n.loc;
  return c;
}

// ---------------------------------------------------------------------------
// solving sessions

namespace {

// Position in t.nodes of `decision`, i.e. the number of nodes before it.
std::size_t cut_at(const PathTrace& t, NodeId decision) {
  auto it = std::find(t.nodes.begin(), t.nodes.end(), decision);
  return static_cast<std::size_t>(it - t.nodes.begin());
}

struct BlockSlice {
  NodeId block;
  std::vector<Constraint> soft;
};

// Blocks among the first `cut` nodes with their collected constraints.
std::vector<BlockSlice> prefix_blocks(const Cfg& g, const PathTrace& t, std::size_t cut) {
  std::vector<BlockSlice> out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < cut; ++i) {
    const CfgNode& n = g.node(t.nodes[i]);
    if (n.kind != NodeKind::Block) continue;
    BlockSlice s{n.id, {}};
    for (std::size_t k = 0; k < n.assignments.size(); ++k) s.soft.push_back(t.collected.at(next++));
    out.push_back(std::move(s));
  }
  return out;
}

// Builds path CSPs: one shared solver whose frames follow the current path
// prefix, or a fresh solver per path.
class Session {
 public:
  Session(const Cfg& g, const Counterexample& ce, const ExplorerConfig& config)
      : g_(g), inputs_(input_constraints(g, ce)), config_(config) {
    if (config_.incremental) {
      shared_ = std::make_unique<Solver>(config_.dom);
      for (const Constraint& c : inputs_) shared_->assert_hard(c.formula);
    }
  }

  // Makes the solver hold the soft constraints of the first `cut` nodes.
  void sync(const PathTrace& t, std::size_t cut) {
    std::vector<BlockSlice> target = prefix_blocks(g_, t, cut);
    if (!config_.incremental) {
      fresh(target);
      return;
    }
    std::size_t common = 0;
    while (common < frames_.size() && common < target.size() && frames_[common].block == target[common].block) {
      ++common;
    }
    if (common < frames_.size()) {
      shared_->pop(frames_[common].frame);
      frames_.resize(common);
    }
    for (std::size_t i = common; i < target.size(); ++i) {
      Frame f{target[i].block, shared_->push(), target[i].soft, {}};
      for (const Constraint& c : f.soft) f.selectors.push_back(shared_->assert_soft(c));
      frames_.push_back(std::move(f));
    }
  }

  McsResult solve(const PathTrace& t, std::size_t cut, const Constraint& extra) {
    if (!config_.incremental) {
      Solver& s = fresh(prefix_blocks(g_, t, cut));
      s.assert_hard(extra.formula);
      McsResult r = enumerate_mcs(s, soft_, selectors_, config_.mcs);
      collect(s);
      return r;
    }
    sync(t, cut);
    std::vector<Constraint> soft;
    std::vector<Selector> selectors;
    for (const Frame& f : frames_) {
      soft.insert(soft.end(), f.soft.begin(), f.soft.end());
      selectors.insert(selectors.end(), f.selectors.begin(), f.selectors.end());
    }
    int frame = shared_->push();
    shared_->assert_hard(extra.formula);
    McsResult r = enumerate_mcs(*shared_, soft, selectors, config_.mcs);
    shared_->pop(frame);
    return r;
  }

  uint64_t checks() const { return totals().checks; }

  SolverStats totals() const {
    SolverStats s = retired_;
    if (shared_) {
      s.checks += shared_->stats().checks;
      s.assertions += shared_->stats().assertions;
      s.propagations += shared_->stats().propagations;
      s.search_nodes += shared_->stats().search_nodes;
    }
    if (scratch_) {
      s.checks += scratch_->stats().checks;
      s.assertions += scratch_->stats().assertions;
      s.propagations += scratch_->stats().propagations;
      s.search_nodes += scratch_->stats().search_nodes;
    }
    return s;
  }

 private:
  struct Frame {
    NodeId block;
    int frame;
    std::vector<Constraint> soft;
    std::vector<Selector> selectors;
  };

  Solver& fresh(const std::vector<BlockSlice>& blocks) {
    if (scratch_) collect(*scratch_);
    scratch_ = std::make_unique<Solver>(config_.dom);
    soft_.clear();
    selectors_.clear();
    for (const Constraint& c : inputs_) scratch_->assert_hard(c.formula);
    for (const BlockSlice& b : blocks) {
      for (const Constraint& c : b.soft) {
        soft_.push_back(c);
        selectors_.push_back(scratch_->assert_soft(c));
      }
    }
    return *scratch_;
  }

  void collect(const Solver& s) {
    if (&s != scratch_.get()) return;
    retired_.checks += s.stats().checks;
    retired_.assertions += s.stats().assertions;
    retired_.propagations += s.stats().propagations;
    retired_.search_nodes += s.stats().search_nodes;
    scratch_.reset();
  }

  const Cfg& g_;
  std::vector<Constraint> inputs_;
  ExplorerConfig config_;
  std::unique_ptr<Solver> shared_;
  std::vector<Frame> frames_;
  std::unique_ptr<Solver> scratch_;
  std::vector<Constraint> soft_;
  std::vector<Selector> selectors_;
  SolverStats retired_;
};

std::vector<PathStep> path_steps(const Cfg& g, const PathTrace& t) {
  std::vector<PathStep> out;
  for (const DecisionStep& d : t.decisions) {
    out.push_back(PathStep{static_cast<int>(g.decision_index(d.decision)), g.node(d.decision).loc.line,
                           d.taken, d.deviated});
  }
  return out;
}

std::vector<McsRef> mcs_refs(const McsResult& r, const std::vector<Constraint>& soft) {
  std::map<int, const Constraint*> by_id;
  for (const Constraint& c : soft) by_id[c.id] = &c;
  std::vector<McsRef> out;
  for (const Mcs& m : r.mcs) {
    McsRef ref;
    for (int id : m.members) {
      const Constraint& c = *by_id.at(id);
      ref.members.push_back(SuspectRef{c.id, c.kind, c.loc.line, c.path_index, c.formula.str(), c.note});
    }
    out.push_back(std::move(ref));
  }
  return out;
}

std::vector<DeviationRef> deviated_refs(const Cfg& g, const PathTrace& t) {
  std::vector<DeviationRef> out;
  for (const DecisionStep& s : t.decisions) {
    if (!s.deviated) continue;
    const CfgNode& n = g.node(s.decision);
    out.push_back(DeviationRef{static_cast<int>(g.decision_index(s.decision)), n.loc.line, n.guard.str(), s.taken});
  }
  return out;
}

std::vector<Constraint> soft_before(const Cfg& g, const PathTrace& t, std::size_t cut) {
  std::vector<Constraint> out;
  for (BlockSlice& b : prefix_blocks(g, t, cut)) {
    for (Constraint& c : b.soft) out.push_back(std::move(c));
  }
  return out;
}

Diagnosis initial_with(Session& session, const Cfg& g, const PathTrace& t) {
  Constraint post = postcondition_constraint(g);
  post.path_index = static_cast<int>(t.collected.size()) + 1;
  McsResult r = session.solve(t, t.nodes.size(), post);
  Diagnosis d;
  d.kind = DiagnosisKind::InitialPath;
  d.mcs_status = r.status;
  d.mcs = mcs_refs(r, t.collected);
  d.path = path_steps(g, t);
  d.result = t.result;
  return d;
}

Diagnosis deviation_with(Session& session, const Cfg& g, const PathTrace& t, NodeId dev) {
  const std::size_t cut = cut_at(t, dev);
  std::vector<Constraint> prefix = soft_before(g, t, cut);
  Branch taken = Branch::Then;
  for (const DecisionStep& s : t.decisions) {
    if (s.decision == dev) taken = s.taken;
  }
  Constraint required = requirement_constraint(g, dev, taken);
  required.path_index = static_cast<int>(prefix.size()) + 1;
  McsResult r = session.solve(t, cut, required);

  Diagnosis d;
  d.kind = DiagnosisKind::DeviationCorrects;
  d.deviated = deviated_refs(g, t);
  d.mcs_status = r.status;
  d.mcs = mcs_refs(r, prefix);
  d.path = path_steps(g, t);
  d.result = t.result;
  return d;
}

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

void validate_counterexample(const Cfg& g, const Counterexample& ce, const DomainConfig& dom) {
  std::set<std::string> names;
  for (const Param& p : g.params) {
    names.insert(p.name);
    auto it = ce.inputs.find(p.name);
    if (it == ce.inputs.end()) throw CounterexampleError("missing value for parameter '" + p.name + "'");
    if (!dom.contains(it->second)) {
      throw CounterexampleError("value of '" + p.name + "' lies outside the domain [" + std::to_string(dom.lo) +
                                ", " + std::to_string(dom.hi) + "]");
    }
  }
  for (const auto& [name, value] : ce.inputs) {
    if (!names.count(name)) throw CounterexampleError("unknown parameter '" + name + "'");
  }
  Model m;
  for (const Param& p : g.params) m[SsaName{p.name, 0}] = ce.inputs.at(p.name);
  if (!eval_formula(g.precondition, m)) throw CounterexampleError("counterexample violates the precondition");
}

}  // namespace

Diagnosis diagnose_initial(const Cfg& g, const Counterexample& ce, const PathTrace& t,
                           const ExplorerConfig& config) {
  ExplorerConfig c = config;
  c.incremental = false;
  Session session(g, ce, c);
  return initial_with(session, g, t);
}

Diagnosis diagnose_deviation(const Cfg& g, const Counterexample& ce, const PathTrace& t,
                             const std::vector<Constraint>& prefix, NodeId dev,
                             const Constraint& required, const ExplorerConfig& config) {
  ConstraintSet cs;
  cs.hard = input_constraints(g, ce);
  cs.hard.push_back(required);
  cs.soft = prefix;
  McsResult r = enumerate_mcs(cs, config.mcs, config.dom);
  Diagnosis d;
  d.kind = DiagnosisKind::DeviationCorrects;
  d.deviated = deviated_refs(g, t);
  if (d.deviated.empty()) {
    const CfgNode& n = g.node(dev);
    d.deviated.push_back(DeviationRef{static_cast<int>(g.decision_index(dev)), n.loc.line, n.guard.str(),
                                      Branch::Then});
  }
  d.mcs_status = r.status;
  d.mcs = mcs_refs(r, prefix);
  d.path = path_steps(g, t);
  d.result = t.result;
  return d;
}

Report run_localization(const Cfg& input, const Counterexample& ce, const ExplorerConfig& config) {
  config.validate();
  const Cfg g = to_dsa(input);
  validate_counterexample(g, ce, config.dom);

  Propagation init = propagate(g, ce, {}, config.dom);
  if (init.status == PropagateStatus::OutOfDomain) {
    throw CounterexampleError("counterexample run leaves the domain: " + init.message);
  }
  if (path_satisfies_post(init.trace, g)) throw NothingToLocalize("counterexample does not violate postcondition");

  Report report;
  report.program = g.name;
  for (const Param& p : g.params) report.counterexample.emplace_back(p.name, ce.inputs.at(p.name));
  report.b_cond = config.b_cond;
  report.b_mcs = config.mcs.b_mcs;
  report.k_max = config.mcs.k_max;
  report.lo = config.dom.lo;
  report.hi = config.dom.hi;
  Statistics& stats = report.statistics;
  stats.incremental = config.incremental;

  Session session(g, ce, config);
  report.diagnoses.push_back(initial_with(session, g, init.trace));
  stats.paths_explored = 1;

  std::map<NodeId, int> marks;
  std::set<std::vector<DecisionStep>> explored_prefixes;
  auto remember = [&](const PathTrace& t) {
    std::vector<DecisionStep> seq;
    for (const DecisionStep& s : t.decisions) {
      seq.push_back(s);
      if (s.deviated) explored_prefixes.insert(seq);
    }
  };

  const int n = static_cast<int>(g.decision_count());
  const int depth = std::min(config.b_cond, n);
  for (int d = 1; d <= depth; ++d) {
    std::vector<int> comb(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) comb[static_cast<std::size_t>(i)] = i;
    do {
      CandidateRecord rec;
      std::vector<NodeId> devs;
      for (int i : comb) {
        NodeId id = g.decision_order[static_cast<std::size_t>(i)];
        devs.push_back(id);
        rec.indices.push_back(i);
        rec.lines.push_back(g.node(id).loc.line);
      }
      const NodeId last = devs.back();
      const uint64_t checks_before = session.checks();

      Propagation p = propagate(g, ce, devs, config.dom);
      std::vector<DecisionStep> key;
      if (p.status != PropagateStatus::DeviationUnreached) {
        for (const DecisionStep& s : p.trace.decisions) {
          key.push_back(s);
          if (s.decision == last) break;
        }
      }
      auto mark = marks.find(last);
      if (p.status == PropagateStatus::DeviationUnreached) {
        rec.outcome = CandidateOutcome::Unreached;
        ++stats.unreached;
      } else if (mark != marks.end() && mark->second <= d) {
        rec.outcome = CandidateOutcome::RejectedMarked;
        ++stats.rejected_marked;
      } else if (explored_prefixes.count(key)) {
        rec.outcome = CandidateOutcome::RejectedPrefix;
        ++stats.rejected_prefix;
      } else if (p.status == PropagateStatus::OutOfDomain) {
        rec.outcome = CandidateOutcome::OutOfDomain;
        ++stats.out_of_domain;
      } else {
        ++stats.paths_explored;
        remember(p.trace);
        if (path_satisfies_post(p.trace, g)) {
          report.diagnoses.push_back(deviation_with(session, g, p.trace, last));
          marks.emplace(last, d);
          rec.outcome = CandidateOutcome::Corrected;
        } else {
          session.sync(p.trace, cut_at(p.trace, last));
          rec.outcome = CandidateOutcome::Ignored;
          ++stats.ignored;
        }
      }
      rec.solver_checks = session.checks() - checks_before;
      report.explored.push_back(std::move(rec));
    } while (next_combination(comb, n));
  }

  SolverStats totals = session.totals();
  stats.solver_checks = totals.checks;
  stats.assertions = totals.assertions;
  stats.propagations = totals.propagations;
  return report;
}

}  // namespace flowloc
