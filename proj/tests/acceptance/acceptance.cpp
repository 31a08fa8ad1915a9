// Acceptance checks 1-7. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "../support/oracle.hpp"
#include "../support/progen.hpp"
#include "../unit/corpus.hpp"
#include "flowloc/cfg.hpp"
#include "flowloc/mcs.hpp"
#include "flowloc/pipeline.hpp"
#include "flowloc/solver.hpp"

using namespace flowloc;

namespace {

// Pinned limits.
constexpr double kGoldenSeconds = 1.0;
constexpr int kMcsSystems = 500;
constexpr int kMcsMaxSoft = 8;
constexpr int kMcsMaxVars = 4;
constexpr double kMcsSeconds = 60.0;
constexpr int kSolverRounds = 1000;
constexpr int kSolverMaxVars = 5;
constexpr int kSolverMaxAtoms = 8;
constexpr double kSolverSeconds = 30.0;
constexpr int kRandomPrograms = 300;
constexpr int64_t kLo = -4;
constexpr int64_t kHi = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Criterion number -> (passed, detail), printed in order at the end.
std::map<int, std::pair<bool, std::string>> results;

void report(int n, bool ok, const std::string& detail) { results[n] = {ok, detail}; }

// Criterion 3 accumulates over everything the other checks emit.
int certified = 0;
int violations = 0;
std::vector<std::string> certification_errors;  // first few only

void certify(const std::string& where, const std::string& verdict) {
  ++certified;
  if (verdict.empty()) return;
  ++violations;
  if (certification_errors.size() < 5) certification_errors.push_back(where + ": " + verdict);
}

int count_atoms(const Formula& f) {
  if (f.kind == Formula::Kind::Atom) return 1;
  int n = 0;
  for (const Formula& c : f.children) n += count_atoms(c);
  return n;
}

void certify_report(const std::string& name, const Program& p, const Counterexample& ce, const Report& r) {
  for (const Diagnosis& d : r.diagnoses) {
    ConstraintSet cs = oracle::diagnosis_system(p.cfg, ce, d);
    DomainConfig dom{r.lo, r.hi};
    for (const McsRef& m : d.mcs) {
      std::vector<int> ids;
      for (const SuspectRef& s : m.members) ids.push_back(s.id);
      certify(name, oracle::certify_with_solver(cs, ids, dom));
    }
  }
}

void criterion1() {
  Program p = load_program(corpus::source("absminus"));
  Counterexample ce{{{"i", 0}, {"j", 1}}};
  ExplorerConfig cfg;
  cfg.b_cond = 2;
  cfg.mcs.b_mcs = 1;
  cfg.mcs.k_max = 2;
  auto t0 = Clock::now();
  Report r = localize(p, ce, cfg);
  double secs = seconds_since(t0);
  certify_report("absminus", p, ce, r);

  auto lines = [](const McsRef& m) {
    std::vector<int> out;
    for (const SuspectRef& s : m.members) out.push_back(s.line);
    return out;
  };
  std::vector<std::string> problems;
  if (r.diagnoses.size() != 2) problems.push_back("expected 2 diagnoses");
  if (problems.empty()) {
    const Diagnosis& init = r.diagnoses[0];
    if (init.kind != DiagnosisKind::InitialPath || init.mcs.size() != 1 || lines(init.mcs[0]) != std::vector<int>{14})
      problems.push_back("initial MCS is not {line 14}");
    const Diagnosis& dev = r.diagnoses[1];
    if (dev.kind != DiagnosisKind::DeviationCorrects || dev.deviated.size() != 1 || dev.deviated[0].line != 11)
      problems.push_back("deviation is not the condition at line 11");
    if (dev.mcs.size() != 1 || lines(dev.mcs[0]) != std::vector<int>{10})
      problems.push_back("deviation MCS is not {line 10}");
  }
  bool ignored9 = false, rejected_double = false;
  for (const CandidateRecord& c : r.explored) {
    if (c.lines == std::vector<int>{9} && c.outcome == CandidateOutcome::Ignored) ignored9 = true;
    if (c.lines == std::vector<int>{9, 11} && c.outcome == CandidateOutcome::RejectedMarked && c.solver_checks == 0)
      rejected_double = true;
  }
  if (!ignored9) problems.push_back("line 9 deviation not ignored");
  if (!rejected_double) problems.push_back("double deviation not rejected without a solver call");
  if (r.statistics.ignored != 1 || r.statistics.rejected_marked != 1) problems.push_back("statistics mismatch");
  if (secs >= kGoldenSeconds) problems.push_back("too slow");

  std::string detail = "absminus golden run in " + std::to_string(secs) + " s";
  for (const std::string& s : problems) detail += "; " + s;
  report(1, problems.empty(), detail);
}

void criterion2() {
  oracle::Generator gen(20240501);
  int agree = 0, nonempty = 0;
  auto t0 = Clock::now();
  for (int i = 0; i < kMcsSystems; ++i) {
    const int vars = gen.uniform(1, kMcsMaxVars);
    ConstraintSet cs = gen.system(vars, gen.uniform(1, kMcsMaxSoft), gen.uniform(0, 2));
    McsResult r = enumerate_mcs(cs, McsConfig{McsConfig::kUnbounded, static_cast<int>(cs.soft.size())},
                                DomainConfig{kLo, kHi});
    oracle::McsSet got;
    for (const Mcs& m : r.mcs) {
      got.insert(std::set<int>(m.members.begin(), m.members.end()));
      certify("random system " + std::to_string(i), oracle::certify_exhaustive(cs, m.members, kLo, kHi));
    }
    if (got == oracle::bruteforce_mcs(cs, kLo, kHi) && got.size() == r.mcs.size()) ++agree;
    if (!got.empty()) ++nonempty;
  }
  double secs = seconds_since(t0);
  bool ok = agree == kMcsSystems && secs < kMcsSeconds;
  report(2, ok,
         std::to_string(agree) + "/" + std::to_string(kMcsSystems) + " systems agree with brute force, " +
             std::to_string(nonempty) + " with at least one MCS, " + std::to_string(secs) + " s");
}

void criterion4() {
  oracle::Generator gen(777);
  int agree = 0, sat = 0;
  auto t0 = Clock::now();
  for (int i = 0; i < kSolverRounds; ++i) {
    const int vars = gen.uniform(1, kSolverMaxVars);
    std::vector<Formula> fs;
    do {
      fs = gen.conjunction(vars, kSolverMaxAtoms);
      int atoms = 0;
      for (const Formula& f : fs) atoms += count_atoms(f);
      if (atoms <= kSolverMaxAtoms) break;
    } while (true);
    Solver s(DomainConfig{kLo, kHi});
    for (const Formula& f : fs) s.assert_hard(f);
    CheckResult r = s.check();
    auto expected = oracle::exhaustive_sat(fs, kLo, kHi);
    bool ok = r.sat == expected.has_value();
    if (ok && r.sat) {
      for (const Formula& f : fs) ok = ok && eval_formula(f, r.model);
      ++sat;
    }
    agree += ok;
  }
  double secs = seconds_since(t0);
  report(4, agree == kSolverRounds && secs < kSolverSeconds,
         std::to_string(agree) + "/" + std::to_string(kSolverRounds) + " conjunctions agree, " +
             std::to_string(sat) + " satisfiable, " + std::to_string(secs) + " s");
}

void criterion5() {
  std::vector<std::string> problems;
  int compared = 0;
  for (const std::string& name : corpus::kPrograms) {
    Program p = load_program(corpus::source(name));
    Counterexample ce = corpus::counterexample(name);
    ExplorerConfig inc, fresh;
    fresh.incremental = false;
    Report a = localize(p, ce, inc);
    Report b = localize(p, ce, fresh);
    certify_report(name, p, ce, a);
    certify_report(name, p, ce, b);
    bool same = a.diagnoses == b.diagnoses && a.explored == b.explored;
    if (!same) problems.push_back(name + ": diagnoses differ");
    if (p.cfg.decision_count() >= 2) {
      ++compared;
      if (a.statistics.assertions >= b.statistics.assertions)
        problems.push_back(name + ": " + std::to_string(a.statistics.assertions) + " >= " +
                           std::to_string(b.statistics.assertions) + " assertions");
    }
  }
  std::string detail = std::to_string(corpus::kPrograms.size()) + " programs identical, " + std::to_string(compared) +
                       " with >= 2 decisions use fewer assertions";
  for (const std::string& s : problems) detail += "; " + s;
  report(5, problems.empty(), detail);
}

int64_t walk_dsa(const Cfg& g, const Inputs& in) {
  Model m;
  for (const Param& p : g.params) m[SsaName{p.name, 0}] = in.at(p.name);
  NodeId cur = g.entry;
  while (cur != g.exit) {
    const CfgNode& n = g.node(cur);
    if (n.kind == NodeKind::Decision) {
      cur = eval_formula(n.guard, m) ? n.then_next : n.else_next;
      continue;
    }
    for (const Assignment& a : n.assignments) m[a.target] = a.rhs.evaluate(m);
    cur = n.next;
  }
  return m.at(g.result);
}

void criterion6() {
  std::vector<std::string> problems;
  int paths = 0, inputs = 0;
  for (const std::string& name : corpus::kPrograms) {
    Function f = parse_program(corpus::source(name));
    Cfg g = to_dsa(build_cfg(f));
    for (const auto& path : enumerate_paths(g)) {
      ++paths;
      std::set<SsaName> seen;
      for (NodeId id : path)
        for (const Assignment& a : g.node(id).assignments)
          if (!seen.insert(a.target).second) problems.push_back(name + ": " + a.target.str() + " assigned twice");
    }
    if (f.params.size() > 3) continue;
    std::vector<int64_t> v(f.params.size(), kLo);
    while (true) {
      Inputs in;
      for (std::size_t i = 0; i < v.size(); ++i) in[f.params[i].name] = v[i];
      ++inputs;
      if (walk_dsa(g, in) != interpret(f, in)) {
        problems.push_back(name + ": DSA and interpreter disagree");
        break;
      }
      std::size_t i = v.size();
      while (i > 0 && v[i - 1] == kHi) v[--i] = kLo;
      if (i == 0) break;
      ++v[i - 1];
    }
  }
  std::string detail = std::to_string(paths) + " paths, " + std::to_string(inputs) + " inputs";
  for (const std::string& s : problems) detail += "; " + s;
  report(6, problems.empty(), detail);
}

void criterion7() {
  std::vector<std::string> problems;
  int checked = 0;
  for (const std::string& name : corpus::kPrograms) {
    Program p = load_program(corpus::source(name));
    Counterexample ce = corpus::counterexample(name);
    for (int b_cond : {1, 2, 3}) {
      ExplorerConfig cfg;
      cfg.b_cond = b_cond;
      Report r = localize(p, ce, cfg);
      certify_report(name, p, ce, r);
      for (const Diagnosis& d : r.diagnoses) {
        if (d.kind != DiagnosisKind::DeviationCorrects) continue;
        ++checked;
        std::set<int> flips;
        for (const DeviationRef& x : d.deviated) flips.insert(x.index);
        int64_t result = oracle::run_with_flips(p.ast, ce.inputs, flips);
        if (!oracle::post_holds(p.ast, ce.inputs, result)) problems.push_back(name + ": flips do not correct");
      }
    }
  }
  // Random programs, each with its first failing input in [-4,4]^2.
  int programs = 0;
  for (int seed = 1; seed <= kRandomPrograms; ++seed) {
    Program p;
    try {
      p = load_program(oracle::ProgramGen(static_cast<uint64_t>(seed)).program());
    } catch (const TypecheckError&) {
      continue;
    }
    std::optional<Counterexample> ce;
    for (int64_t a = kLo; a <= kHi && !ce; ++a)
      for (int64_t b = kLo; b <= kHi && !ce; ++b) {
        Inputs in{{"a", a}, {"b", b}};
        if (satisfies_precondition(p.ast, in) && !satisfies_postcondition(p.ast, in, interpret(p.ast, in)))
          ce = Counterexample{in};
      }
    if (!ce) continue;
    ++programs;
    Report r = localize(p, *ce, ExplorerConfig{});
    certify_report("random program " + std::to_string(seed), p, *ce, r);
    for (const Diagnosis& d : r.diagnoses) {
      if (d.kind != DiagnosisKind::DeviationCorrects) continue;
      ++checked;
      std::set<int> flips;
      for (const DeviationRef& x : d.deviated) flips.insert(x.index);
      int64_t result = oracle::run_with_flips(p.ast, ce->inputs, flips);
      if (!oracle::post_holds(p.ast, ce->inputs, result) || result != d.result)
        problems.push_back("random program " + std::to_string(seed) + ": flips do not correct");
    }
  }
  std::string detail = std::to_string(checked) + " deviations re-simulated over " +
                       std::to_string(corpus::kPrograms.size()) + " corpus and " + std::to_string(programs) +
                       " random programs";
  for (const std::string& s : problems) detail += "; " + s;
  report(7, problems.empty() && checked > 0, detail);
}

void criterion3() {
  std::string detail = std::to_string(certified) + " MCSs checked, " + std::to_string(violations) + " violations";
  for (const std::string& s : certification_errors) detail += "; " + s;
  report(3, violations == 0 && certified > 0, detail);
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<void()>>> steps = {
      {1, criterion1}, {2, criterion2}, {4, criterion4}, {5, criterion5}, {6, criterion6}, {7, criterion7}};
  for (auto& [n, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      report(n, false, std::string("exception: ") + e.what());
    }
  }
  criterion3();
  int failures = 0;
  for (const auto& [n, r] : results) {
    std::printf("criterion %d: %s (%s)\n", n, r.first ? "PASS" : "FAIL", r.second.c_str());
    failures += !r.first;
  }
  return failures == 0 ? 0 : 1;
}
