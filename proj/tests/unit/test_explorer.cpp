#include <doctest.h>

#include "../support/oracle.hpp"
#include "corpus.hpp"
#include "flowloc/explorer.hpp"
#include "flowloc/pipeline.hpp"

using namespace flowloc;

namespace {

Counterexample ce_of(Inputs in) { return Counterexample{std::move(in)}; }

std::vector<std::string> lines_and_formulas(const McsRef& m) {
  std::vector<std::string> out;
  for (const SuspectRef& s : m.members) out.push_back(std::to_string(s.line) + ": " + s.formula);
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("propagate: AbsMinus traces") {
  Program p = load_program(corpus::source("absminus"));
  const Cfg& g = p.cfg;
  const NodeId d9 = g.decision_order[0], d11 = g.decision_order[1];
  Counterexample ce = ce_of({{"i", 0}, {"j", 1}});

  Propagation none = propagate(g, ce, {});
  REQUIRE(none.status == PropagateStatus::Ok);
  CHECK(none.trace.decisions ==
        std::vector<DecisionStep>{{d9, Branch::Then, false}, {d11, Branch::Else, false}});
  CHECK(none.trace.result == -1);
  CHECK_FALSE(path_satisfies_post(none.trace, g));
  REQUIRE(none.trace.collected.size() == 3);
  CHECK(none.trace.collected[0].formula.str() == "k_0 = 0");
  CHECK(none.trace.collected[1].formula.str() == "k_1 = k_0 + 2");
  CHECK(none.trace.collected[2].formula.str() == "result_1 = i_0 - j_0");
  for (std::size_t i = 0; i < 3; ++i) CHECK(none.trace.collected[i].path_index == static_cast<int>(i) + 1);

  Propagation dev9 = propagate(g, ce, {d9});
  REQUIRE(dev9.status == PropagateStatus::Ok);
  CHECK(dev9.trace.decisions ==
        std::vector<DecisionStep>{{d9, Branch::Else, true}, {d11, Branch::Else, false}});
  CHECK(dev9.trace.final_model.at(SsaName{"k", 1}) == 0);
  CHECK(dev9.trace.collected[1].kind == ConstraintKind::SyntheticCopy);
  CHECK_FALSE(path_satisfies_post(dev9.trace, g));

  Propagation dev11 = propagate(g, ce, {d11});
  REQUIRE(dev11.status == PropagateStatus::Ok);
  CHECK(dev11.trace.result == 1);
  CHECK(path_satisfies_post(dev11.trace, g));
}

TEST_CASE("constraint ids follow the numbering scheme") {
  Program p = load_program(corpus::source("absminus"));
  const Cfg& g = p.cfg;
  Counterexample ce = ce_of({{"i", 0}, {"j", 1}});
  auto inputs = input_constraints(g, ce);
  REQUIRE(inputs.size() == 2);
  CHECK(inputs[0].id == 1);
  CHECK(inputs[0].formula.str() == "i_0 = 0");
  CHECK(inputs[1].id == 2);
  Propagation none = propagate(g, ce, {});
  CHECK(none.trace.collected[0].id == 3);
  const int post = postcondition_constraint(g).id;
  CHECK(post > none.trace.collected.back().id);
  Constraint req = requirement_constraint(g, g.decision_order[1], Branch::Then);
  CHECK(req.id > post);
  CHECK(req.kind == ConstraintKind::Guard);
  CHECK(req.formula.str() == "k_1 = 1 && i_0 != j_0");
  CHECK(requirement_constraint(g, g.decision_order[1], Branch::Else).id == req.id + 1);
  CHECK(requirement_constraint(g, g.decision_order[1], Branch::Else).formula.str() == "k_1 != 1 || i_0 = j_0");
}

TEST_CASE("run_localization: AbsMinus") {
  Program p = load_program(corpus::source("absminus"));
  ExplorerConfig cfg;
  Report r = localize(p, ce_of({{"i", 0}, {"j", 1}}), cfg);
  REQUIRE(r.diagnoses.size() == 2);

  const Diagnosis& init = r.diagnoses[0];
  CHECK(init.kind == DiagnosisKind::InitialPath);
  CHECK(init.result == -1);
  REQUIRE(init.mcs.size() == 1);
  CHECK(lines_and_formulas(init.mcs[0]) == Strings{"14: result_1 = i_0 - j_0"});

  const Diagnosis& dev = r.diagnoses[1];
  CHECK(dev.kind == DiagnosisKind::DeviationCorrects);
  REQUIRE(dev.deviated.size() == 1);
  CHECK(dev.deviated[0].line == 11);
  CHECK(dev.deviated[0].taken == Branch::Then);
  CHECK(dev.result == 1);
  REQUIRE(dev.mcs.size() == 2);
  CHECK(lines_and_formulas(dev.mcs[0]) == Strings{"10: k_1 = k_0 + 2"});
  CHECK(lines_and_formulas(dev.mcs[1]) == Strings{"8: k_0 = 0"});

  cfg.mcs.b_mcs = 1;
  Report one = localize(p, ce_of({{"i", 0}, {"j", 1}}), cfg);
  CHECK(one.diagnoses[1].mcs.size() == 1);

  REQUIRE(r.explored.size() == 3);
  CHECK(r.explored[0].outcome == CandidateOutcome::Ignored);
  CHECK(r.explored[0].lines == std::vector<int>{9});
  CHECK(r.explored[1].outcome == CandidateOutcome::Corrected);
  CHECK(r.explored[2].outcome == CandidateOutcome::RejectedMarked);
  CHECK(r.explored[2].solver_checks == 0);
  CHECK(r.statistics.paths_explored == 3);
}

TEST_CASE("run_localization: b_cond = 0 reports only the initial path") {
  Program p = load_program(corpus::source("absminus"));
  ExplorerConfig cfg;
  cfg.b_cond = 0;
  Report r = localize(p, ce_of({{"i", 0}, {"j", 1}}), cfg);
  REQUIRE(r.diagnoses.size() == 1);
  CHECK(r.diagnoses[0].kind == DiagnosisKind::InitialPath);
  CHECK(r.explored.empty());
}

TEST_CASE("run_localization: rejects bad counterexamples") {
  Program p = load_program(corpus::source("absminus"));
  ExplorerConfig cfg;
  CHECK_THROWS_AS(localize(p, ce_of({{"i", 5}, {"j", 3}}), cfg), NothingToLocalize);
  CHECK_THROWS_AS(localize(p, ce_of({{"i", 0}}), cfg), CounterexampleError);
  CHECK_THROWS_AS(localize(p, ce_of({{"i", 0}, {"j", 1}, {"z", 2}}), cfg), CounterexampleError);
  cfg.dom = DomainConfig{-5, 5};
  CHECK_THROWS_AS(localize(p, ce_of({{"i", 0}, {"j", 9}}), cfg), CounterexampleError);
}

TEST_CASE("run_localization: out-of-domain deviation") {
  Program p = load_program(R"(/*@ ensures \result == x + 2; */
int f(int x) {
  int r = x;
  if (x > 0) {
    r = x + 1;
  } else {
    r = x + 100;
  }
  return r;
})");
  ExplorerConfig cfg;
  cfg.dom = DomainConfig{-20, 20};
  Report r = localize(p, ce_of({{"x", 1}}), cfg);
  REQUIRE(r.explored.size() == 1);
  CHECK(r.explored[0].outcome == CandidateOutcome::OutOfDomain);
  CHECK(r.statistics.out_of_domain == 1);
  REQUIRE(r.diagnoses.size() == 1);
  REQUIRE_FALSE(r.diagnoses[0].mcs.empty());
  CHECK(r.diagnoses[0].mcs[0].members.at(0).line == 5);
}

TEST_CASE("run_localization: unique correcting deviation in score") {
  Program p = load_program(corpus::source("score"));
  Report r = localize(p, corpus::counterexample("score"), ExplorerConfig{});
  int corrections = 0;
  for (const Diagnosis& d : r.diagnoses) {
    if (d.kind != DiagnosisKind::DeviationCorrects) continue;
    ++corrections;
    REQUIRE(d.deviated.size() == 1);
    CHECK(d.deviated[0].line == 18);
  }
  CHECK(corrections == 1);
}

TEST_CASE("run_localization: chain of assignments") {
  Program p = load_program(R"(/*@ ensures \result == a + 1; */
int f(int a) {
  int x = a + 1;
  x = x + 1;
  return x;
})");
  Report r = localize(p, ce_of({{"a", 0}}), ExplorerConfig{});
  REQUIRE(r.diagnoses.size() == 1);
  const Diagnosis& d = r.diagnoses[0];
  REQUIRE(d.mcs.size() == 2);
  CHECK(lines_and_formulas(d.mcs[0]) == Strings{"4: x_1 = x_0 + 1"});
  CHECK(lines_and_formulas(d.mcs[1]) == Strings{"3: x_0 = a_0 + 1"});
}

TEST_CASE("incremental and fresh sessions agree") {
  for (const std::string& name : corpus::kPrograms) {
    CAPTURE(name);
    Program p = load_program(corpus::source(name));
    ExplorerConfig inc, fresh;
    fresh.incremental = false;
    Report a = localize(p, corpus::counterexample(name), inc);
    Report b = localize(p, corpus::counterexample(name), fresh);
    CHECK(a.diagnoses == b.diagnoses);
    CHECK(a.explored == b.explored);
    CHECK(a.statistics.paths_explored == b.statistics.paths_explored);
    CHECK(a.statistics.solver_checks == b.statistics.solver_checks);
    CHECK(a.statistics.incremental);
    CHECK_FALSE(b.statistics.incremental);
  }
}

TEST_CASE("corrections and suspects are certified independently") {
  for (const std::string& name : corpus::kPrograms) {
    CAPTURE(name);
    Program p = load_program(corpus::source(name));
    Counterexample ce = corpus::counterexample(name);
    Report r = localize(p, ce, ExplorerConfig{});
    CHECK_FALSE(oracle::post_holds(p.ast, ce.inputs, oracle::run_with_flips(p.ast, ce.inputs, {})));
    for (const Diagnosis& d : r.diagnoses) {
      if (d.kind == DiagnosisKind::DeviationCorrects) {
        std::set<int> flips;
        for (const DeviationRef& x : d.deviated) flips.insert(x.index);
        int64_t result = oracle::run_with_flips(p.ast, ce.inputs, flips);
        CHECK(result == d.result);
        CHECK(oracle::post_holds(p.ast, ce.inputs, result));
      }
      ConstraintSet cs = oracle::diagnosis_system(p.cfg, ce, d);
      for (const McsRef& m : d.mcs) {
        std::vector<int> ids;
        for (const SuspectRef& s : m.members) ids.push_back(s.id);
        CHECK(oracle::certify_with_solver(cs, ids, ExplorerConfig{}.dom) == "");
      }
    }
  }
}
