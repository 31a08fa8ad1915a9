#include "flowloc/mcs.hpp"

#include <algorithm>
#include <map>

namespace flowloc {

void McsConfig::validate() const {
  if (b_mcs < 1) throw Error("b_mcs must be at least 1");
  if (k_max < 1) throw Error("k_max must be at least 1");
}

std::string_view to_string(McsStatus s) {
  switch (s) {
    case McsStatus::Ok: return "ok";
    case McsStatus::HardUnsat: return "hard_unsat";
    case McsStatus::Satisfiable: return "satisfiable";
  }
  return "ok";
}

namespace {

bool check_with_all(Solver& solver, const std::vector<Selector>& selectors, SelectorState state) {
  int frame = solver.push();
  for (const Selector& s : selectors) solver.set_selector(s, state);
  bool sat = solver.check().sat;
  solver.pop(frame);
  return sat;
}

}  // namespace

McsResult enumerate_mcs(Solver& solver, const std::vector<Constraint>& soft,
                        const std::vector<Selector>& selectors, const McsConfig& config) {
  config.validate();
  if (soft.size() != selectors.size()) throw Error("soft constraints and selectors differ in length");

  McsResult result;
  const uint64_t checks_before = solver.stats().checks;
  const int base = solver.push();

  std::map<int, int> path_index;
  std::map<int, Selector> by_id;
  for (std::size_t i = 0; i < soft.size(); ++i) {
    path_index[soft[i].id] = soft[i].path_index;
    by_id[selectors[i].constraint_id] = selectors[i];
  }

  if (!check_with_all(solver, selectors, SelectorState::Disabled)) {
    result.status = McsStatus::HardUnsat;
  } else if (check_with_all(solver, selectors, SelectorState::Enabled)) {
    result.status = McsStatus::Satisfiable;
  } else {
    // Path positions of the members, latest first; larger sorts earlier.
    auto key = [&](const Mcs& m) {
      std::vector<int> k;
      for (int id : m.members) k.push_back(path_index[id]);
      std::sort(k.rbegin(), k.rend());
      return k;
    };
    const int top = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.k_max), soft.size()));
    for (int k = 1; k <= top; ++k) {
      const int level_frame = solver.push();
      solver.assert_at_most_disabled(selectors, k);
      std::vector<Mcs> level;
      std::vector<std::vector<Selector>> blocks;
      for (;;) {
        CheckResult r = solver.check();
        if (!r.sat) break;
        Mcs m{r.disabled};
        std::sort(m.members.begin(), m.members.end());
        std::vector<Selector> block;
        for (int id : m.members) block.push_back(by_id.at(id));
        solver.assert_at_least_one_enabled(block);
        level.push_back(std::move(m));
        blocks.push_back(std::move(block));
      }
      solver.pop(level_frame);
      for (const auto& block : blocks) solver.assert_at_least_one_enabled(block);

      std::sort(level.begin(), level.end(), [&](const Mcs& a, const Mcs& b) {
        auto ka = key(a);
        auto kb = key(b);
        if (ka != kb) return ka > kb;
        return a.members < b.members;
      });
      for (Mcs& m : level) {
        if (static_cast<int>(result.mcs.size()) >= config.b_mcs) break;
        result.mcs.push_back(std::move(m));
      }
      if (static_cast<int>(result.mcs.size()) >= config.b_mcs) break;
    }
  }

  solver.pop(base);
  result.checks = solver.stats().checks - checks_before;
  return result;
}

McsResult enumerate_mcs(const ConstraintSet& cs, const McsConfig& config, const DomainConfig& dom) {
  Solver solver(dom);
  for (const Constraint& c : cs.hard) solver.assert_hard(c.formula);
  std::vector<Selector> selectors;
  for (const Constraint& c : cs.soft) selectors.push_back(solver.assert_soft(c));
  return enumerate_mcs(solver, cs.soft, selectors, config);
}

}  // namespace flowloc
