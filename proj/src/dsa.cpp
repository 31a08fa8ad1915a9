#include <map>

#include "flowloc/cfg.hpp"

namespace flowloc {
namespace {

struct Version {
  int number = 0;
  // False when some path reaching this point never assigned the variable.
  bool defined = false;
};

using Env = std::map<std::string, Version>;

class Renamer {
 public:
  explicit Renamer(const Cfg& g) : g_(g) { g_.dsa = true; }

  Cfg run() {
    Env env;
    for (const Param& p : g_.params) env[p.name] = Version{0, true};
    g_.result = SsaName{"\\result", 0};
    region(g_.entry, g_.exit, env);

    auto to_input = [](const SsaName& n) { return SsaName{n.base, 0}; };
    g_.precondition = g_.precondition.renamed(to_input);
    SsaName result = g_.result;
    g_.postcondition = g_.postcondition.renamed([&](const SsaName& n) {
      return n.base == "\\result" ? result : SsaName{n.base, 0};
    });

    int next_id = 1;
    number(g_.entry, g_.exit, next_id);
    return std::move(g_);
  }

 private:
  CfgNode& node(NodeId id) { return g_.nodes[static_cast<std::size_t>(id)]; }

  static SsaName current(const Env& env, const SsaName& n) {
    auto it = env.find(n.base);
    return SsaName{n.base, it == env.end() ? 0 : it->second.number};
  }

  // Renames the nodes from `start` up to (excluding) `stop`. Returns the last
  // node of the region, or -1 when the region is empty.
  NodeId region(NodeId start, NodeId stop, Env& env) {
    NodeId last = -1;
    NodeId id = start;
    while (id != stop) {
      last = id;
      switch (node(id).kind) {
        case NodeKind::Entry: id = node(id).next; break;
        case NodeKind::Exit: return last;
        case NodeKind::Block: {
          block(node(id), env);
          id = node(id).next;
          break;
        }
        case NodeKind::Decision: {
          id = decision(id, env);
          break;
        }
      }
    }
    return last;
  }

  void block(CfgNode& n, Env& env) {
    std::vector<Assignment> renamed;
    for (Assignment a : n.assignments) {
      a.rhs = a.rhs.renamed([&](const SsaName& v) { return current(env, v); });
      if (a.is_return) {
        if (auto v = a.rhs.as_variable()) {
          // `return v;` binds \result to v's current version without a constraint.
          g_.result = *v;
          continue;
        }
        a.target = SsaName{"\\result", 1};
        g_.result = a.target;
        env["\\result"] = Version{1, true};
      } else if (a.declaration) {
        a.target = SsaName{a.target.base, 0};
        env[a.target.base] = Version{0, true};
      } else {
        auto it = env.find(a.target.base);
        int number = it == env.end() ? 1 : it->second.number + 1;
        a.target = SsaName{a.target.base, number};
        env[a.target.base] = Version{number, true};
      }
      renamed.push_back(std::move(a));
    }
    n.assignments = std::move(renamed);
  }

  NodeId decision(NodeId id, Env& env) {
    node(id).guard = node(id).guard.renamed([&](const SsaName& v) { return current(env, v); });
    const NodeId join = node(id).join;
    Env then_env = env;
    NodeId then_last = region(node(id).then_next, join, then_env);
    Env else_env = env;
    NodeId else_last = region(node(id).else_next, join, else_env);

    std::vector<Assignment> then_copies;
    std::vector<Assignment> else_copies;
    Env merged;
    auto copy = [&](const std::string& base, Version from, int to, Branch branch) {
      Assignment a;
      a.target = SsaName{base, to};
      a.rhs = LinTerm::variable(SsaName{base, from.number});
      a.loc = node(id).loc;
      a.synthetic = true;
      a.governor = id;
      a.branch = branch;
      (branch == Branch::Then ? then_copies : else_copies).push_back(std::move(a));
    };
    for (const auto& [base, tv] : then_env) {
      auto it = else_env.find(base);
      if (it == else_env.end()) {
        merged[base] = Version{tv.number, false};
        continue;
      }
      const Version ev = it->second;
      const int top = std::max(tv.number, ev.number);
      if (tv.defined && ev.defined) {
        if (tv.number < top) copy(base, tv, top, Branch::Then);
        if (ev.number < top) copy(base, ev, top, Branch::Else);
        merged[base] = Version{top, true};
      } else {
        merged[base] = Version{top, false};
      }
    }
    for (const auto& [base, ev] : else_env) {
      if (!then_env.count(base)) merged[base] = Version{ev.number, false};
    }

    place(id, Branch::Then, then_last, std::move(then_copies));
    place(id, Branch::Else, else_last, std::move(else_copies));
    env = std::move(merged);
    return join;
  }

  // Appends copies at the end of a branch, creating a block for empty branches.
  void place(NodeId decision, Branch branch, NodeId last, std::vector<Assignment> copies) {
    if (copies.empty()) return;
    if (last >= 0 && node(last).kind == NodeKind::Block) {
      auto& target = node(last).assignments;
      target.insert(target.end(), copies.begin(), copies.end());
      return;
    }
    CfgNode b;
    b.id = static_cast<NodeId>(g_.nodes.size());
    b.kind = NodeKind::Block;
    b.loc = node(decision).loc;
    b.assignments = std::move(copies);
    b.next = node(decision).join;
    g_.nodes.push_back(std::move(b));
    NodeId created = g_.nodes.back().id;
    if (branch == Branch::Then) {
      node(decision).then_next = created;
    } else {
      node(decision).else_next = created;
    }
  }

  // Path-order numbering: then-branch before else-branch, copies last.
  void number(NodeId start, NodeId stop, int& next_id) {
    NodeId id = start;
    while (id != stop) {
      CfgNode& n = node(id);
      switch (n.kind) {
        case NodeKind::Exit: return;
        case NodeKind::Entry: id = n.next; break;
        case NodeKind::Block:
          for (Assignment& a : n.assignments) a.id = next_id++;
          id = n.next;
          break;
        case NodeKind::Decision:
          number(n.then_next, n.join, next_id);
          number(n.else_next, n.join, next_id);
          id = n.join;
          break;
      }
    }
  }

  Cfg g_;
};

}  // namespace

Cfg to_dsa(const Cfg& g) {
  if (g.dsa) return g;
  return Renamer(g).run();
}

}  // namespace flowloc
