#include <algorithm>
#include <set>
#include <sstream>

#include "flowloc/cfg.hpp"

namespace flowloc {

std::string_view to_string(Branch b) { return b == Branch::Then ? "then" : "else"; }
Branch opposite(Branch b) { return b == Branch::Then ? Branch::Else : Branch::Then; }

std::string Assignment::str() const { return target.str() + " = " + rhs.str(); }

std::vector<CfgEdge> Cfg::edges() const {
  std::vector<CfgEdge> out;
  for (const CfgNode& n : nodes) {
    switch (n.kind) {
      case NodeKind::Entry:
      case NodeKind::Block: out.push_back({n.id, n.next, CfgEdge::Label::Next}); break;
      case NodeKind::Decision:
        out.push_back({n.id, n.then_next, CfgEdge::Label::Then});
        out.push_back({n.id, n.else_next, CfgEdge::Label::Else});
        break;
      case NodeKind::Exit: break;
    }
  }
  return out;
}

std::size_t Cfg::decision_index(NodeId decision) const {
  auto it = std::find(decision_order.begin(), decision_order.end(), decision);
  if (it == decision_order.end()) throw Error("node " + std::to_string(decision) + " is not a decision");
  return static_cast<std::size_t>(it - decision_order.begin());
}

LinTerm linearize(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return LinTerm::constant(e.value);
    case Expr::Kind::Var: return LinTerm::variable(SsaName{e.name, SsaName::kUnversioned});
    case Expr::Kind::Result: return LinTerm::variable(SsaName{"\\result", SsaName::kUnversioned});
    case Expr::Kind::Neg: return linearize(*e.lhs).scaled(-1);
    case Expr::Kind::Add: return linearize(*e.lhs) + linearize(*e.rhs);
    case Expr::Kind::Sub: return linearize(*e.lhs) - linearize(*e.rhs);
    case Expr::Kind::Mul: {
      LinTerm l = linearize(*e.lhs);
      LinTerm r = linearize(*e.rhs);
      if (l.is_constant()) return r.scaled(l.constant_term());
      if (r.is_constant()) return l.scaled(r.constant_term());
      throw Error("line " + std::to_string(e.loc.line) + ": non-linear term");
    }
  }
  return {};
}

Formula to_formula(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::Literal: return b.value ? Formula::truth() : Formula::falsity();
    case BoolExpr::Kind::Cmp: return Formula::atom(b.op, linearize(*b.a), linearize(*b.b));
    case BoolExpr::Kind::And: return Formula::conj({to_formula(*b.left), to_formula(*b.right)});
    case BoolExpr::Kind::Or: return Formula::disj({to_formula(*b.left), to_formula(*b.right)});
    case BoolExpr::Kind::Not: return Formula::negation(to_formula(*b.left));
    case BoolExpr::Kind::Implies:
      return Formula::implication(to_formula(*b.left), to_formula(*b.right));
  }
  return Formula::truth();
}

namespace {

class Builder {
 public:
  Cfg run(const Function& f) {
    g_.name = f.name;
    g_.params = f.params;
    g_.precondition = f.precondition ? to_formula(*f.precondition) : Formula::truth();
    g_.postcondition = to_formula(*f.postcondition);
    g_.requires_loc = f.requires_loc;
    g_.ensures_loc = f.ensures_loc;
    g_.result = SsaName{"\\result", SsaName::kUnversioned};
    g_.entry = add(NodeKind::Entry, f.loc);
    open_ = {{g_.entry, CfgEdge::Label::Next}};
    statements(f.body);
    g_.exit = add(NodeKind::Exit, f.loc);
    connect(g_.exit);
    return std::move(g_);
  }

 private:
  using Open = std::pair<NodeId, CfgEdge::Label>;

  NodeId add(NodeKind kind, SourceLoc loc) {
    CfgNode n;
    n.id = static_cast<NodeId>(g_.nodes.size());
    n.kind = kind;
    n.loc = loc;
    g_.nodes.push_back(std::move(n));
    return g_.nodes.back().id;
  }

  // Points every dangling edge at `target`; decisions waiting for their join
  // get `target` as join.
  void connect(NodeId target) {
    for (auto [from, label] : open_) {
      CfgNode& n = g_.nodes[static_cast<std::size_t>(from)];
      switch (label) {
        case CfgEdge::Label::Next: n.next = target; break;
        case CfgEdge::Label::Then: n.then_next = target; break;
        case CfgEdge::Label::Else: n.else_next = target; break;
      }
    }
    for (NodeId d : pending_joins_) g_.nodes[static_cast<std::size_t>(d)].join = target;
    pending_joins_.clear();
    open_.clear();
  }

  void emit(Assignment a) {
    if (block_ < 0) {
      block_ = add(NodeKind::Block, a.loc);
      connect(block_);
      open_ = {{block_, CfgEdge::Label::Next}};
    }
    g_.nodes[static_cast<std::size_t>(block_)].assignments.push_back(std::move(a));
  }

  // Gives a branch a single exit edge so that every decision has its own join.
  void funnel(SourceLoc loc) {
    if (open_.size() > 1) {
      NodeId b = add(NodeKind::Block, loc);
      connect(b);
      open_ = {{b, CfgEdge::Label::Next}};
    }
    block_ = -1;
  }

  void statements(const std::vector<Stmt>& stmts) {
    for (const Stmt& s : stmts) {
      switch (s.kind) {
        case Stmt::Kind::Decl:
          if (s.expr) {
            Assignment a;
            a.target = SsaName{s.name, SsaName::kUnversioned};
            a.rhs = linearize(*s.expr);
            a.loc = s.loc;
            a.declaration = true;
            emit(std::move(a));
          }
          break;
        case Stmt::Kind::Assign: {
          Assignment a;
          a.target = SsaName{s.name, SsaName::kUnversioned};
          a.rhs = linearize(*s.expr);
          a.loc = s.loc;
          emit(std::move(a));
          break;
        }
        case Stmt::Kind::Return: {
          Assignment a;
          a.target = g_.result;
          a.rhs = linearize(*s.expr);
          a.loc = s.loc;
          a.is_return = true;
          emit(std::move(a));
          break;
        }
        case Stmt::Kind::If: {
          block_ = -1;
          NodeId d = add(NodeKind::Decision, s.loc);
          g_.nodes[static_cast<std::size_t>(d)].guard = to_formula(*s.cond);
          connect(d);
          g_.decision_order.push_back(d);

          open_ = {{d, CfgEdge::Label::Then}};
          statements(s.then_body);
          funnel(s.loc);
          std::vector<Open> then_open = std::move(open_);

          open_ = {{d, CfgEdge::Label::Else}};
          statements(s.else_body);
          funnel(s.loc);
          std::vector<Open> else_open = std::move(open_);

          open_ = std::move(then_open);
          open_.insert(open_.end(), else_open.begin(), else_open.end());
          pending_joins_.push_back(d);
          block_ = -1;
          break;
        }
      }
    }
  }

  Cfg g_;
  std::vector<Open> open_;
  std::vector<NodeId> pending_joins_;
  NodeId block_ = -1;
};

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Cfg build_cfg(const Function& f) { return Builder().run(f); }

std::vector<std::vector<NodeId>> enumerate_paths(const Cfg& g, std::size_t limit) {
  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> current;
  auto walk = [&](NodeId id, auto& self) -> void {
    current.push_back(id);
    const CfgNode& n = g.node(id);
    switch (n.kind) {
      case NodeKind::Exit:
        if (paths.size() >= limit) throw Error("path enumeration limit exceeded");
        paths.push_back(current);
        break;
      case NodeKind::Decision:
        self(n.then_next, self);
        self(n.else_next, self);
        break;
      default: self(n.next, self); break;
    }
    current.pop_back();
  };
  walk(g.entry, walk);
  return paths;
}

std::vector<SsaName> path_reassignments(const Cfg& g, std::size_t path_limit) {
  std::set<SsaName> repeated;
  for (const auto& path : enumerate_paths(g, path_limit)) {
    std::set<SsaName> seen;
    for (NodeId id : path) {
      for (const Assignment& a : g.node(id).assignments) {
        if (!seen.insert(a.target).second) repeated.insert(a.target);
      }
    }
  }
  return {repeated.begin(), repeated.end()};
}

std::string to_dot(const Cfg& g) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(g.name) << "\" {\n";
  out << "  node [fontname=\"Courier\"];\n";
  for (const CfgNode& n : g.nodes) {
    out << "  n" << n.id << " [";
    switch (n.kind) {
      case NodeKind::Entry: out << "shape=oval, label=\"entry\""; break;
      case NodeKind::Exit: {
        out << "shape=oval, label=\"exit\\lensures " << dot_escape(g.postcondition.str())
            << "   (line " << g.ensures_loc.line << ")\\l\"";
        break;
      }
      case NodeKind::Block: {
        out << "shape=box, label=\"";
        if (n.assignments.empty()) out << "(no assignments)";
        for (const Assignment& a : n.assignments) {
          out << dot_escape(a.str()) << "   (line " << a.loc.line
              << (a.synthetic ? ", synthetic" : "") << ")\\l";
        }
        out << "\"";
        break;
      }
      case NodeKind::Decision:
        out << "shape=diamond, label=\"" << dot_escape(n.guard.str()) << "\\nline " << n.loc.line
            << "\"";
        break;
    }
    out << "];\n";
  }
  for (const CfgEdge& e : g.edges()) {
    out << "  n" << e.from << " -> n" << e.to;
    if (e.label == CfgEdge::Label::Then) out << " [label=\"then\"]";
    if (e.label == CfgEdge::Label::Else) out << " [label=\"else\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace flowloc
