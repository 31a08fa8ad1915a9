#include "flowloc/solver.hpp"

#include <algorithm>
#include <numeric>

namespace flowloc {
namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
  return q;
}

int64_t clamp64(i128 v) {
  if (v > INT64_MAX) return INT64_MAX;
  if (v < INT64_MIN) return INT64_MIN;
  return static_cast<int64_t>(v);
}

int64_t abs64(int64_t v) { return v < 0 ? -v : v; }

}  // namespace

void DomainConfig::validate() const {
  if (lo > hi) throw Error("empty domain: lo > hi");
  if (lo < -kMaxMagnitude || hi > kMaxMagnitude) {
    throw Error("domain bounds must lie within [-2^40, 2^40]");
  }
}

Solver::Solver(DomainConfig domain) : domain_(domain) { domain_.validate(); }

// ---------------------------------------------------------------------------
// frames

int Solver::push() {
  frames_.push_back(Frame{root_.size(), items_.size(), selectors_.size(), trail_.size(), conflict_});
  return depth();
}

void Solver::pop(int frame) {
  if (frame <= 0) throw Error("cannot pop the base frame");
  if (frame > depth()) throw Error("frame " + std::to_string(frame) + " is not live");
  const Frame f = frames_[static_cast<std::size_t>(frame - 1)];
  frames_.resize(static_cast<std::size_t>(frame - 1));
  while (trail_.size() > f.trail) {
    auto [var, old] = trail_.back();
    root_[static_cast<std::size_t>(var)] = old;
    trail_.pop_back();
  }
  for (std::size_t v = f.vars; v < root_.size(); ++v) {
    if (!is_selector_[v]) index_.erase(names_[v]);
  }
  root_.resize(f.vars);
  names_.resize(f.vars);
  is_selector_.resize(f.vars);
  items_.resize(f.items);
  selectors_.resize(f.selectors);
  conflict_ = f.conflict;
}

// ---------------------------------------------------------------------------
// assertions

int Solver::new_var(Interval dom, bool selector) {
  root_.push_back(dom);
  names_.push_back(SsaName{});
  is_selector_.push_back(selector);
  return static_cast<int>(root_.size() - 1);
}

int Solver::variable(const SsaName& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  int v = new_var(Interval{domain_.lo, domain_.hi}, false);
  names_[static_cast<std::size_t>(v)] = name;
  index_.emplace(name, v);
  return v;
}

Solver::Node Solver::compile_atom(const Formula& atom) {
  // Cancelled variables still belong in the model.
  for (const LinTerm* side : {&atom.lhs, &atom.rhs})
    for (const auto& [name, coef] : side->coefficients()) variable(name);
  LinTerm e = atom.lhs - atom.rhs;
  Node n;
  n.kind = Node::Kind::Atom;
  switch (atom.op) {
    case CmpOp::Lt:  // e < 0  <=>  e + 1 <= 0
      e += LinTerm::constant(1);
      n.rel = Rel::Le;
      break;
    case CmpOp::Le: n.rel = Rel::Le; break;
    case CmpOp::Gt:
      e = e.scaled(-1) + LinTerm::constant(1);
      n.rel = Rel::Le;
      break;
    case CmpOp::Ge:
      e = e.scaled(-1);
      n.rel = Rel::Le;
      break;
    case CmpOp::Eq: n.rel = Rel::Eq; break;
    case CmpOp::Ne: n.rel = Rel::Ne; break;
  }
  n.constant = e.constant_term();
  if (e.is_constant()) {
    bool holds = n.rel == Rel::Le ? n.constant <= 0 : n.rel == Rel::Eq ? n.constant == 0 : n.constant != 0;
    Node c;
    c.kind = holds ? Node::Kind::True : Node::Kind::False;
    return c;
  }
  for (const auto& [name, coef] : e.coefficients()) {
    n.terms.emplace_back(variable(name), coef);
    n.gcd = std::gcd(n.gcd, abs64(coef));
  }
  return n;
}

Solver::Node Solver::compile(const Formula& f) {
  using Kind = Formula::Kind;
  Node n;
  switch (f.kind) {
    case Kind::True: n.kind = Node::Kind::True; return n;
    case Kind::False: n.kind = Node::Kind::False; return n;
    case Kind::Atom: return compile_atom(f);
    case Kind::Not: return compile(negate(f.children.front()));
    case Kind::And:
    case Kind::Or: {
      n.kind = f.kind == Kind::And ? Node::Kind::And : Node::Kind::Or;
      for (const Formula& c : f.children) n.kids.push_back(compile(c));
      return n;
    }
  }
  return n;
}

void Solver::add_item(Item item) {
  items_.push_back(std::move(item));
  ++stats_.assertions;
  root_propagate();
}

void Solver::assert_hard(const Formula& f) { add_item(Item{-1, compile(f)}); }

Selector Solver::assert_soft(const Constraint& c) {
  Node node = compile(c.formula);
  int var = new_var(Interval{0, 1}, true);
  Selector s{c.id, var};
  selectors_.push_back(s);
  add_item(Item{var, std::move(node)});
  return s;
}

void Solver::set_selector(const Selector& s, SelectorState state) {
  Interval want = state == SelectorState::Enabled    ? Interval{1, 1}
                  : state == SelectorState::Disabled ? Interval{0, 0}
                                                     : Interval{0, 1};
  Interval& cur = root_.at(static_cast<std::size_t>(s.var));
  Interval next{std::max(cur.lo, want.lo), std::min(cur.hi, want.hi)};
  if (next.lo > next.hi) {
    conflict_ = true;
    return;
  }
  if (next != cur) {
    trail_.emplace_back(s.var, cur);
    cur = next;
    root_propagate();
  }
}

SelectorState Solver::selector_state(const Selector& s) const {
  const Interval& d = root_.at(static_cast<std::size_t>(s.var));
  if (!d.fixed()) return SelectorState::Free;
  return d.lo == 1 ? SelectorState::Enabled : SelectorState::Disabled;
}

void Solver::assert_at_most_disabled(std::span<const Selector> selectors, int k) {
  if (k < 0) throw Error("cardinality bound must be non-negative");
  // sum(1 - s) <= k   <=>   -sum(s) + (n - k) <= 0
  Node n;
  n.kind = Node::Kind::Atom;
  n.rel = Rel::Le;
  n.constant = static_cast<int64_t>(selectors.size()) - k;
  for (const Selector& s : selectors) n.terms.emplace_back(s.var, -1);
  if (n.terms.empty()) n.kind = n.constant <= 0 ? Node::Kind::True : Node::Kind::False;
  add_item(Item{-1, std::move(n)});
}

void Solver::assert_at_least_one_enabled(std::span<const Selector> selectors) {
  Node n;
  n.kind = Node::Kind::Atom;
  n.rel = Rel::Le;
  n.constant = 1;
  for (const Selector& s : selectors) n.terms.emplace_back(s.var, -1);
  if (n.terms.empty()) n.kind = Node::Kind::False;
  add_item(Item{-1, std::move(n)});
}

void Solver::root_propagate() {
  if (conflict_) return;
  Domains d = root_;
  if (!propagate_all(d, {})) {
    conflict_ = true;
    return;
  }
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (d[v] != root_[v]) {
      trail_.emplace_back(static_cast<int>(v), root_[v]);
      root_[v] = d[v];
    }
  }
}

// ---------------------------------------------------------------------------
// propagation

Solver::Status Solver::status(const Node& n, const Domains& d) const {
  switch (n.kind) {
    case Node::Kind::True: return Status::True;
    case Node::Kind::False: return Status::False;
    case Node::Kind::And: {
      Status s = Status::True;
      for (const Node& k : n.kids) {
        Status ks = status(k, d);
        if (ks == Status::False) return Status::False;
        if (ks == Status::Unknown) s = Status::Unknown;
      }
      return s;
    }
    case Node::Kind::Or: {
      Status s = Status::False;
      for (const Node& k : n.kids) {
        Status ks = status(k, d);
        if (ks == Status::True) return Status::True;
        if (ks == Status::Unknown) s = Status::Unknown;
      }
      return s;
    }
    case Node::Kind::Atom: break;
  }
  i128 mn = n.constant;
  i128 mx = n.constant;
  for (auto [v, a] : n.terms) {
    const Interval& iv = d[static_cast<std::size_t>(v)];
    if (a > 0) {
      mn += static_cast<i128>(a) * iv.lo;
      mx += static_cast<i128>(a) * iv.hi;
    } else {
      mn += static_cast<i128>(a) * iv.hi;
      mx += static_cast<i128>(a) * iv.lo;
    }
  }
  switch (n.rel) {
    case Rel::Le:
      if (mx <= 0) return Status::True;
      if (mn > 0) return Status::False;
      return Status::Unknown;
    case Rel::Eq:
      if (mn > 0 || mx < 0 || n.constant % n.gcd != 0) return Status::False;
      if (mn == mx) return Status::True;
      return Status::Unknown;
    case Rel::Ne:
      if (mn > 0 || mx < 0 || n.constant % n.gcd != 0) return Status::True;
      if (mn == mx) return Status::False;
      return Status::Unknown;
  }
  return Status::Unknown;
}

bool Solver::narrow(Domains& d, int var, int64_t lo, int64_t hi, bool& changed) {
  Interval& iv = d[static_cast<std::size_t>(var)];
  int64_t nlo = std::max(iv.lo, lo);
  int64_t nhi = std::min(iv.hi, hi);
  if (nlo > nhi) return false;
  if (nlo != iv.lo || nhi != iv.hi) {
    iv = Interval{nlo, nhi};
    changed = true;
    ++stats_.propagations;
  }
  return true;
}

// Bounds consistency for  sign * (sum + constant) <= 0.
bool Solver::propagate_linear(const Node& n, int sign, Domains& d, bool& changed) {
  i128 mn = static_cast<i128>(sign) * n.constant;
  for (auto [v, a] : n.terms) {
    const Interval& iv = d[static_cast<std::size_t>(v)];
    i128 s = static_cast<i128>(sign) * a;
    mn += s > 0 ? s * iv.lo : s * iv.hi;
  }
  if (mn > 0) return false;
  for (auto [v, a] : n.terms) {
    const Interval iv = d[static_cast<std::size_t>(v)];
    i128 s = static_cast<i128>(sign) * a;
    i128 term_min = s > 0 ? s * iv.lo : s * iv.hi;
    i128 bound = term_min - mn;  // s * x <= bound
    bool ok = s > 0 ? narrow(d, v, iv.lo, clamp64(floor_div(bound, s)), changed)
                    : narrow(d, v, clamp64(ceil_div(bound, s)), iv.hi, changed);
    if (!ok) return false;
  }
  return true;
}

bool Solver::propagate_ne(const Node& n, Domains& d, bool& changed) {
  if (n.constant % n.gcd != 0) return true;
  int open = -1;
  int64_t open_coef = 0;
  i128 rest = n.constant;
  for (auto [v, a] : n.terms) {
    const Interval& iv = d[static_cast<std::size_t>(v)];
    if (iv.fixed()) {
      rest += static_cast<i128>(a) * iv.lo;
    } else if (open >= 0) {
      return true;  // two open variables: nothing to prune
    } else {
      open = v;
      open_coef = a;
    }
  }
  if (open < 0) return rest != 0;
  // open_coef * x != -rest
  if ((-rest) % open_coef != 0) return true;
  i128 forbidden = (-rest) / open_coef;
  const Interval iv = d[static_cast<std::size_t>(open)];
  if (forbidden == iv.lo) return narrow(d, open, iv.lo + 1, iv.hi, changed);
  if (forbidden == iv.hi) return narrow(d, open, iv.lo, iv.hi - 1, changed);
  return true;
}

bool Solver::propagate_node(const Node& n, Domains& d, bool& changed) {
  switch (n.kind) {
    case Node::Kind::True: return true;
    case Node::Kind::False: return false;
    case Node::Kind::And:
      for (const Node& k : n.kids)
        if (!propagate_node(k, d, changed)) return false;
      return true;
    case Node::Kind::Or: {
      const Node* only = nullptr;
      int open = 0;
      for (const Node& k : n.kids) {
        Status s = status(k, d);
        if (s == Status::True) return true;
        if (s == Status::Unknown) {
          only = &k;
          ++open;
        }
      }
      if (open == 0) return false;
      if (open == 1) return propagate_node(*only, d, changed);
      return true;
    }
    case Node::Kind::Atom:
      switch (n.rel) {
        case Rel::Le: return propagate_linear(n, 1, d, changed);
        case Rel::Eq:
          if (n.constant % n.gcd != 0) return false;
          return propagate_linear(n, 1, d, changed) && propagate_linear(n, -1, d, changed);
        case Rel::Ne: return propagate_ne(n, d, changed);
      }
  }
  return true;
}

bool Solver::propagate_all(Domains& d, const std::vector<const Node*>& forced) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Item& item : items_) {
      if (item.guard >= 0) {
        const Interval& g = d[static_cast<std::size_t>(item.guard)];
        if (g.hi == 0) continue;
        if (g.lo == 0) {
          // Free selector: switch it off once its constraint cannot hold.
          if (status(item.node, d) == Status::False && !narrow(d, item.guard, 0, 0, changed)) {
            return false;
          }
          continue;
        }
      }
      if (!propagate_node(item.node, d, changed)) return false;
    }
    for (const Node* n : forced) {
      if (!propagate_node(*n, d, changed)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// search

const Solver::Node* Solver::find_split(const Node& n, const SearchState& s) const {
  if (std::find(s.split_nodes.begin(), s.split_nodes.end(), &n) != s.split_nodes.end()) {
    return nullptr;
  }
  switch (n.kind) {
    case Node::Kind::Or: return status(n, s.domains) == Status::True ? nullptr : &n;
    case Node::Kind::And:
      if (status(n, s.domains) == Status::True) return nullptr;
      for (const Node& k : n.kids) {
        if (const Node* found = find_split(k, s)) return found;
      }
      return nullptr;
    default: return nullptr;
  }
}

bool Solver::search(SearchState& s) {
  ++stats_.search_nodes;
  if (!propagate_all(s.domains, s.forced)) return false;

  for (const Selector& sel : selectors_) {
    if (s.domains[static_cast<std::size_t>(sel.var)].fixed()) continue;
    SearchState enabled = s;
    enabled.domains[static_cast<std::size_t>(sel.var)] = Interval{1, 1};
    if (search(enabled)) {
      s = std::move(enabled);
      return true;
    }
    s.domains[static_cast<std::size_t>(sel.var)] = Interval{0, 0};
    return search(s);
  }

  const Node* split = nullptr;
  for (const Item& item : items_) {
    if (item.guard >= 0 && s.domains[static_cast<std::size_t>(item.guard)].hi == 0) continue;
    if ((split = find_split(item.node, s))) break;
  }
  for (std::size_t i = 0; !split && i < s.forced.size(); ++i) split = find_split(*s.forced[i], s);
  if (split) {
    for (const Node& kid : split->kids) {
      if (status(kid, s.domains) == Status::False) continue;
      SearchState branch = s;
      branch.forced.push_back(&kid);
      branch.split_nodes.push_back(split);
      if (search(branch)) {
        s = std::move(branch);
        return true;
      }
    }
    return false;
  }

  int var = -1;
  i128 best = 0;
  for (std::size_t v = 0; v < s.domains.size(); ++v) {
    const Interval& iv = s.domains[v];
    if (is_selector_[v] || iv.fixed()) continue;
    i128 size = static_cast<i128>(iv.hi) - iv.lo;
    if (var < 0 || size < best) {
      var = static_cast<int>(v);
      best = size;
    }
  }
  if (var < 0) return true;

  for (;;) {
    const Interval iv = s.domains[static_cast<std::size_t>(var)];
    SearchState branch = s;
    branch.domains[static_cast<std::size_t>(var)] = Interval{iv.lo, iv.lo};
    if (search(branch)) {
      s = std::move(branch);
      return true;
    }
    if (iv.fixed()) return false;
    s.domains[static_cast<std::size_t>(var)].lo = iv.lo + 1;
    if (!propagate_all(s.domains, s.forced)) return false;
  }
}

CheckResult Solver::check() {
  ++stats_.checks;
  CheckResult result;
  if (conflict_) return result;
  SearchState s{root_, {}, {}};
  if (!search(s)) return result;
  result.sat = true;
  for (std::size_t v = 0; v < s.domains.size(); ++v) {
    if (!is_selector_[v]) result.model.emplace(names_[v], s.domains[v].lo);
  }
  for (const Selector& sel : selectors_) {
    if (s.domains[static_cast<std::size_t>(sel.var)].hi == 0) result.disabled.push_back(sel.constraint_id);
  }
  return result;
}

}  // namespace flowloc
