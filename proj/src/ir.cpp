#include "flowloc/ir.hpp"

#include <sstream>

namespace flowloc {

std::string SsaName::str() const {
  if (version == kUnversioned) return base;
  return base + "_" + std::to_string(version);
}

// ---------------------------------------------------------------------------
// LinTerm

LinTerm LinTerm::constant(int64_t value) {
  LinTerm t;
  t.constant_ = value;
  return t;
}

LinTerm LinTerm::variable(const SsaName& name, int64_t coefficient) {
  LinTerm t;
  t.add_term(name, coefficient);
  return t;
}

std::optional<SsaName> LinTerm::as_variable() const {
  if (constant_ != 0 || coefficients_.size() != 1) return std::nullopt;
  const auto& [name, coef] = *coefficients_.begin();
  if (coef != 1) return std::nullopt;
  return name;
}

void LinTerm::add_term(const SsaName& name, int64_t coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = coefficients_.try_emplace(name, coefficient);
  if (!inserted) {
    it->second = checked_add(it->second, coefficient);
    if (it->second == 0) coefficients_.erase(it);
  }
}

LinTerm& LinTerm::operator+=(const LinTerm& other) {
  for (const auto& [name, coef] : other.coefficients_) add_term(name, coef);
  constant_ = checked_add(constant_, other.constant_);
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& other) { return *this += other.scaled(-1); }

LinTerm LinTerm::scaled(int64_t factor) const {
  LinTerm t;
  if (factor == 0) return t;
  for (const auto& [name, coef] : coefficients_) t.coefficients_[name] = checked_mul(coef, factor);
  t.constant_ = checked_mul(constant_, factor);
  return t;
}

LinTerm LinTerm::renamed(const std::function<SsaName(const SsaName&)>& rename) const {
  LinTerm t = constant(constant_);
  for (const auto& [name, coef] : coefficients_) t.add_term(rename(name), coef);
  return t;
}

int64_t LinTerm::evaluate(const Model& model) const {
  int64_t sum = constant_;
  for (const auto& [name, coef] : coefficients_) {
    auto it = model.find(name);
    if (it == model.end()) throw Error("unbound variable '" + name.str() + "'");
    sum = checked_add(sum, checked_mul(coef, it->second));
  }
  return sum;
}

namespace {

void append_term(std::ostringstream& out, bool first, int64_t coef, const std::string& name) {
  bool negative = coef < 0;
  uint64_t magnitude = negative ? 0 - static_cast<uint64_t>(coef) : static_cast<uint64_t>(coef);
  if (first) {
    if (negative) out << "-";
  } else {
    out << (negative ? " - " : " + ");
  }
  if (name.empty()) {
    out << magnitude;
  } else {
    if (magnitude != 1) out << magnitude << "*";
    out << name;
  }
}

}  // namespace

std::string LinTerm::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, coef] : coefficients_) {
    if (coef > 0) {
      append_term(out, first, coef, name.str());
      first = false;
    }
  }
  for (const auto& [name, coef] : coefficients_) {
    if (coef < 0) {
      append_term(out, first, coef, name.str());
      first = false;
    }
  }
  if (constant_ != 0 || first) append_term(out, first, constant_, "");
  return out.str();
}

LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }

// ---------------------------------------------------------------------------
// Formula

Formula Formula::truth() { return Formula{}; }

Formula Formula::falsity() {
  Formula f;
  f.kind = Kind::False;
  return f;
}

Formula Formula::atom(CmpOp op, LinTerm lhs, LinTerm rhs) {
  Formula f;
  f.kind = Kind::Atom;
  f.op = op;
  f.lhs = std::move(lhs);
  f.rhs = std::move(rhs);
  return f;
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(parts);
  return f;
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(parts);
  return f;
}

Formula Formula::negation(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::implication(const Formula& premise, Formula conclusion) {
  return disj({negate(premise), std::move(conclusion)});
}

Formula Formula::renamed(const std::function<SsaName(const SsaName&)>& rename) const {
  Formula f = *this;
  if (kind == Kind::Atom) {
    f.lhs = lhs.renamed(rename);
    f.rhs = rhs.renamed(rename);
  }
  for (auto& child : f.children) child = child.renamed(rename);
  return f;
}

void Formula::collect_variables(std::vector<SsaName>& out) const {
  if (kind == Kind::Atom) {
    for (const auto& [name, coef] : lhs.coefficients()) out.push_back(name);
    for (const auto& [name, coef] : rhs.coefficients()) out.push_back(name);
  }
  for (const auto& child : children) child.collect_variables(out);
}

std::string Formula::str() const {
  switch (kind) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom:
      return lhs.str() + " " + std::string(to_string(op)) + " " + rhs.str();
    case Kind::Not: return "!(" + children.front().str() + ")";
    case Kind::And:
    case Kind::Or: {
      const bool is_and = kind == Kind::And;
      std::string out;
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += is_and ? " && " : " || ";
        const Formula& c = children[i];
        // && binds tighter than ||, so only an Or under an And needs parentheses.
        bool parens = is_and ? c.kind == Kind::Or : false;
        out += parens ? "(" + c.str() + ")" : c.str();
      }
      return out;
    }
  }
  return "?";
}

Formula negate(const Formula& f) {
  using Kind = Formula::Kind;
  switch (f.kind) {
    case Kind::True: return Formula::falsity();
    case Kind::False: return Formula::truth();
    case Kind::Atom: return Formula::atom(complement(f.op), f.lhs, f.rhs);
    case Kind::Not: return to_nnf(f.children.front());
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children.size());
      for (const auto& c : f.children) parts.push_back(negate(c));
      return f.kind == Kind::And ? Formula::disj(std::move(parts)) : Formula::conj(std::move(parts));
    }
  }
  return f;
}

Formula to_nnf(const Formula& f) {
  using Kind = Formula::Kind;
  switch (f.kind) {
    case Kind::Not: return negate(f.children.front());
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children.size());
      for (const auto& c : f.children) parts.push_back(to_nnf(c));
      return f.kind == Kind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    default: return f;
  }
}

bool eval_formula(const Formula& f, const Model& model) {
  using Kind = Formula::Kind;
  switch (f.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Not: return !eval_formula(f.children.front(), model);
    case Kind::And:
      for (const auto& c : f.children)
        if (!eval_formula(c, model)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : f.children)
        if (eval_formula(c, model)) return true;
      return false;
    case Kind::Atom: {
      // Compare in 128 bits so that evaluation never overflows on large models.
      __int128 l = f.lhs.constant_term();
      __int128 r = f.rhs.constant_term();
      auto add = [&](const LinTerm& t, __int128& acc) {
        for (const auto& [name, coef] : t.coefficients()) {
          auto it = model.find(name);
          if (it == model.end()) throw Error("unbound variable '" + name.str() + "'");
          acc += static_cast<__int128>(coef) * it->second;
        }
      };
      add(f.lhs, l);
      add(f.rhs, r);
      switch (f.op) {
        case CmpOp::Eq: return l == r;
        case CmpOp::Ne: return l != r;
        case CmpOp::Lt: return l < r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Ge: return l >= r;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Constraints

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Input: return "input";
    case ConstraintKind::Assignment: return "assignment";
    case ConstraintKind::SyntheticCopy: return "synthetic_copy";
    case ConstraintKind::Guard: return "guard";
    case ConstraintKind::Postcondition: return "postcondition";
  }
  return "?";
}

bool is_soft_kind(ConstraintKind kind) {
  return kind == ConstraintKind::Assignment || kind == ConstraintKind::SyntheticCopy;
}

std::string Constraint::str() const { return formula.str() + " @ line " + std::to_string(loc.line); }

Constraint assign_to_constraint(const SsaName& target, const LinTerm& rhs, SourceLoc loc,
                                bool synthetic, int id, int path_index) {
  Constraint c;
  c.id = id;
  c.formula = Formula::atom(CmpOp::Eq, LinTerm::variable(target), rhs);
  c.kind = synthetic ? ConstraintKind::SyntheticCopy : ConstraintKind::Assignment;
  c.loc = loc;
  c.path_index = path_index;
  return c;
}

void ConstraintSet::add(Constraint c) {
  if (is_soft_kind(c.kind)) {
    soft.push_back(std::move(c));
  } else {
    hard.push_back(std::move(c));
  }
}

}  // namespace flowloc
