#include <set>
#include <sstream>

#include "flowloc/frontend.hpp"

namespace flowloc {
namespace {

// ---------------------------------------------------------------------------
// typecheck

bool variable_free(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return true;
    case Expr::Kind::Var:
    case Expr::Kind::Result: return false;
    case Expr::Kind::Neg: return variable_free(*e.lhs);
    default: return variable_free(*e.lhs) && variable_free(*e.rhs);
  }
}

enum class Context { Body, Precondition, Postcondition };

class Checker {
 public:
  explicit Checker(const Function& f) : f_(f) {
    for (const Param& p : f.params) {
      if (!declared_.insert(p.name).second) {
        report(p.loc, "duplicate declaration of '" + p.name + "'");
      }
      params_.insert(p.name);
    }
  }

  std::vector<Diagnostic> run() {
    if (f_.precondition) check_bool(*f_.precondition, {}, {}, Context::Precondition);
    if (f_.postcondition) check_bool(*f_.postcondition, {}, {}, Context::Postcondition);
    std::set<std::string> visible(params_.begin(), params_.end());
    std::set<std::string> assigned = visible;
    check_stmts(f_.body, visible, assigned);
    return std::move(diags_);
  }

 private:
  void report(SourceLoc loc, std::string message) {
    diags_.push_back(Diagnostic{loc, std::move(message)});
  }

  void check_expr(const Expr& e, const std::set<std::string>& visible,
                  const std::set<std::string>& assigned, Context ctx) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return;
      case Expr::Kind::Result:
        if (ctx != Context::Postcondition) {
          report(e.loc, "\\result may only appear in the postcondition");
        }
        return;
      case Expr::Kind::Var:
        if (ctx != Context::Body) {
          if (!params_.count(e.name)) {
            report(e.loc, "annotation refers to '" + e.name + "', which is not a parameter");
          }
        } else if (!visible.count(e.name)) {
          report(e.loc, "undeclared variable '" + e.name + "'");
        } else if (!assigned.count(e.name)) {
          report(e.loc, "variable '" + e.name + "' may be used before it is assigned");
        }
        return;
      case Expr::Kind::Neg: check_expr(*e.lhs, visible, assigned, ctx); return;
      case Expr::Kind::Mul:
        if (!variable_free(*e.lhs) && !variable_free(*e.rhs)) {
          report(e.loc, "non-linear term: product of two non-constant expressions");
        }
        [[fallthrough]];
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
        check_expr(*e.lhs, visible, assigned, ctx);
        check_expr(*e.rhs, visible, assigned, ctx);
        return;
    }
  }

  void check_bool(const BoolExpr& b, const std::set<std::string>& visible,
                  const std::set<std::string>& assigned, Context ctx) {
    switch (b.kind) {
      case BoolExpr::Kind::Literal: return;
      case BoolExpr::Kind::Cmp:
        check_expr(*b.a, visible, assigned, ctx);
        check_expr(*b.b, visible, assigned, ctx);
        return;
      case BoolExpr::Kind::Not: check_bool(*b.left, visible, assigned, ctx); return;
      case BoolExpr::Kind::Implies:
        if (ctx == Context::Body) report(b.loc, "'==>' may only appear in annotations");
        [[fallthrough]];
      case BoolExpr::Kind::And:
      case BoolExpr::Kind::Or:
        check_bool(*b.left, visible, assigned, ctx);
        check_bool(*b.right, visible, assigned, ctx);
        return;
    }
  }

  void check_stmts(const std::vector<Stmt>& stmts, std::set<std::string>& visible,
                   std::set<std::string>& assigned) {
    for (const Stmt& s : stmts) {
      switch (s.kind) {
        case Stmt::Kind::Decl:
          if (s.expr) check_expr(*s.expr, visible, assigned, Context::Body);
          if (!declared_.insert(s.name).second) {
            report(s.loc, "duplicate declaration of '" + s.name + "'");
          }
          visible.insert(s.name);
          if (s.expr) assigned.insert(s.name);
          break;
        case Stmt::Kind::Assign:
          check_expr(*s.expr, visible, assigned, Context::Body);
          if (!visible.count(s.name)) {
            report(s.loc, "assignment to undeclared variable '" + s.name + "'");
          }
          assigned.insert(s.name);
          break;
        case Stmt::Kind::Return: check_expr(*s.expr, visible, assigned, Context::Body); break;
        case Stmt::Kind::If: {
          check_bool(*s.cond, visible, assigned, Context::Body);
          std::set<std::string> then_visible = visible, then_assigned = assigned;
          check_stmts(s.then_body, then_visible, then_assigned);
          std::set<std::string> else_visible = visible, else_assigned = assigned;
          check_stmts(s.else_body, else_visible, else_assigned);
          for (const std::string& name : then_assigned) {
            if (else_assigned.count(name) && visible.count(name)) assigned.insert(name);
          }
          break;
        }
      }
    }
  }

  const Function& f_;
  std::set<std::string> params_;
  std::set<std::string> declared_;
  std::vector<Diagnostic> diags_;
};

// ---------------------------------------------------------------------------
// printer

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 5;
    case Expr::Kind::Mul: return 6;
    default: return 7;
  }
}

int precedence(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::Implies: return 1;
    case BoolExpr::Kind::Or: return 2;
    case BoolExpr::Kind::And: return 3;
    case BoolExpr::Kind::Cmp: return 4;
    default: return 7;
  }
}

std::string print(const Expr& e);

std::string wrap(const Expr& e, bool parens) { return parens ? "(" + print(e) + ")" : print(e); }

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return std::to_string(e.value);
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Result: return "\\result";
    case Expr::Kind::Neg: {
      bool atomic = e.lhs->kind == Expr::Kind::IntLit || e.lhs->kind == Expr::Kind::Var ||
                    e.lhs->kind == Expr::Kind::Result;
      return "-" + wrap(*e.lhs, !atomic);
    }
    default: {
      int p = precedence(e);
      const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - " : " * ";
      return wrap(*e.lhs, precedence(*e.lhs) < p) + op + wrap(*e.rhs, precedence(*e.rhs) <= p);
    }
  }
}

std::string print(const BoolExpr& b);

std::string wrap(const BoolExpr& b, bool parens) { return parens ? "(" + print(b) + ")" : print(b); }

std::string print(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::Literal: return b.value ? "true" : "false";
    case BoolExpr::Kind::Cmp: {
      std::string op = b.op == CmpOp::Eq ? "==" : std::string(to_string(b.op));
      return print(*b.a) + " " + op + " " + print(*b.b);
    }
    case BoolExpr::Kind::Not: return "!" + wrap(*b.left, precedence(*b.left) < 7);
    case BoolExpr::Kind::Implies:
      return wrap(*b.left, precedence(*b.left) <= 1) + " ==> " + wrap(*b.right, precedence(*b.right) < 1);
    default: {
      int p = precedence(b);
      const char* op = b.kind == BoolExpr::Kind::And ? " && " : " || ";
      return wrap(*b.left, precedence(*b.left) < p) + op + wrap(*b.right, precedence(*b.right) <= p);
    }
  }
}

void print_stmts(std::ostringstream& out, const std::vector<Stmt>& stmts, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const Stmt& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        out << pad << "int " << s.name;
        if (s.expr) out << " = " << print(*s.expr);
        out << ";\n";
        break;
      case Stmt::Kind::Assign: out << pad << s.name << " = " << print(*s.expr) << ";\n"; break;
      case Stmt::Kind::Return: out << pad << "return " << print(*s.expr) << ";\n"; break;
      case Stmt::Kind::If:
        out << pad << "if (" << print(*s.cond) << ") {\n";
        print_stmts(out, s.then_body, indent + 2);
        out << pad << "}";
        if (!s.else_body.empty()) {
          out << " else {\n";
          print_stmts(out, s.else_body, indent + 2);
          out << pad << "}";
        }
        out << "\n";
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// structural equality

bool same(const ExprPtr& a, const ExprPtr& b);
bool same(const BoolExprPtr& a, const BoolExprPtr& b);

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && a->value == b->value && a->name == b->name && same(a->lhs, b->lhs) &&
         same(a->rhs, b->rhs);
}

bool same(const BoolExprPtr& a, const BoolExprPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && a->value == b->value && a->op == b->op && same(a->a, b->a) &&
         same(a->b, b->b) && same(a->left, b->left) && same(a->right, b->right);
}

bool same(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Stmt& x = a[i];
    const Stmt& y = b[i];
    if (x.kind != y.kind || x.name != y.name || !same(x.expr, y.expr) || !same(x.cond, y.cond) ||
        !same(x.then_body, y.then_body) || !same(x.else_body, y.else_body)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// interpreter

struct Env {
  std::map<std::string, int64_t> values;
  std::optional<int64_t> result;
};

int64_t eval(const Expr& e, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return e.value;
    case Expr::Kind::Var: {
      auto it = env.values.find(e.name);
      if (it == env.values.end()) throw Error("unbound variable '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::Result:
      if (!env.result) throw Error("\\result is unbound");
      return *env.result;
    case Expr::Kind::Neg: return checked_neg(eval(*e.lhs, env));
    case Expr::Kind::Add: return checked_add(eval(*e.lhs, env), eval(*e.rhs, env));
    case Expr::Kind::Sub: return checked_sub(eval(*e.lhs, env), eval(*e.rhs, env));
    case Expr::Kind::Mul: return checked_mul(eval(*e.lhs, env), eval(*e.rhs, env));
  }
  return 0;
}

bool eval(const BoolExpr& b, const Env& env) {
  switch (b.kind) {
    case BoolExpr::Kind::Literal: return b.value;
    case BoolExpr::Kind::Cmp: {
      int64_t x = eval(*b.a, env);
      int64_t y = eval(*b.b, env);
      switch (b.op) {
        case CmpOp::Eq: return x == y;
        case CmpOp::Ne: return x != y;
        case CmpOp::Lt: return x < y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Gt: return x > y;
        case CmpOp::Ge: return x >= y;
      }
      return false;
    }
    case BoolExpr::Kind::And: return eval(*b.left, env) && eval(*b.right, env);
    case BoolExpr::Kind::Or: return eval(*b.left, env) || eval(*b.right, env);
    case BoolExpr::Kind::Not: return !eval(*b.left, env);
    case BoolExpr::Kind::Implies: return !eval(*b.left, env) || eval(*b.right, env);
  }
  return false;
}

std::optional<int64_t> exec(const std::vector<Stmt>& stmts, Env& env) {
  for (const Stmt& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        if (s.expr) env.values[s.name] = eval(*s.expr, env);
        break;
      case Stmt::Kind::Assign: env.values[s.name] = eval(*s.expr, env); break;
      case Stmt::Kind::If:
        if (auto r = exec(eval(*s.cond, env) ? s.then_body : s.else_body, env)) return r;
        break;
      case Stmt::Kind::Return: return eval(*s.expr, env);
    }
  }
  return std::nullopt;
}

Env input_env(const Function& f, const Inputs& inputs) {
  Env env;
  for (const Param& p : f.params) {
    auto it = inputs.find(p.name);
    if (it == inputs.end()) throw Error("missing input value for parameter '" + p.name + "'");
    env.values[p.name] = it->second;
  }
  return env;
}

}  // namespace

std::vector<Diagnostic> typecheck(const Function& f) { return Checker(f).run(); }

std::string print_program(const Function& f) {
  std::ostringstream out;
  int indent = 0;
  if (!f.class_name.empty()) {
    out << "class " << f.class_name << " {\n";
    indent = 2;
  }
  std::string pad(static_cast<std::size_t>(indent), ' ');
  out << pad << "/*@";
  if (f.precondition) out << " requires " << print(*f.precondition) << ";\n" << pad << "  @";
  out << " ensures " << print(*f.postcondition) << "; */\n";
  out << pad << "int " << f.name << "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i > 0) out << ", ";
    out << "int " << f.params[i].name;
  }
  out << ") {\n";
  print_stmts(out, f.body, indent + 2);
  out << pad << "}\n";
  if (!f.class_name.empty()) out << "}\n";
  return out.str();
}

bool same_function(const Function& a, const Function& b) {
  if (a.name != b.name || a.class_name != b.class_name || a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name) return false;
  }
  return same(a.precondition, b.precondition) && same(a.postcondition, b.postcondition) &&
         same(a.body, b.body);
}

int64_t interpret(const Function& f, const Inputs& inputs) {
  Env env = input_env(f, inputs);
  auto r = exec(f.body, env);
  if (!r) throw Error("function " + f.name + " finished without returning");
  return *r;
}

bool satisfies_postcondition(const Function& f, const Inputs& inputs, int64_t result) {
  Env env = input_env(f, inputs);
  env.result = result;
  return eval(*f.postcondition, env);
}

bool satisfies_precondition(const Function& f, const Inputs& inputs) {
  if (!f.precondition) return true;
  return eval(*f.precondition, input_env(f, inputs));
}

}  // namespace flowloc
