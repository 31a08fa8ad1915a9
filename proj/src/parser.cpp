#include <cctype>
#include <charconv>
#include <optional>
#include <set>

#include "flowloc/frontend.hpp"

namespace flowloc {
namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident,
  Int,
  Result,  // \result
  AnnotOpen,
  AnnotClose,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Comma,
  Assign,      // =
  PlusAssign,  // +=
  MinusAssign, // -=
  PlusPlus,
  MinusMinus,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Bang,
  AndAnd,
  OrOr,
  Implies,  // ==>
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t value = 0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia(out);
      SourceLoc loc = here();
      if (at_end()) {
        if (in_annotation_) throw ParseError(loc, "unterminated annotation comment");
        out.push_back(Token{Tok::End, "", 0, loc});
        return out;
      }
      if (in_annotation_ && peek() == '*' && peek(1) == '/') {
        advance(2);
        in_annotation_ = false;
        line_annotation_ = false;
        out.push_back(Token{Tok::AnnotClose, "*/", 0, loc});
        continue;
      }
      out.push_back(next_token(loc));
    }
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  SourceLoc here() const { return SourceLoc{line_, column_}; }
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && !at_end(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_trivia(std::vector<Token>& out) {
    for (;;) {
      if (at_end()) return;
      char c = peek();
      if (line_annotation_ && c == '\n') {
        // A `//@` annotation ends at the end of its line.
        out.push_back(Token{Tok::AnnotClose, "", 0, here()});
        line_annotation_ = false;
        in_annotation_ = false;
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (in_annotation_ && c == '@') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        if (peek(2) == '@' && !in_annotation_) {
          out.push_back(Token{Tok::AnnotOpen, "//@", 0, here()});
          advance(3);
          in_annotation_ = true;
          line_annotation_ = true;
          continue;
        }
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        if (in_annotation_) throw ParseError(here(), "nested comment inside annotation");
        if (peek(2) == '@') {
          out.push_back(Token{Tok::AnnotOpen, "/*@", 0, here()});
          advance(3);
          in_annotation_ = true;
          continue;
        }
        SourceLoc start = here();
        advance(2);
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw ParseError(start, "unterminated comment");
        advance(2);
      } else {
        return;
      }
    }
  }

  Token next_token(SourceLoc loc) {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return number(loc);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      return Token{Tok::Ident, std::string(text_.substr(start, pos_ - start)), 0, loc};
    }
    if (c == '\\') {
      std::size_t start = pos_;
      advance();
      while (std::isalpha(static_cast<unsigned char>(peek()))) advance();
      std::string word(text_.substr(start, pos_ - start));
      if (word == "\\result") return Token{Tok::Result, word, 0, loc};
      throw ParseError(loc, "unsupported construct: '" + word + "'");
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    auto make = [&](Tok kind, std::size_t len) {
      Token t{kind, std::string(text_.substr(pos_, len)), 0, loc};
      advance(len);
      return t;
    };
    if (c == '=' && peek(1) == '=' && peek(2) == '>') return make(Tok::Implies, 3);
    if (two('=', '=')) return make(Tok::EqEq, 2);
    if (two('!', '=')) return make(Tok::NotEq, 2);
    if (two('<', '=')) return make(Tok::Le, 2);
    if (two('>', '=')) return make(Tok::Ge, 2);
    if (two('&', '&')) return make(Tok::AndAnd, 2);
    if (two('|', '|')) return make(Tok::OrOr, 2);
    if (two('+', '=')) return make(Tok::PlusAssign, 2);
    if (two('-', '=')) return make(Tok::MinusAssign, 2);
    if (two('+', '+')) return make(Tok::PlusPlus, 2);
    if (two('-', '-')) return make(Tok::MinusMinus, 2);
    switch (c) {
      case '{': return make(Tok::LBrace, 1);
      case '}': return make(Tok::RBrace, 1);
      case '(': return make(Tok::LParen, 1);
      case ')': return make(Tok::RParen, 1);
      case ';': return make(Tok::Semi, 1);
      case ',': return make(Tok::Comma, 1);
      case '=': return make(Tok::Assign, 1);
      case '<': return make(Tok::Lt, 1);
      case '>': return make(Tok::Gt, 1);
      case '+': return make(Tok::Plus, 1);
      case '-': return make(Tok::Minus, 1);
      case '*': return make(Tok::Star, 1);
      case '/': return make(Tok::Slash, 1);
      case '%': return make(Tok::Percent, 1);
      case '!': return make(Tok::Bang, 1);
      default: break;
    }
    throw ParseError(loc, std::string("unexpected character '") + c + "'");
  }

  Token number(SourceLoc loc) {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    char c = peek();
    if (c == '.' || c == 'e' || c == 'E' || c == 'f' || c == 'F' || c == 'd' || c == 'D') {
      throw ParseError(loc, "unsupported construct: float literal");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      throw ParseError(loc, "malformed number");
    }
    std::string_view digits = text_.substr(start, pos_ - start);
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw ParseError(loc, "integer literal out of 64-bit range");
    }
    return Token{Tok::Int, std::string(digits), value, loc};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  bool in_annotation_ = false;
  bool line_annotation_ = false;
};

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> kLoopKeywords = {"while", "for", "do"};
const std::set<std::string> kUnsupportedTypes = {"float",  "double", "boolean", "long", "short",
                                                 "char",   "byte",   "void",    "String"};
const std::set<std::string> kModifiers = {"public", "private", "protected", "static", "final"};
const std::set<std::string> kReserved = {"class", "int",   "if",    "else", "return", "while",
                                         "for",   "do",    "true",  "false", "public", "private",
                                         "protected", "static", "final"};

// Untyped expression tree; converted to Expr/BoolExpr once the shape is known.
struct PNode {
  enum class Kind { Int, Var, Result, BoolLit, Neg, Not, Binary };
  Kind kind = Kind::Int;
  Tok op = Tok::End;
  int64_t value = 0;
  std::string name;
  std::vector<PNode> kids;
  SourceLoc loc;
};

bool is_bool_op(Tok t) {
  switch (t) {
    case Tok::EqEq:
    case Tok::NotEq:
    case Tok::Lt:
    case Tok::Le:
    case Tok::Gt:
    case Tok::Ge:
    case Tok::Assign:
    case Tok::AndAnd:
    case Tok::OrOr:
    case Tok::Implies: return true;
    default: return false;
  }
}

bool is_bool_node(const PNode& n) {
  switch (n.kind) {
    case PNode::Kind::BoolLit:
    case PNode::Kind::Not: return true;
    case PNode::Kind::Binary: return is_bool_op(n.op);
    default: return false;
  }
}

CmpOp cmp_of(Tok t) {
  switch (t) {
    case Tok::EqEq:
    case Tok::Assign: return CmpOp::Eq;
    case Tok::NotEq: return CmpOp::Ne;
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Le: return CmpOp::Le;
    case Tok::Gt: return CmpOp::Gt;
    case Tok::Ge: return CmpOp::Ge;
    default: return CmpOp::Eq;
  }
}

ExprPtr to_expr(const PNode& n);
BoolExprPtr to_bool(const PNode& n);

ExprPtr to_expr(const PNode& n) {
  if (is_bool_node(n)) throw ParseError(n.loc, "expected an integer expression, found a condition");
  auto e = std::make_shared<Expr>();
  e->loc = n.loc;
  switch (n.kind) {
    case PNode::Kind::Int:
      e->kind = Expr::Kind::IntLit;
      e->value = n.value;
      break;
    case PNode::Kind::Var:
      e->kind = Expr::Kind::Var;
      e->name = n.name;
      break;
    case PNode::Kind::Result: e->kind = Expr::Kind::Result; break;
    case PNode::Kind::Neg:
      e->kind = Expr::Kind::Neg;
      e->lhs = to_expr(n.kids[0]);
      break;
    case PNode::Kind::Binary:
      e->kind = n.op == Tok::Plus ? Expr::Kind::Add : n.op == Tok::Minus ? Expr::Kind::Sub : Expr::Kind::Mul;
      e->lhs = to_expr(n.kids[0]);
      e->rhs = to_expr(n.kids[1]);
      break;
    default: break;
  }
  return e;
}

BoolExprPtr to_bool(const PNode& n) {
  if (!is_bool_node(n)) throw ParseError(n.loc, "expected a condition, found an integer expression");
  auto b = std::make_shared<BoolExpr>();
  b->loc = n.loc;
  switch (n.kind) {
    case PNode::Kind::BoolLit:
      b->kind = BoolExpr::Kind::Literal;
      b->value = n.value != 0;
      break;
    case PNode::Kind::Not:
      b->kind = BoolExpr::Kind::Not;
      b->left = to_bool(n.kids[0]);
      break;
    default:
      switch (n.op) {
        case Tok::AndAnd:
        case Tok::OrOr:
        case Tok::Implies:
          b->kind = n.op == Tok::AndAnd ? BoolExpr::Kind::And
                    : n.op == Tok::OrOr ? BoolExpr::Kind::Or
                                        : BoolExpr::Kind::Implies;
          b->left = to_bool(n.kids[0]);
          b->right = to_bool(n.kids[1]);
          break;
        default:
          b->kind = BoolExpr::Kind::Cmp;
          b->op = cmp_of(n.op);
          b->a = to_expr(n.kids[0]);
          b->b = to_expr(n.kids[1]);
          break;
      }
  }
  return b;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, bool formula_mode)
      : toks_(std::move(tokens)), formula_mode_(formula_mode) {}

  Function program() {
    Function f;
    if (is_word("class")) {
      next();
      f.class_name = expect(Tok::Ident, "class name").text;
      expect(Tok::LBrace, "'{'");
      function(f);
      expect(Tok::RBrace, "'}' closing the class");
    } else {
      function(f);
    }
    if (!at(Tok::End)) throw ParseError(cur().loc, "expected a single function per file");
    return f;
  }

  PNode expression() { return implies(); }

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }

 private:
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_word(std::string_view w) const { return at(Tok::Ident) && cur().text == w; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) throw ParseError(cur().loc, "expected " + std::string(what) + found());
    return next();
  }
  std::string found() const {
    if (at(Tok::End)) return ", found end of input";
    return ", found '" + cur().text + "'";
  }

  // --- declarations -------------------------------------------------------

  void annotation(Function& f) {
    expect(Tok::AnnotOpen, "annotation");
    while (!accept(Tok::AnnotClose)) {
      if (!at(Tok::Ident)) throw ParseError(cur().loc, "expected 'requires' or 'ensures'" + found());
      Token clause = next();
      if (clause.text != "requires" && clause.text != "ensures") {
        throw ParseError(clause.loc, "unsupported annotation clause '" + clause.text + "'");
      }
      PNode node = expression();
      BoolExprPtr cond = to_bool(node);
      if (!accept(Tok::Semi) && !at(Tok::AnnotClose)) {
        throw ParseError(cur().loc, "expected ';' after annotation clause" + found());
      }
      BoolExprPtr& slot = clause.text == "requires" ? f.precondition : f.postcondition;
      SourceLoc& loc = clause.text == "requires" ? f.requires_loc : f.ensures_loc;
      if (slot) {
        auto both = std::make_shared<BoolExpr>();
        both->kind = BoolExpr::Kind::And;
        both->left = slot;
        both->right = cond;
        both->loc = slot->loc;
        slot = both;
      } else {
        slot = cond;
        loc = clause.loc;
      }
    }
  }

  void function(Function& f) {
    while (at(Tok::AnnotOpen) || (at(Tok::Ident) && kModifiers.count(cur().text))) {
      if (at(Tok::AnnotOpen)) {
        annotation(f);
      } else {
        next();
      }
    }
    f.loc = cur().loc;
    return_type();
    f.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      do {
        type_name();
        Token name = expect(Tok::Ident, "parameter name");
        check_identifier(name);
        f.params.push_back(Param{name.text, name.loc});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    SourceLoc body_loc = cur().loc;
    f.body = block();
    if (!f.postcondition) throw ParseError(f.loc, "missing 'ensures' annotation for " + f.name);
    check_return_placement(f.body, body_loc);
  }

  void return_type() {
    if (!at(Tok::Ident)) throw ParseError(cur().loc, "expected 'int'" + found());
    if (kUnsupportedTypes.count(cur().text)) {
      throw ParseError(cur().loc, "unsupported construct: type '" + cur().text + "'");
    }
    if (cur().text != "int") throw ParseError(cur().loc, "expected 'int'" + found());
    next();
  }

  void type_name() { return_type(); }

  void check_identifier(const Token& name) {
    if (kReserved.count(name.text)) {
      throw ParseError(name.loc, "'" + name.text + "' is a reserved word");
    }
  }

  static void check_return_placement(const std::vector<Stmt>& body, SourceLoc body_loc) {
    auto nested_return = [](const std::vector<Stmt>& stmts, auto& self) -> const Stmt* {
      for (const Stmt& s : stmts) {
        if (s.kind == Stmt::Kind::Return) return &s;
        if (s.kind == Stmt::Kind::If) {
          if (const Stmt* r = self(s.then_body, self)) return r;
          if (const Stmt* r = self(s.else_body, self)) return r;
        }
      }
      return nullptr;
    };
    for (const Stmt& s : body) {
      if (s.kind == Stmt::Kind::If) {
        const Stmt* r = nested_return(s.then_body, nested_return);
        if (!r) r = nested_return(s.else_body, nested_return);
        if (r) throw ParseError(r->loc, "return inside a conditional branch is not supported");
      }
    }
    if (body.empty() || body.back().kind != Stmt::Kind::Return) {
      throw ParseError(body_loc, "function must end with a return statement");
    }
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
      if (body[i].kind == Stmt::Kind::Return) {
        throw ParseError(body[i].loc, "return must be the last statement of the function");
      }
    }
  }

  // --- statements ---------------------------------------------------------

  std::vector<Stmt> block() {
    expect(Tok::LBrace, "'{'");
    std::vector<Stmt> out;
    while (!accept(Tok::RBrace)) {
      if (at(Tok::End)) throw ParseError(cur().loc, "expected '}'" + found());
      statement(out);
    }
    return out;
  }

  std::vector<Stmt> body() {
    if (at(Tok::LBrace)) return block();
    std::vector<Stmt> out;
    statement(out);
    return out;
  }

  void statement(std::vector<Stmt>& out) {
    const Token& t = cur();
    if (at(Tok::LBrace)) {
      for (Stmt& s : block()) out.push_back(std::move(s));
      return;
    }
    if (at(Tok::Semi)) {
      next();
      return;
    }
    if (!at(Tok::Ident)) throw ParseError(t.loc, "expected a statement" + found());
    if (kLoopKeywords.count(t.text)) throw ParseError(t.loc, "unsupported construct: loop");
    if (kUnsupportedTypes.count(t.text)) {
      throw ParseError(t.loc, "unsupported construct: type '" + t.text + "'");
    }
    Stmt s;
    s.loc = t.loc;
    if (t.text == "int") {
      next();
      Token name = expect(Tok::Ident, "variable name");
      check_identifier(name);
      s.kind = Stmt::Kind::Decl;
      s.name = name.text;
      if (accept(Tok::Assign)) s.expr = to_expr(expression());
      expect(Tok::Semi, "';'");
    } else if (t.text == "if") {
      next();
      s.kind = Stmt::Kind::If;
      expect(Tok::LParen, "'('");
      s.cond = to_bool(expression());
      expect(Tok::RParen, "')'");
      s.then_body = body();
      if (is_word("else")) {
        next();
        s.else_body = body();
      }
    } else if (t.text == "return") {
      next();
      s.kind = Stmt::Kind::Return;
      s.expr = to_expr(expression());
      expect(Tok::Semi, "';'");
    } else if (t.text == "else") {
      throw ParseError(t.loc, "'else' without 'if'");
    } else {
      Token name = next();
      check_identifier(name);
      s.kind = Stmt::Kind::Assign;
      s.name = name.text;
      auto var = std::make_shared<Expr>();
      var->kind = Expr::Kind::Var;
      var->name = name.text;
      var->loc = name.loc;
      auto binary = [&](Expr::Kind kind, ExprPtr rhs) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        e->lhs = var;
        e->rhs = std::move(rhs);
        e->loc = name.loc;
        return e;
      };
      auto one = [&]() {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::IntLit;
        e->value = 1;
        e->loc = name.loc;
        return e;
      };
      if (accept(Tok::Assign)) {
        s.expr = to_expr(expression());
      } else if (accept(Tok::PlusAssign)) {
        s.expr = binary(Expr::Kind::Add, to_expr(expression()));
      } else if (accept(Tok::MinusAssign)) {
        s.expr = binary(Expr::Kind::Sub, to_expr(expression()));
      } else if (accept(Tok::PlusPlus)) {
        s.expr = binary(Expr::Kind::Add, one());
      } else if (accept(Tok::MinusMinus)) {
        s.expr = binary(Expr::Kind::Sub, one());
      } else {
        throw ParseError(cur().loc, "expected '=' after '" + name.text + "'" + found());
      }
      expect(Tok::Semi, "';'");
    }
    out.push_back(std::move(s));
  }

  // --- expressions --------------------------------------------------------

  static PNode binary(Tok op, PNode l, PNode r, SourceLoc loc) {
    PNode n;
    n.kind = PNode::Kind::Binary;
    n.op = op;
    n.loc = loc;
    n.kids.push_back(std::move(l));
    n.kids.push_back(std::move(r));
    return n;
  }

  PNode implies() {
    PNode l = disjunction();
    if (at(Tok::Implies)) {
      next();
      PNode r = implies();
      SourceLoc loc = l.loc;
      return binary(Tok::Implies, std::move(l), std::move(r), loc);
    }
    return l;
  }

  PNode disjunction() {
    PNode l = conjunction();
    while (at(Tok::OrOr)) {
      next();
      PNode r = conjunction();
      SourceLoc loc = l.loc;
      l = binary(Tok::OrOr, std::move(l), std::move(r), loc);
    }
    return l;
  }

  PNode conjunction() {
    PNode l = comparison();
    while (at(Tok::AndAnd)) {
      next();
      PNode r = comparison();
      SourceLoc loc = l.loc;
      l = binary(Tok::AndAnd, std::move(l), std::move(r), loc);
    }
    return l;
  }

  bool at_comparison() const {
    switch (cur().kind) {
      case Tok::EqEq:
      case Tok::NotEq:
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge: return true;
      case Tok::Assign: return formula_mode_;
      default: return false;
    }
  }

  PNode comparison() {
    PNode l = additive();
    if (at_comparison()) {
      Tok op = next().kind;
      PNode r = additive();
      SourceLoc loc = l.loc;
      PNode n = binary(op, std::move(l), std::move(r), loc);
      if (at_comparison()) throw ParseError(cur().loc, "chained comparisons are not supported");
      return n;
    }
    return l;
  }

  PNode additive() {
    PNode l = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Tok op = next().kind;
      PNode r = multiplicative();
      SourceLoc loc = l.loc;
      l = binary(op, std::move(l), std::move(r), loc);
    }
    return l;
  }

  PNode multiplicative() {
    PNode l = unary();
    for (;;) {
      if (at(Tok::Slash) || at(Tok::Percent)) {
        throw ParseError(cur().loc, "unsupported construct: division");
      }
      if (!at(Tok::Star)) return l;
      next();
      PNode r = unary();
      SourceLoc loc = l.loc;
      l = binary(Tok::Star, std::move(l), std::move(r), loc);
    }
  }

  PNode unary() {
    SourceLoc loc = cur().loc;
    if (accept(Tok::Minus)) {
      PNode n;
      n.kind = PNode::Kind::Neg;
      n.loc = loc;
      n.kids.push_back(unary());
      return n;
    }
    if (accept(Tok::Plus)) return unary();
    if (accept(Tok::Bang)) {
      PNode n;
      n.kind = PNode::Kind::Not;
      n.loc = loc;
      n.kids.push_back(unary());
      return n;
    }
    return primary();
  }

  PNode primary() {
    const Token& t = cur();
    PNode n;
    n.loc = t.loc;
    switch (t.kind) {
      case Tok::Int:
        n.kind = PNode::Kind::Int;
        n.value = t.value;
        next();
        return n;
      case Tok::Result:
        n.kind = PNode::Kind::Result;
        next();
        return n;
      case Tok::LParen: {
        next();
        PNode inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        if (t.text == "true" || t.text == "false") {
          n.kind = PNode::Kind::BoolLit;
          n.value = t.text == "true";
          next();
          return n;
        }
        if (kReserved.count(t.text)) {
          throw ParseError(t.loc, "unexpected keyword '" + t.text + "' in expression");
        }
        n.kind = PNode::Kind::Var;
        n.name = t.text;
        next();
        if (at(Tok::LParen)) throw ParseError(cur().loc, "unsupported construct: method call");
        return n;
      default: break;
    }
    throw ParseError(t.loc, "expected an expression" + found());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool formula_mode_;
};

// --- formula conversion ----------------------------------------------------

SsaName split_versioned(const std::string& name) {
  auto underscore = name.rfind('_');
  if (underscore != std::string::npos && underscore > 0 && underscore + 1 < name.size()) {
    std::string_view suffix(name.data() + underscore + 1, name.size() - underscore - 1);
    int version = 0;
    auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), version);
    if (ec == std::errc() && ptr == suffix.data() + suffix.size()) {
      return SsaName{name.substr(0, underscore), version};
    }
  }
  return SsaName{name, 0};
}

LinTerm formula_term(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return LinTerm::constant(e.value);
    case Expr::Kind::Var: return LinTerm::variable(split_versioned(e.name));
    case Expr::Kind::Result: return LinTerm::variable(SsaName{"\\result", 0});
    case Expr::Kind::Neg: return formula_term(*e.lhs).scaled(-1);
    case Expr::Kind::Add: return formula_term(*e.lhs) + formula_term(*e.rhs);
    case Expr::Kind::Sub: return formula_term(*e.lhs) - formula_term(*e.rhs);
    case Expr::Kind::Mul: {
      LinTerm l = formula_term(*e.lhs);
      LinTerm r = formula_term(*e.rhs);
      if (l.is_constant()) return r.scaled(l.constant_term());
      if (r.is_constant()) return l.scaled(r.constant_term());
      throw ParseError(e.loc, "non-linear term");
    }
  }
  return {};
}

Formula formula_of(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::Literal: return b.value ? Formula::truth() : Formula::falsity();
    case BoolExpr::Kind::Cmp: return Formula::atom(b.op, formula_term(*b.a), formula_term(*b.b));
    case BoolExpr::Kind::And: return Formula::conj({formula_of(*b.left), formula_of(*b.right)});
    case BoolExpr::Kind::Or: return Formula::disj({formula_of(*b.left), formula_of(*b.right)});
    case BoolExpr::Kind::Not: return Formula::negation(formula_of(*b.left));
    case BoolExpr::Kind::Implies:
      return Formula::implication(formula_of(*b.left), formula_of(*b.right));
  }
  return Formula::truth();
}

}  // namespace

Function parse_program(std::string_view text) {
  Parser parser(Lexer(text).run(), /*formula_mode=*/false);
  return parser.program();
}

Formula parse_formula(std::string_view text) {
  Parser parser(Lexer(text).run(), /*formula_mode=*/true);
  PNode node = parser.expression();
  if (!parser.at(Tok::End)) throw ParseError(parser.cur().loc, "unexpected trailing input");
  return formula_of(*to_bool(node));
}

}  // namespace flowloc
