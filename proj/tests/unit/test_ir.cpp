#include <doctest.h>

#include "../support/oracle.hpp"
#include "flowloc/frontend.hpp"
#include "flowloc/ir.hpp"

using namespace flowloc;

namespace {

SsaName n(const char* base, int version) { return SsaName{base, version}; }
LinTerm var(const char* base, int version) { return LinTerm::variable(n(base, version)); }
LinTerm k(int64_t c) { return LinTerm::constant(c); }

// Every valuation of x_0..x_{vars-1} over [-4, 4].
template <class F>
void all_models(int vars, F&& visit) {
  std::vector<int64_t> v(static_cast<std::size_t>(vars), -4);
  while (true) {
    Model m;
    for (int i = 0; i < vars; ++i) m[SsaName{"x", i}] = v[static_cast<std::size_t>(i)];
    visit(m);
    int i = vars - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == 4) v[static_cast<std::size_t>(i--)] = -4;
    if (i < 0) return;
    ++v[static_cast<std::size_t>(i)];
  }
}

bool has_not(const Formula& f) {
  if (f.kind == Formula::Kind::Not) return true;
  for (const Formula& c : f.children)
    if (has_not(c)) return true;
  return false;
}

}  // namespace

TEST_CASE("assign_to_constraint") {
  Constraint c = assign_to_constraint(n("k", 1), var("k", 0) + k(2), SourceLoc{10, 7}, false);
  CHECK(c.kind == ConstraintKind::Assignment);
  CHECK(c.str() == "k_1 = k_0 + 2 @ line 10");

  Constraint copy = assign_to_constraint(n("x", 1), var("x", 0), SourceLoc{4, 3}, true);
  CHECK(copy.kind == ConstraintKind::SyntheticCopy);
  CHECK(copy.formula.str() == "x_1 = x_0");

  Constraint r = assign_to_constraint(n("r", 1), var("j", 0) - var("i", 0), SourceLoc{12, 9}, false);
  CHECK(r.formula.str() == "r_1 = j_0 - i_0");
}

TEST_CASE("ConstraintSet partitions by kind") {
  ConstraintSet cs;
  Constraint input;
  input.kind = ConstraintKind::Input;
  Constraint guard;
  guard.kind = ConstraintKind::Guard;
  Constraint post;
  post.kind = ConstraintKind::Postcondition;
  cs.add(input);
  cs.add(guard);
  cs.add(post);
  cs.add(assign_to_constraint(n("a", 1), k(0), {}, false));
  cs.add(assign_to_constraint(n("a", 2), var("a", 1), {}, true));
  CHECK(cs.hard.size() == 3);
  CHECK(cs.soft.size() == 2);
}

TEST_CASE("LinTerm canonical form") {
  LinTerm a = var("x", 0) + var("y", 0) - var("x", 0) + k(3);
  LinTerm b = k(1) + var("y", 0) + k(2);
  CHECK(a == b);
  CHECK(a.coefficients().size() == 1);
  CHECK((var("x", 0) - var("x", 0)).is_constant());
  CHECK((var("x", 0).scaled(2) + var("y", 0).scaled(-1)).str() == "2*x_0 - y_0");
  CHECK((k(0) - var("x", 0) - k(3)).str() == "-x_0 - 3");
  CHECK(k(0).str() == "0");
}

TEST_CASE("negate: examples") {
  Formula guard = Formula::conj({Formula::atom(CmpOp::Eq, var("k", 1), k(1)),
                                 Formula::atom(CmpOp::Ne, var("i", 0), var("j", 0))});
  Formula expected = Formula::disj({Formula::atom(CmpOp::Ne, var("k", 1), k(1)),
                                    Formula::atom(CmpOp::Eq, var("i", 0), var("j", 0))});
  CHECK(negate(guard) == expected);
  CHECK(negate(Formula::truth()) == Formula::falsity());
  Formula nn = Formula::negation(Formula::negation(guard));
  CHECK(to_nnf(nn) == guard);
  CHECK(negate(Formula::atom(CmpOp::Lt, var("a", 0), k(2))).op == CmpOp::Ge);
  CHECK(negate(Formula::atom(CmpOp::Le, var("a", 0), k(2))).op == CmpOp::Gt);
}

TEST_CASE("eval_formula: examples") {
  Model ce{{n("i", 0), 0}, {n("j", 0), 1}};
  CHECK(eval_formula(Formula::atom(CmpOp::Le, var("i", 0), var("j", 0)), ce));
  Model after{{n("k", 1), 2}, {n("i", 0), 0}, {n("j", 0), 1}};
  CHECK_FALSE(eval_formula(parse_formula("k_1 = 1 && i_0 != j_0"), after));
  for (int64_t x : {-3, 0, 8}) CHECK(eval_formula(Formula::atom(CmpOp::Eq, var("x", 0), var("x", 0)), Model{{n("x", 0), x}}));
  CHECK_THROWS_AS(eval_formula(Formula::atom(CmpOp::Eq, var("x", 0), k(1)), Model{}), Error);
}

TEST_CASE("property: negate is complement and involution on [-4,4]") {
  oracle::Generator gen(7);
  for (int round = 0; round < 300; ++round) {
    const int vars = gen.uniform(1, 3);
    Formula f = gen.formula(vars, 3);
    Formula nf = negate(f);
    Formula nnf = negate(nf);
    CHECK_FALSE(has_not(nf));
    CHECK_FALSE(has_not(nnf));
    all_models(vars, [&](const Model& m) {
      bool value = eval_formula(f, m);
      if (eval_formula(nf, m) == value || eval_formula(nnf, m) != value) {
        FAIL_CHECK("negation mismatch for " << f.str());
      }
    });
  }
}

TEST_CASE("formula rendering") {
  Formula f = Formula::conj({Formula::disj({Formula::atom(CmpOp::Lt, var("a", 0), k(1)),
                                            Formula::atom(CmpOp::Ge, var("b", 0), k(2))}),
                             Formula::atom(CmpOp::Ne, var("a", 0), var("b", 0))});
  CHECK(f.str() == "(a_0 < 1 || b_0 >= 2) && a_0 != b_0");
  CHECK(Formula::negation(Formula::atom(CmpOp::Eq, var("a", 0), k(0))).str() == "!(a_0 = 0)");
}
