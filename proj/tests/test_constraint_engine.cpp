#include <random>

#include "cata/constraint.hpp"
#include "cata/frontend.hpp"
#include "cata/print.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cata;
using namespace cata::testing;

namespace {

/// Parses `c` as the body constraint of `q(vars)`; returns the constraint
/// and the head variables in order.
std::pair<Term, std::vector<Term>> constraint(const std::string& vars, const std::string& c) {
  SourceProgram p = parse_program("q(" + vars + ") :- " + c + ".");
  return {p.clauses[0].constraint, p.clauses[0].head->args};
}

SmtSession& session() {
  static SmtSession s(SmtSession::Options{});
  return s;
}

Term random_literal(std::mt19937& rng, const std::vector<Term>& xs) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const Term& a = xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))];
  const Term b = pick(2) ? xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))] : Term::int_const(pick(5) - 2);
  static const Op ops[] = {Op::Le, Op::Lt, Op::Ge, Op::Gt, Op::Eq};
  const Op op = ops[pick(5)];
  if (op == Op::Eq) return mk_eq(a, mk_add(b, Term::int_const(pick(3))));
  return mk_cmp(op, a, b);
}

Term random_conjunction(std::mt19937& rng, const std::vector<Term>& xs, int n) {
  std::vector<Term> lits;
  for (int i = 0; i < n; ++i) lits.push_back(random_literal(rng, xs));
  return mk_and(std::move(lits));
}

}  // namespace

TEST_CASE("is_sat examples") {
  SmtOracle o(session());
  CHECK(o.is_sat(constraint("X", "X>0 & X<0").first) == SatResult::Unsat);
  CHECK(o.is_sat(constraint("B,B1", "B & ~B1 & (B1=B)").first) == SatResult::Unsat);
  // A constraint from unfolding the recursive rev clause.
  CHECK(o.is_sat(constraint("A,G,D,H,I", "A=(G=>((D=<H) & I))").first) == SatResult::Sat);
  CHECK(o.is_sat(Term::truth()) == SatResult::Sat);
  CHECK(o.is_sat(Term::falsity()) == SatResult::Unsat);
}

TEST_CASE("entails examples") {
  SmtOracle o(session());
  auto [c, xs] = constraint("X", "X=1");
  const Term x = xs[0];
  CHECK(o.entails(c, mk_cmp(Op::Gt, x, Term::int_const(0))) == Entailment::Yes);
  CHECK(o.entails(Term::truth(), mk_cmp(Op::Gt, x, Term::int_const(0))) == Entailment::No);
  const Term y = Term::fresh_var("Y", Sort::integer());
  // X=1 |= exists Y. Y>X
  CHECK(o.entails(c, mk_cmp(Op::Gt, y, x), {y}) == Entailment::Yes);
  // X=1 does not entail forall-chosen Y=X+5 & Y<3
  CHECK(o.entails(c, mk_and(mk_eq(y, mk_add(x, Term::int_const(5))), mk_cmp(Op::Lt, y, Term::int_const(3))), {y}) ==
        Entailment::No);
}

TEST_CASE("entailment with an existential enabling Constraint Addition") {
  SmtOracle o(session());
  // e: I & (K & J => B) with the precondition an existential over a fresh Z.
  auto [e, vs] = constraint("I,K,J,B", "I & ((K & J) => B)");
  const Term z = Term::fresh_var("Z", Sort::boolean());
  CHECK(o.entails(e, mk_or({z, mk_not(z)}), {z}) == Entailment::Yes);
  CHECK(o.entails(e, mk_and(z, vs[0]), {z}) == Entailment::Yes);
  CHECK(o.entails(e, mk_and(z, mk_not(vs[0])), {z}) == Entailment::No);
}

TEST_CASE("project examples") {
  auto [c, xs] = constraint("X,Y", "X=Y & Y>0");
  const Term p = project(c, {xs[0]});
  SmtOracle o(session());
  CHECK(o.entails(c, p) == Entailment::Yes);
  for (const auto& v : vars_of(p)) CHECK(v == xs[0]);
  CHECK(o.entails(p, mk_cmp(Op::Gt, xs[0], Term::int_const(0))) == Entailment::Yes);
  CHECK(project(Term::truth(), {}).is_true());
  // The rev goal constraint projected onto the empty input tuple.
  CHECK(project(constraint("BL,BR", "BL & ~BR").first, {}).is_true());
}

TEST_CASE("widen examples") {
  SmtOracle o(session());
  auto [c1, xs] = constraint("X", "X>0 & X<5");
  Substitution s;
  auto [c2, ys] = constraint("X", "X>0 & X<7");
  s.set(ys[0], xs[0]);
  const Term w = widen(c1, s.apply(c2), o);
  CHECK(w == mk_cmp(Op::Gt, xs[0], Term::int_const(0)));
  CHECK(widen(c1, c1, o) == c1);
  auto [e1, e1v] = constraint("X", "X=1");
  Substitution s2;
  auto [e2, e2v] = constraint("X", "X=2");
  s2.set(e2v[0], e1v[0]);
  CHECK(widen(e1, s2.apply(e2), o).is_true());
}

TEST_CASE("conjunctive view keeps non-conjunctive structure as one residue") {
  auto [c, xs] = constraint("X,Y,B", "X>0 & (Y>0 | B) & ~B & (X=<Y => B)");
  const ConjunctiveView v = conjunctive_view(c);
  CHECK(v.literals.size() == 2);
  CHECK_FALSE(v.residue.is_true());
  CHECK(conjunctive_view(Term::truth()).literals.empty());
}

TEST_CASE("property: projection is entailed and mentions only the kept variables") {
  SmtOracle o(session());
  std::mt19937 rng(11);
  std::vector<Term> xs;
  for (const char* n : {"X", "Y", "Z", "W"}) xs.push_back(Term::fresh_var(n, Sort::integer()));
  for (int i = 0; i < 60; ++i) {
    const Term c = random_conjunction(rng, xs, 1 + i % 5);
    std::vector<Term> keep(xs.begin(), xs.begin() + 1 + i % 3);
    const Term p = project(c, keep);
    CAPTURE(debug_string(c));
    CAPTURE(debug_string(p));
    CHECK(o.entails(c, p) == Entailment::Yes);
    for (const auto& v : vars_of(p)) CHECK(std::find(keep.begin(), keep.end(), v) != keep.end());
    CHECK(project(c, keep) == p);
  }
}

TEST_CASE("property: widening is entailed by both sides and stabilizes") {
  SmtOracle o(session());
  std::mt19937 rng(5);
  std::vector<Term> xs;
  for (const char* n : {"X", "Y", "Z"}) xs.push_back(Term::fresh_var(n, Sort::integer()));
  for (int i = 0; i < 40; ++i) {
    const Term c1 = random_conjunction(rng, xs, 2 + i % 4);
    const Term c2 = random_conjunction(rng, xs, 2 + i % 3);
    const Term w = widen(c1, c2, o);
    CAPTURE(debug_string(c1));
    CAPTURE(debug_string(c2));
    if (o.is_sat(c1) == SatResult::Sat) CHECK(o.entails(c1, w) == Entailment::Yes);
    CHECK(o.entails(c2, w) == Entailment::Yes);
    CHECK(widen(c1, c2, o) == w);
  }
  for (int chain = 0; chain < 20; ++chain) {
    Term w = random_conjunction(rng, xs, 4);
    const std::size_t bound = conjunctive_view(w).literals.size() + 1;
    std::size_t steps = 0;
    std::size_t stable = 0;
    while (stable < 3 && steps < 50) {
      const Term next = widen(w, random_conjunction(rng, xs, 3), o);
      if (next == w) {
        ++stable;
      } else {
        CHECK(conjunctive_view(next).literals.size() < conjunctive_view(w).literals.size() + (w.is_true() ? 0 : 1));
        stable = 0;
        ++steps;
      }
      w = next;
    }
    CHECK(steps <= bound);
  }
}

TEST_CASE("recorded answers replay to the same answers") {
  SmtOracle inner(session());
  RecordingOracle rec(inner);
  auto [c, xs] = constraint("X,Y", "X>Y & Y>0");
  const Term d = mk_cmp(Op::Gt, xs[0], Term::int_const(1));
  const SatResult a1 = rec.is_sat(c);
  const Entailment a2 = rec.entails(c, d);
  const Entailment a3 = rec.entails(Term::truth(), d);
  const std::string log = rec.take();
  CHECK(log == "syn");
  CHECK(rec.take().empty());
  ReplayOracle rep(log);
  CHECK(rep.is_sat(c) == a1);
  CHECK(rep.entails(c, d) == a2);
  CHECK(rep.entails(Term::truth(), d) == a3);
  CHECK(rep.exhausted());
  CHECK_THROWS(rep.is_sat(c));
}

TEST_CASE("repeated queries hit the cache") {
  SmtSession s(SmtSession::Options{});
  SmtOracle o(s);
  auto [c, xs] = constraint("X", "X>3");
  o.is_sat(c);
  o.is_sat(c);
  CHECK(s.stats().queries == 2);
  CHECK(s.stats().cache_hits == 1);
  CHECK(s.stats().solver_calls == 1);
}

TEST_CASE("a missing solver binary is reported") {
  SmtSession::Options opts;
  opts.solver = "/nonexistent/z3";
  SmtSession s(opts);
  SmtOracle o(s);
  CHECK_THROWS_AS(o.is_sat(constraint("X", "X>3").first), SolverUnavailable);
}
