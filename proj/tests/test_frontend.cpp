#include <filesystem>
#include <random>

#include "cata/cata.hpp"
#include "cata/emit.hpp"
#include "cata/frontend.hpp"
#include "cata/model.hpp"
#include "cata/print.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cata;
using namespace cata::testing;

namespace {

const char* kRevSpec = ":- spec rev(L,R) ==> is_asorted(L,BL), is_dsorted(R,BR) => (BL=>BR).\n";
const char* kSnocSpec = ":- spec snoc(A,X,C) ==> is_dsorted(A,BA), leq_all(X,A,BX), is_dsorted(C,BC) => ((BA & BX) => BC).\n";

// The reverse program without its two goals.
std::string definite_reverse() {
  std::string t = kReverseText;
  return t.substr(0, t.find("false :-"));
}

std::vector<std::string> printed(const std::vector<Clause>& cls) {
  std::vector<std::string> out;
  for (const auto& c : cls) out.push_back(to_prolog(c));
  return out;
}

int contract_condition(const std::string& spec) {
  try {
    parse_program(definite_reverse() + spec);
  } catch (const ContractError& e) {
    return e.condition();
  }
  return 0;
}

}  // namespace

TEST_CASE("the reverse program parses to 12 definite clauses and 2 goals") {
  SourceProgram p = parse_program(kReverseText);
  CHECK(p.clauses.size() == 14);
  std::size_t goals = 0;
  for (const auto& c : p.clauses) goals += c.is_goal();
  CHECK(goals == 2);
  CHECK(p.contracts.empty());
  CHECK(p.synthetic_preds.empty());
}

TEST_CASE("rev contract directive") {
  SourceProgram p = parse_program(definite_reverse() + kRevSpec);
  REQUIRE(p.contracts.size() == 1);
  const Contract& k = p.contracts[0];
  CHECK(k.pred == "rev");
  REQUIRE(k.z.size() == 2);
  CHECK(k.pre.is_true());
  REQUIRE(k.catas.size() == 2);
  CHECK(k.catas[0].pred == "is_asorted");
  CHECK(k.catas[0].args[0] == k.z[0]);
  CHECK(k.catas[1].pred == "is_dsorted");
  CHECK(k.catas[1].args[0] == k.z[1]);
  REQUIRE(k.post.op() == Op::Implies);
  CHECK(k.post.arg(0) == k.catas[0].args[1]);
  CHECK(k.post.arg(1) == k.catas[1].args[1]);
  CHECK(k.id == "rev@16");
}

TEST_CASE("syntax error at an unclosed parenthesis") {
  CHECK_THROWS_AS(parse_program("p(X :- q."), SyntaxError);
  try {
    parse_program("p(X :- q.");
  } catch (const SyntaxError& e) {
    CHECK(e.where().line == 1);
    CHECK(e.where().column == 2);
  }
}

TEST_CASE("sort inference on the reverse program and count") {
  SourceProgram p = parse_program(kReverseText);
  CHECK(p.signatures.at("rev") == std::vector<Sort>{int_list(), int_list()});
  CHECK(p.signatures.at("leq_all") == std::vector<Sort>{Sort::integer(), int_list(), Sort::boolean()});
  CHECK(p.signatures.at("hd") == std::vector<Sort>{int_list(), Sort::boolean(), Sort::integer()});
  SourceProgram q = parse_program("count(X,[],N) :- N = 0.\ncount(X,[H|T],N) :- count(X,T,NT), N = ite(X=H,NT+1,NT).\n");
  CHECK(q.signatures.at("count") == std::vector<Sort>{Sort::integer(), int_list(), Sort::integer()});
}

TEST_CASE("sort conflict on a variable used as bool and int") {
  CHECK_THROWS_AS(parse_program("p(X) :- X=true, X=0."), SortError);
}

TEST_CASE("user data declarations") {
  SourceProgram p = parse_program(
      ":- data nat = z | s(nat).\n"
      "even(z,B) :- B.\neven(s(N),B) :- B = (~E), even(N,E).\n");
  REQUIRE(p.sorts.find_adt("nat"));
  CHECK(p.signatures.at("even")[0] == Sort::adt("nat"));
  CHECK_THROWS(parse_program(":- data bad = s(bad).\n"));
}

TEST_CASE("the goals of the rev and snoc contracts match the written goals") {
  SourceProgram fig1 = parse_program(kReverseText);
  SourceProgram p = parse_program(definite_reverse() + kRevSpec + kSnocSpec);
  REQUIRE(p.contracts.size() == 2);
  const Clause g13 = contract_to_goal(p.contracts[0]);
  const Clause g14 = contract_to_goal(p.contracts[1]);
  CHECK(g13.is_goal());
  CHECK(to_prolog(g13) == to_prolog(fig1.clauses[12]));
  CHECK(to_prolog(g14) == to_prolog(fig1.clauses[13]));
}

TEST_CASE("contract with postcondition true gives a goal with constraint false") {
  SourceProgram p = parse_program(definite_reverse() + ":- spec rev(L,R) ==> is_asorted(L,BL) => true.\n");
  REQUIRE(p.contracts.size() == 1);
  CHECK(contract_to_goal(p.contracts[0]).constraint.is_false());
  CHECK(p.diagnostics.size() == 1);
}

TEST_CASE("each well-formedness condition has its own rejection") {
  CHECK(contract_condition(":- spec rev(L,L) ==> is_asorted(L,B) => B.\n") == 1);
  CHECK(contract_condition(":- spec rev(L,R) ==> Q>0, is_asorted(L,B) => B.\n") == 2);
  CHECK(contract_condition(":- spec snoc(A,X,C) ==> rev(A,C) => true.\n") == 3);
  CHECK(contract_condition(":- spec rev(L,R) ==> is_asorted(L,B), is_dsorted(R,B) => B.\n") == 4);
  CHECK(contract_condition(":- spec snoc(A,X,C) ==> hd(A,D,X) => true.\n") == 4);
  CHECK(contract_condition(":- spec rev(L,R) ==> is_asorted(M,B) => B.\n") == 5);
  CHECK(contract_condition(":- spec rev(L,R) ==> is_asorted(L,B) => (B & Q).\n") == 6);
  CHECK(contract_condition(kRevSpec) == 0);
}

TEST_CASE("condition i also rejects contracts on catamorphisms once classified") {
  SourceProgram p = parse_program(definite_reverse() + ":- spec hd(L,D,H) ==> is_asorted(L,B) => B.\n");
  const std::set<std::string> catas{"is_asorted", "is_dsorted", "hd", "leq_all"};
  try {
    check_contract(p.contracts[0], p, &catas);
    FAIL("accepted");
  } catch (const ContractError& e) {
    CHECK(e.condition() == 1);
  }
}

TEST_CASE("constructor terms in body atoms become match predicates") {
  SourceProgram p = parse_program("p(X,Y) :- q([X|Y]).\nq([]).\nq([H|T]) :- q(T).\n");
  REQUIRE(!p.synthetic_preds.empty());
  const Clause& c = p.clauses[0];
  for (const auto& a : c.body) {
    for (const auto& t : a.args) CHECK(t.is_var());
  }
}

TEST_CASE("goals with one program atom lift to contracts") {
  SourceProgram p = parse_program(kReverseText);
  std::vector<Clause> remaining;
  const auto ks = lift_goals(p, {"rev", "snoc"}, remaining);
  REQUIRE(ks.size() == 2);
  CHECK(remaining.empty());
  CHECK(ks[0].pred == "rev");
  CHECK(ks[1].pred == "snoc");
  CHECK(ks[0].id == "rev@16");
  CHECK(to_prolog(contract_to_goal(ks[0])) == to_prolog(p.clauses[12]));
}

TEST_CASE("merged contracts keep each postcondition under its precondition") {
  SourceProgram p = parse_program(definite_reverse() + kRevSpec +
                                  ":- spec rev(L,R) ==> X>=0, leq_all(X,L,B1), leq_all(X,R,B2) => (B1 => B2).\n");
  const Contract m = merge_contracts(p.contracts);
  CHECK(m.catas.size() == 4);
  CHECK(m.z == p.contracts[0].z);
  CHECK(m.pre.is_true());
  CHECK(conjuncts(m.post).size() == 2);
}

TEST_CASE("round trip through emit_prolog on every corpus program") {
  for (const auto& f : std::filesystem::directory_iterator(CATA_CORPUS_DIR)) {
    if (f.path().extension() != ".pl") continue;
    CAPTURE(f.path().string());
    SourceProgram p = parse_file(f.path().string());
    SourceProgram q = parse_program(emit_prolog(p));
    CHECK(printed(p.clauses) == printed(q.clauses));
    REQUIRE(p.contracts.size() == q.contracts.size());
    for (std::size_t i = 0; i < p.contracts.size(); ++i) {
      CHECK(to_prolog(contract_to_goal(p.contracts[i])) == to_prolog(contract_to_goal(q.contracts[i])));
    }
    CHECK(p.signatures == q.signatures);
  }
}

TEST_CASE("property: the contract goal body is satisfiable in the bounded model iff K is violated there") {
  std::mt19937 rng(7);
  Bounds b;
  b.depth = 3;
  std::size_t violated = 0;
  std::size_t held = 0;
  for (int i = 0; i < 40; ++i) {
    const RandomProgram rp = random_program(rng);
    CAPTURE(rp.text);
    SourceProgram p = parse_program(rp.text);
    b.depth = p.signatures.at("p")[0] == int_list() ? 3 : 2;
    const GroundModel m = bounded_least_model(definite(p), p.sorts, b);
    for (const auto& k : p.contracts) {
      const bool bad = contract_violated(k, m, b);
      CHECK(body_satisfiable(contract_to_goal(k), m, p.sorts, b) == bad);
      (bad ? violated : held) += 1;
    }
  }
  CHECK(violated > 0);
  CHECK(held > 0);
}

TEST_CASE("contract goals on the reverse contracts") {
  SourceProgram p = parse_file(corpus("reverse.pl"));
  Bounds b;
  b.depth = 3;
  const GroundModel m = bounded_least_model(definite(p), p.sorts, b);
  for (const auto& k : p.contracts) {
    CHECK_FALSE(contract_violated(k, m, b));
    CHECK_FALSE(body_satisfiable(contract_to_goal(k), m, p.sorts, b));
  }
  SourceProgram f = parse_file(corpus("fixtures/reverse_false.pl"));
  const GroundModel mf = bounded_least_model(definite(f), f.sorts, b);
  bool any = false;
  for (const auto& k : f.contracts) {
    const bool bad = contract_violated(k, mf, b);
    CHECK(body_satisfiable(contract_to_goal(k), mf, f.sorts, b) == bad);
    any = any || bad;
  }
  CHECK(any);
}
