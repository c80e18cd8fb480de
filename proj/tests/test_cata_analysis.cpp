#include <algorithm>
#include <filesystem>
#include <random>

#include "cata/cata.hpp"
#include "cata/constraint.hpp"
#include "cata/frontend.hpp"
#include "cata/model.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cata;
using namespace cata::testing;

namespace {

const char* kReverseClauses[] = {
    "rev([],[]).",
    "rev([H|T],R) :- rev(T,S), snoc(S,H,R).",
    "snoc([],X,[X]).",
    "snoc([X|Xs],Y,[X|Zs]) :- snoc(Xs,Y,Zs).",
    "is_asorted([],Res) :- Res.",
    "is_asorted([H|T],Res) :- Res = (IsDefHdT => (H=<HdT & ResT)), hd(T,IsDefHdT,HdT), is_asorted(T,ResT).",
    "is_dsorted([],Res) :- Res.",
    "is_dsorted([H|T],Res) :- Res = (IsDefHdT => (H>=HdT & ResT)), hd(T,IsDefHdT,HdT), is_dsorted(T,ResT).",
    "hd([],IsDefHd,Hd) :- ~IsDefHd & Hd=0.",
    "hd([H|T],IsDefHd,Hd) :- IsDefHd & Hd=H.",
    "leq_all(X,[],Res) :- Res.",
    "leq_all(X,[H|T],Res) :- Res = (X=<H & R), leq_all(X,T,R).",
    "false :- (BL & ~BR), rev(L,R), is_asorted(L,BL), is_dsorted(R,BR).",
    "false :- (BA & BX & ~BC), snoc(A,X,C), is_dsorted(A,BA), leq_all(X,A,BX), is_dsorted(C,BC).",
};

std::set<std::string> keys(const std::map<std::string, CataInfo>& m) {
  std::set<std::string> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

}  // namespace

TEST_CASE("classification of the reverse program") {
  SourceProgram p = parse_program(kReverseText);
  const auto cls = classify(p);
  CHECK(cls.program_preds == std::set<std::string>{"rev", "snoc"});
  CHECK(keys(cls.catamorphisms) == std::set<std::string>{"is_asorted", "is_dsorted", "hd", "leq_all"});
}

TEST_CASE("classification of bstdel") {
  SourceProgram p = parse_file(corpus("bstdel.pl"));
  const auto cls = classify(p);
  CHECK(cls.program_preds.count("bstdel"));
  CHECK(cls.program_preds.count("delmin"));
  CHECK(keys(cls.catamorphisms) == std::set<std::string>{"bstree", "treemax", "treemin"});
}

TEST_CASE("a contract catamorphism that calls a program predicate is a conflict") {
  SourceProgram p = parse_program(std::string(kReverseText).substr(0, std::string(kReverseText).find("false :-")) +
                                  "revsorted(L,B) :- rev(L,R), is_asorted(R,B).\n"
                                  ":- spec rev(L,R) ==> revsorted(L,B) => B.\n");
  CHECK_THROWS_AS(classify(p), ClassificationError);
}

TEST_CASE("classification does not depend on clause order") {
  std::vector<std::string> cls(std::begin(kReverseClauses), std::end(kReverseClauses));
  SourceProgram p0 = parse_program(kReverseText);
  const auto c0 = classify(p0);
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(cls.begin(), cls.end(), rng);
    std::string text;
    for (const auto& c : cls) text += c + "\n";
    const auto c1 = classify(parse_program(text));
    CHECK(c1.program_preds == c0.program_preds);
    CHECK(keys(c1.catamorphisms) == keys(c0.catamorphisms));
    for (const auto& [name, info] : c0.catamorphisms) {
      CHECK(c1.catamorphisms.at(name).schema == info.schema);
      CHECK(c1.catamorphisms.at(name).auxiliaries == info.auxiliaries);
    }
  }
}

TEST_CASE("schemata of the list and tree catamorphisms") {
  SourceProgram p = parse_program(kReverseText);
  const CataInfo leq = check_schema("leq_all", p);
  CHECK(leq.schema == Schema::A);
  CHECK(leq.param_arity == 1);
  CHECK(leq.adt_position == 1);
  CHECK(leq.output_positions == std::vector<std::size_t>{2});
  CHECK(leq.auxiliaries.empty());
  const CataInfo as = check_schema("is_asorted", p);
  CHECK(as.schema == Schema::C);
  CHECK(as.auxiliaries == std::vector<std::string>{"hd"});
  CHECK(as.param_arity == 0);
  const CataInfo hd = check_schema("hd", p);
  CHECK(hd.schema == Schema::A);
  CHECK(hd.output_positions.size() == 2);

  SourceProgram t = parse_file(corpus("bstdel.pl"));
  const CataInfo bst = check_schema("bstree", t);
  CHECK(bst.schema == Schema::D);
  CHECK(bst.auxiliaries == std::vector<std::string>{"treemax", "treemin"});
  CHECK(check_schema("treemax", t).schema == Schema::B);
}

TEST_CASE("a catamorphism without a parameter or recursive call") {
  SourceProgram p = parse_program("isnil([],B) :- B.\nisnil([H|T],B) :- ~B.\n");
  const CataInfo c = check_schema("isnil", p);
  CHECK(c.schema == Schema::A);
  CHECK(c.param_arity == 0);
}

TEST_CASE("non-catamorphisms are rejected by check_schema") {
  SourceProgram p = parse_program(kReverseText);
  CHECK_THROWS_AS(check_schema("rev", p), SchemaError);
  SourceProgram q = parse_program("twice([],N) :- N=0.\ntwice([H|T],N) :- twice(T,A), twice(T,B), N=A+B.\n");
  CHECK_THROWS_AS(check_schema("twice", q), SchemaError);
}

TEST_CASE("tupling is_asorted with hd") {
  SourceProgram p = parse_program(kReverseText);
  const auto cls = classify(p);
  const auto t = tuple_zygomorphism(cls.catamorphisms.at("is_asorted"), p, cls);
  REQUIRE(t);
  CHECK(t->info.pred == "is_asorted_hd");
  CHECK(t->info.schema == Schema::A);
  CHECK(t->signature == std::vector<Sort>{int_list(), Sort::boolean(), Sort::boolean(), Sort::integer()});
  CHECK(t->replaces == "is_asorted");
  // Base clause: is_asorted_hd([],R1,Def,Hd) :- R1 & ~Def & Hd=0.
  const Clause* base = nullptr;
  for (const auto& c : t->clauses) {
    if (c.body.empty()) base = &c;
  }
  REQUIRE(base);
  CHECK(base->head->args[0] == list_of({}));
  Substitution s;
  s.set(base->head->args[1], Term::truth());
  s.set(base->head->args[2], Term::falsity());
  s.set(base->head->args[3], Term::int_const(0));
  CHECK(evaluate(s.apply(base->constraint)).is_true());
  s.set(base->head->args[3], Term::int_const(1));
  CHECK(evaluate(s.apply(base->constraint)).is_false());
}

TEST_CASE("tupling a schema A catamorphism is the identity") {
  SourceProgram p = parse_program(kReverseText);
  const auto cls = classify(p);
  CHECK_FALSE(tuple_zygomorphism(cls.catamorphisms.at("leq_all"), p, cls));
}

TEST_CASE("tupling bstree with treemax and treemin") {
  SourceProgram p = parse_file(corpus("bstdel.pl"));
  const auto cls = classify(p);
  const auto t = tuple_zygomorphism(cls.catamorphisms.at("bstree"), p, cls);
  REQUIRE(t);
  CHECK(t->info.pred == "bstree_treemax_treemin");
  CHECK(t->info.schema == Schema::B);
  CHECK(t->signature.size() == 6);
}

TEST_CASE("property: tupled is_asorted agrees with is_asorted and hd") {
  Bounds b;
  b.depth = 3;
  CHECK(tupling_agrees("insertionsort.pl", "is_asorted", b));
}

TEST_CASE("property: tupled bstree agrees with bstree, treemax and treemin") {
  Bounds b;
  b.depth = 2;
  CHECK(tupling_agrees("bstdel.pl", "bstree", b));
}

TEST_CASE("apply_tupling rewrites contract atoms") {
  SourceProgram p = parse_file(corpus("bstdel.pl"));
  auto cls = classify(p);
  const auto names = apply_tupling(p, cls);
  CHECK(std::find(names.begin(), names.end(), "bstree_treemax_treemin") != names.end());
  for (const auto& k : p.contracts) {
    for (const auto& a : k.catas) CHECK(a.pred != "bstree");
  }
  CHECK(cls.is_cata("bstree_treemax_treemin"));
}

TEST_CASE("hd and count are functional and total") {
  SourceProgram p = parse_file(corpus("insertionsort.pl"));
  const auto cls = classify(p);
  Bounds b;
  b.depth = 3;
  for (const char* name : {"hd", "count", "is_asorted"}) {
    CAPTURE(name);
    const auto r = functionality_totality_report(cls.catamorphisms.at(name), p, cls, b);
    CHECK(r.functional);
    CHECK(r.total);
    CHECK(r.inputs_checked > 0);
  }
}

TEST_CASE("hd without its base clause is not total at the empty list") {
  SourceProgram p = parse_program("hd([H|T],IsDefHd,Hd) :- IsDefHd & Hd=H.\n");
  CataInfo info;
  info.pred = "hd";
  info.schema = Schema::A;
  info.adt_position = 0;
  info.output_positions = {1, 2};
  info.adt_sort = int_list();
  info.recursive_clauses = {0};
  PredicateClassification cls;
  cls.catamorphisms.emplace("hd", info);
  Bounds b;
  b.depth = 3;
  const auto r = functionality_totality_report(info, p, cls, b);
  CHECK_FALSE(r.total);
  CHECK(r.counterexample == "[]");
}

TEST_CASE("a relation with two outputs for one input is not functional") {
  SourceProgram p = parse_program("f([],N) :- N>=0 & N=<1.\nf([H|T],N) :- N=M+H, f(T,M).\n");
  const auto cls = classify(p);
  REQUIRE(cls.is_cata("f"));
  Bounds b;
  b.depth = 2;
  const auto r = functionality_totality_report(cls.catamorphisms.at("f"), p, cls, b);
  CHECK_FALSE(r.functional);
}

TEST_CASE("property: every corpus catamorphism is functional and total") {
  for (const auto& f : std::filesystem::directory_iterator(CATA_CORPUS_DIR)) {
    if (f.path().extension() != ".pl") continue;
    SourceProgram p = parse_file(f.path().string());
    const auto cls = classify(p);
    for (const auto& [name, info] : cls.catamorphisms) {
      CAPTURE(f.path().string());
      CAPTURE(name);
      Bounds b;
      b.depth = info.adt_sort.name() == "tree" ? 2 : 3;
      const auto r = functionality_totality_report(info, p, cls, b);
      CHECK(r.functional);
      CHECK(r.total);
    }
  }
}

TEST_CASE("functionality warnings with the SMT oracle") {
  SmtSession session(SmtSession::Options{});
  SmtOracle oracle(session);
  SourceProgram p = parse_program(kReverseText);
  const CataInfo c = check_schema("is_asorted", p, nullptr, &oracle);
  CHECK(c.warnings.empty());
  SourceProgram q = parse_program("f([],N) :- N>=0.\nf([H|T],N) :- N=M+H, f(T,M).\n");
  const CataInfo d = check_schema("f", q, nullptr, &oracle);
  CHECK_FALSE(d.warnings.empty());
}
