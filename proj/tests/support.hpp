#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cata/cata.hpp"
#include "cata/clause.hpp"
#include "cata/constraint.hpp"
#include "cata/emit.hpp"
#include "cata/frontend.hpp"
#include "cata/model.hpp"
#include "cata/print.hpp"

namespace cata::testing {

inline const Sort& int_list() {
  static const Sort s = Sort::adt("list", {Sort::integer()});
  return s;
}

inline const Sort& int_tree() {
  static const Sort s = Sort::adt("tree", {Sort::integer()});
  return s;
}

inline Term list_of(const std::vector<std::int64_t>& xs) {
  Term t = Term::cons("nil", int_list(), {});
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) t = Term::cons("cons", int_list(), {Term::int_const(*it), t});
  return t;
}

inline Term leaf() { return Term::cons("leaf", int_tree(), {}); }

inline Term node(const Term& l, std::int64_t n, const Term& r) {
  return Term::cons("node", int_tree(), {l, Term::int_const(n), r});
}

inline std::string show(const Atom& a) {
  VarNaming n;
  return to_prolog(a, n);
}

inline Atom ground(const std::string& pred, std::vector<Term> args) { return Atom{pred, std::move(args)}; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) { return std::string(CATA_CORPUS_DIR) + "/" + name; }

/// Definite clauses of a program (goals dropped).
inline std::vector<Clause> definite(const SourceProgram& p) {
  std::vector<Clause> out;
  for (const auto& c : p.clauses) {
    if (!c.is_goal()) out.push_back(c);
  }
  return out;
}

/// All integer lists of length <= max_len over [lo, hi], in length-lexicographic order.
inline std::vector<std::vector<std::int64_t>> all_lists(int max_len, std::int64_t lo, std::int64_t hi) {
  std::vector<std::vector<std::int64_t>> out{{}};
  std::vector<std::vector<std::int64_t>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& l : layer) {
      for (auto v = lo; v <= hi; ++v) {
        auto m = l;
        m.push_back(v);
        next.push_back(m);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline const char* kReverseText = R"(
rev([],[]).
rev([H|T],R) :- rev(T,S), snoc(S,H,R).
snoc([],X,[X]).
snoc([X|Xs],Y,[X|Zs]) :- snoc(Xs,Y,Zs).
is_asorted([],Res) :- Res.
is_asorted([H|T],Res) :- Res = (IsDefHdT => (H=<HdT & ResT)),
                         hd(T,IsDefHdT,HdT), is_asorted(T,ResT).
is_dsorted([],Res) :- Res.
is_dsorted([H|T],Res) :- Res = (IsDefHdT => (H>=HdT & ResT)),
                         hd(T,IsDefHdT,HdT), is_dsorted(T,ResT).
hd([],IsDefHd,Hd) :- ~IsDefHd & Hd=0.
hd([H|T],IsDefHd,Hd) :- IsDefHd & Hd=H.
leq_all(X,[],Res) :- Res.
leq_all(X,[H|T],Res) :- Res = (X=<H & R), leq_all(X,T,R).
false :- (BL & ~BR), rev(L,R), is_asorted(L,BL), is_dsorted(R,BR).
false :- (BA & BX & ~BC), snoc(A,X,C), is_dsorted(A,BA),
         leq_all(X,A,BX), is_dsorted(C,BC).
)";

/// Whether some fact of `k.pred` in `m` breaks the contract: evaluates the
/// catamorphisms by lookup in `m` and the pre/postcondition directly.
inline bool contract_violated(const Contract& k, const GroundModel& m, const Bounds& b) {
  std::vector<Term> free;
  auto is_z = [&](const Term& v) {
    for (const auto& z : k.z) {
      if (z == v) return true;
    }
    return false;
  };
  auto note = [&](const Term& v) {
    if (!is_z(v) && std::find(free.begin(), free.end(), v) == free.end()) free.push_back(v);
  };
  std::vector<std::size_t> adt_at;
  for (const auto& a : k.catas) {
    std::size_t at = 0;
    while (!a.args[at].sort().is_adt()) ++at;
    adt_at.push_back(at);
    for (std::size_t i = 0; i < at; ++i) note(a.args[i]);
  }
  for (const auto& v : vars_of(k.pre)) note(v);
  for (const auto& f : m.facts(k.pred)) {
    Substitution s;
    for (std::size_t i = 0; i < k.z.size(); ++i) s.set(k.z[i], f.args[i]);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
      if (i < free.size()) {
        if (free[i].sort().is_bool()) {
          for (bool v : {false, true}) {
            s.set(free[i], Term::bool_const(v));
            if (go(i + 1)) return true;
          }
        } else {
          for (auto v = b.lo; v <= b.hi; ++v) {
            s.set(free[i], Term::int_const(v));
            if (go(i + 1)) return true;
          }
        }
        return false;
      }
      Substitution full = s;
      for (std::size_t j = 0; j < k.catas.size(); ++j) {
        const Atom& a = k.catas[j];
        bool found = false;
        for (const auto& g : m.facts(a.pred)) {
          bool same = true;
          for (std::size_t x = 0; x <= adt_at[j] && same; ++x) same = g.args[x] == full.apply(a.args[x]);
          if (!same) continue;
          for (std::size_t x = adt_at[j] + 1; x < a.args.size(); ++x) full.set(a.args[x], g.args[x]);
          found = true;
          break;
        }
        if (!found) return false;
      }
      return evaluate(full.apply(k.pre)).is_true() && !evaluate(full.apply(k.post)).is_true();
    };
    if (go(0)) return true;
  }
  return false;
}

/// Random well-formed programs: one program predicate over lists or trees
/// and one contract built from schema-A/B catamorphisms.
struct RandomProgram {
  std::string text;
  std::string pred;
};

inline RandomProgram random_program(std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
  const std::string c = std::to_string(pick(3));
  const bool tree = pick(3) == 0;
  std::string prog;
  int lists = 2;
  if (!tree) {
    switch (pick(5)) {
      case 0:
        prog = "p([],[]).\np([H|T],[H1|R]) :- H1 = H + " + c + ", p(T,R).\n";
        break;
      case 1:
        prog = "p([],[]).\np([H|T],[H|R]) :- H >= " + c + ", p(T,R).\np([H|T],R) :- H < " + c + ", p(T,R).\n";
        break;
      case 2:
        prog = "p([],L,L).\np([H|T],L,[H|R]) :- p(T,L,R).\n";
        lists = 3;
        break;
      case 3:
        prog = "p([],[]).\np([H|T],[H,H|R]) :- p(T,R).\n";
        break;
      default:
        prog = "p([],[]).\np([H|T],T).\n";
        break;
    }
  } else if (pick(2) == 0) {
    prog = "p(leaf,leaf).\np(node(L,N,R),node(R2,N,L2)) :- p(L,L2), p(R,R2).\n";
  } else {
    prog = "p(leaf,leaf).\np(node(L,N,R),node(L2,N2,R2)) :- N2 = N + " + c + ", p(L,L2), p(R,R2).\n";
  }
  const char* list_catas =
      "len([],N) :- N=0.\nlen([H|T],N) :- N=M+1, len(T,M).\n"
      "sum([],N) :- N=0.\nsum([H|T],N) :- N=M+H, sum(T,M).\n"
      "count(X,[],N) :- N=0.\ncount(X,[H|T],N) :- N=ite(X=H,M+1,M), count(X,T,M).\n"
      "leq_all(X,[],B) :- B.\nleq_all(X,[H|T],B) :- B=(X=<H & R), leq_all(X,T,R).\n";
  const char* tree_catas =
      "size(leaf,N) :- N=0.\nsize(node(L,V,R),N) :- N=A+B+1, size(L,A), size(R,B).\n"
      "tsum(leaf,N) :- N=0.\ntsum(node(L,V,R),N) :- N=A+B+V, tsum(L,A), tsum(R,B).\n"
      "tcount(X,leaf,N) :- N=0.\ntcount(X,node(L,V,R),N) :- N=A+B+ite(X=V,1,0), tcount(X,L,A), tcount(X,R,B).\n"
      "tleq(X,leaf,B) :- B.\ntleq(X,node(L,V,R),B) :- B=(X=<V & BL & BR), tleq(X,L,BL), tleq(X,R,BR).\n";
  static const std::vector<std::string> lnames{"len", "sum", "count", "leq_all"};
  static const std::vector<std::string> tnames{"size", "tsum", "tcount", "tleq"};
  const int which = pick(4);
  const std::string cata = tree ? tnames[which] : lnames[which];
  const bool param = which >= 2;
  const bool boolean = which == 3;
  std::vector<std::string> zs = lists == 3 ? std::vector<std::string>{"A", "B", "C"} : std::vector<std::string>{"A", "B"};
  std::string spec = ":- spec p(";
  for (std::size_t i = 0; i < zs.size(); ++i) spec += (i ? "," : "") + zs[i];
  spec += ") ==> ";
  std::vector<std::string> outs;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    outs.push_back("R" + std::to_string(i + 1));
    spec += (i ? ", " : "") + cata + "(" + (param ? "X," : "") + zs[i] + "," + outs.back() + ")";
  }
  const std::string& a = outs[0];
  const std::string& b = outs.back();
  std::vector<std::string> posts;
  if (boolean) {
    posts = {a + " => " + b, b + " => " + a, a + " = " + b};
    if (lists == 3) posts.push_back("(" + outs[0] + " & " + outs[1] + ") => " + b);
  } else {
    posts = {a + " = " + b, a + " >= " + b, a + " =< " + b, b + " = " + a + " + " + c};
    if (lists == 3) posts.push_back(b + " = " + outs[0] + " + " + outs[1]);
  }
  std::string post = posts[static_cast<std::size_t>(pick(static_cast<int>(posts.size())))];
  if (!boolean && pick(4) == 0) post = "X >= 0 & " + post;
  if (!param && post.rfind("X ", 0) == 0) post = post.substr(9);
  spec += " => (" + post + ").\n";
  return {prog + (tree ? tree_catas : list_catas) + spec, "p"};
}

/// Whether every fact of the tupled predicate is exactly a combination of
/// facts of h and its auxiliaries on the same input, and vice versa.
inline bool tupling_agrees(const std::string& file, const std::string& h, const Bounds& b) {
  SourceProgram p = parse_file(corpus(file));
  PredicateClassification cls = classify(p);
  const auto t = tuple_zygomorphism(cls.catamorphisms.at(h), p, cls);
  if (!t) return false;
  std::vector<Clause> prog = definite(p);
  prog.insert(prog.end(), t->clauses.begin(), t->clauses.end());
  const GroundModel m = bounded_least_model(prog, p.sorts, b);
  const std::size_t adt = cls.catamorphisms.at(h).adt_position;
  // Expected tupled facts from h and the auxiliaries.
  std::set<std::string> expected;
  for (const auto& f : m.facts(h)) {
    std::vector<std::vector<Term>> rows{f.args};
    for (const auto& slot : t->slots) {
      std::vector<std::vector<Term>> next;
      const CataInfo& ai = cls.catamorphisms.at(slot.pred);
      for (const auto& row : rows) {
        for (const auto& g : m.facts(slot.pred)) {
          bool same = g.args[ai.adt_position] == f.args[adt];
          for (std::size_t i = 0; i < slot.param_map.size() && same; ++i) same = g.args[i] == f.args[slot.param_map[i]];
          if (!same) continue;
          auto r = row;
          for (std::size_t i = ai.adt_position + 1; i < g.args.size(); ++i) r.push_back(g.args[i]);
          next.push_back(r);
        }
      }
      rows = std::move(next);
    }
    for (const auto& row : rows) expected.insert(show(Atom{t->info.pred, row}));
  }
  std::set<std::string> actual;
  for (const auto& f : m.facts(t->info.pred)) actual.insert(show(f));
  return !actual.empty() && actual == expected && t->signature.size() > p.signatures.at(h).size();
}

/// Transforms all obligations of `pb` jointly with all their contracts as
/// lemmas, as the verifier's first attempt does.
inline TransformResult transform_all(const Problem& pb, ConstraintOracle& oracle, std::size_t cap = 1000) {
  std::vector<const Obligation*> goals;
  std::vector<Contract> lemmas;
  std::set<std::string> had;
  for (const auto& o : pb.obligations) {
    goals.push_back(&o);
    if (o.contract) {
      lemmas.push_back(*o.contract);
      had.insert(o.contract->pred);
    }
  }
  return transform_obligations(pb, goals, lemmas, oracle, cap, had);
}

/// The clauses of `cls` whose head predicate is reachable from the body of
/// `goal`, together with `goal`.
inline std::vector<Clause> reachable_from(const std::vector<Clause>& cls, const Clause& goal) {
  std::set<std::string> preds;
  std::vector<std::string> work;
  for (const auto& a : goal.body) work.push_back(a.pred);
  while (!work.empty()) {
    const std::string p = work.back();
    work.pop_back();
    if (!preds.insert(p).second) continue;
    for (const auto& c : cls) {
      if (c.head && c.head->pred == p) {
        for (const auto& a : c.body) work.push_back(a.pred);
      }
    }
  }
  std::vector<Clause> out{goal};
  for (const auto& c : cls) {
    if (c.head && preds.count(c.head->pred)) out.push_back(c);
  }
  return out;
}

}  // namespace cata::testing
