// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion other than the informational one fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "cata/bench.hpp"
#include "cata/emit.hpp"
#include "support.hpp"

using namespace cata;
using namespace cata::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void report(int n, const std::string& title, const Outcome& o, bool informational = false) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << ": " << title;
  if (informational) std::cout << " (informational)";
  if (!o.note.empty()) std::cout << "  [" << o.note << "]";
  std::cout << std::endl;
  if (!o.pass && !informational) ++failures;
}

PipelineOptions defaults() {
  PipelineOptions o;
  o.solver.timeout_ms = 60000;
  return o;
}

bool all_verified(const VerifyReport& r) {
  if (r.failure != VerifyReport::Failure::None || r.verdicts.empty()) return false;
  for (const auto& v : r.verdicts) {
    if (v.status != Verdict::Status::Verified) return false;
  }
  return true;
}

std::vector<std::string> corpus_programs() { return corpus_files(CATA_CORPUS_DIR); }

Bounds bounds_for(const SourceProgram& p) {
  Bounds b;
  b.depth = 3;
  for (const auto& [pred, sig] : p.signatures) {
    for (const auto& s : sig) {
      if (s.is_adt() && s.name() == "tree") b.depth = 2;
    }
  }
  return b;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const VerifyReport rep = verify_file(corpus("reverse.pl"), defaults());
  const double t = seconds_since(t0);
  o.require(all_verified(rep), "not all contracts verified");
  o.require(rep.verdicts.size() == 2, "expected two contracts");
  o.require(rep.backend == SolveStatus::Sat, "backend did not answer sat");
  o.require(t < 60, "took " + std::to_string(t) + " s");
  std::vector<const Clause*> goals;
  for (const auto& c : rep.transformed) {
    o.require(is_basic_sorted(c), "clause with ADT variables: " + to_prolog(c));
    if (c.is_goal()) goals.push_back(&c);
  }
  o.require(goals.size() == 2, "expected two goals");
  if (goals.size() == 2) {
    const std::size_t n1 = reachable_from(rep.transformed, *goals[0]).size();
    const std::size_t n2 = reachable_from(rep.transformed, *goals[1]).size();
    o.require(n1 == 5 && n2 == 3, "per-goal clause counts " + std::to_string(n1) + "+" + std::to_string(n2));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const VerifyReport rep = verify_file(corpus("bstdel.pl"), defaults());
  const double t = seconds_since(t0);
  o.require(all_verified(rep), "not all contracts verified");
  o.require(t < 120, "took " + std::to_string(t) + " s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  for (const char* f : {"insertionsort.pl", "selectionsort.pl"}) {
    const SourceProgram p = parse_file(corpus(f));
    bool sortedness = false;
    bool count = false;
    for (const auto& k : p.contracts) {
      for (const auto& a : k.catas) {
        sortedness = sortedness || a.pred.find("sorted") != std::string::npos;
        count = count || a.pred == "count";
      }
    }
    o.require(sortedness && count, std::string(f) + " lacks sortedness or count contracts");
    o.require(all_verified(verify_file(corpus(f), defaults())), std::string(f) + " not verified");
  }
  const double t = seconds_since(t0);
  o.require(t < 180, "took " + std::to_string(t) + " s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  SourceProgram p = parse_file(corpus("reverse.pl"));
  std::vector<Clause> cls = definite(p);
  for (const auto& k : p.contracts) cls.push_back(contract_to_goal(k));
  SolverConfig c;
  c.timeout_ms = 10000;
  const SolveResult r = solve_script(emit_smtlib(cls, p.sorts), c);
  o.note = std::string("baseline answer: ") + to_string(r.status);
  o.pass = r.status != SolveStatus::Sat;
  return o;
}

Outcome criterion5() {
  Outcome o;
  SmtSession session(SmtSession::Options{});
  SmtOracle oracle(session);
  for (const auto& f : corpus_programs()) {
    const Problem pb = prepare(parse_file(f), false);
    const TransformResult r = transform_all(pb, oracle);
    for (const auto& c : r.clauses) o.require(is_basic_sorted(c), fs::path(f).stem().string() + ": " + to_prolog(c));
  }
  return o;
}

Term random_literal(std::mt19937& rng, const std::vector<Term>& xs) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const Term& a = xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))];
  const Term b = pick(2) ? xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))] : Term::int_const(pick(5) - 2);
  static const Op ops[] = {Op::Le, Op::Lt, Op::Ge, Op::Gt};
  return mk_cmp(ops[pick(4)], a, b);
}

Outcome criterion6() {
  Outcome o;
  SmtSession session(SmtSession::Options{});
  SmtOracle oracle(session);
  std::size_t capped = 0;
  std::size_t finished = 0;
  auto attempt = [&](const Problem& pb, const std::string& what) {
    try {
      const TransformResult r = transform_all(pb, oracle);
      ++finished;
      for (const auto& c : r.clauses) o.require(is_basic_sorted(c), what + ": ADT variables left");
    } catch (const IterationCapExceeded&) {
      ++capped;
    } catch (const TransformError&) {
      ++finished;
    }
  };
  for (const auto& f : corpus_programs()) attempt(prepare(parse_file(f), false), f);
  std::mt19937 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const RandomProgram rp = random_program(rng);
    attempt(prepare(parse_program(rp.text), false), "random program " + std::to_string(i));
  }
  o.note = std::to_string(finished) + " finished, " + std::to_string(capped) + " stopped by the cap";
  std::vector<Term> xs;
  for (const char* n : {"X", "Y", "Z"}) xs.push_back(Term::fresh_var(n, Sort::integer()));
  for (int chain = 0; chain < 30; ++chain) {
    std::vector<Term> lits;
    for (int i = 0; i < 5; ++i) lits.push_back(random_literal(rng, xs));
    Term w = mk_and(lits);
    const std::size_t bound = conjunctive_view(w).literals.size() + 1;
    std::size_t changes = 0;
    for (int step = 0; step < 40; ++step) {
      std::vector<Term> next;
      for (int i = 0; i < 3; ++i) next.push_back(random_literal(rng, xs));
      const Term v = widen(w, mk_and(next), oracle);
      if (!(v == w)) ++changes;
      w = v;
    }
    o.require(changes <= bound, "widening chain changed " + std::to_string(changes) + " times");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  // (a) The goal of K is satisfiable in the bounded model exactly when K is violated.
  std::mt19937 rng(99);
  std::size_t pairs = 0;
  for (int i = 0; i < 60; ++i) {
    const RandomProgram rp = random_program(rng);
    SourceProgram p = parse_program(rp.text);
    const Bounds b = bounds_for(p);
    const GroundModel m = bounded_least_model(definite(p), p.sorts, b);
    for (const auto& k : p.contracts) {
      ++pairs;
      o.require(body_satisfiable(contract_to_goal(k), m, p.sorts, b) == contract_violated(k, m, b),
                "goal encoding disagrees on random program " + std::to_string(i));
    }
  }
  o.require(pairs >= 50, "only " + std::to_string(pairs) + " contract pairs");
  // (b) tupling
  Bounds lists;
  lists.depth = 3;
  Bounds trees;
  trees.depth = 2;
  o.require(tupling_agrees("insertionsort.pl", "is_asorted", lists), "tupled is_asorted disagrees");
  o.require(tupling_agrees("bstdel.pl", "bstree", trees), "tupled bstree disagrees");
  // (c) functionality and totality of the corpus catamorphisms
  for (const auto& f : corpus_programs()) {
    SourceProgram p = parse_file(f);
    const auto cls = classify(p);
    for (const auto& [name, info] : cls.catamorphisms) {
      Bounds b;
      b.depth = info.adt_sort.name() == "tree" ? 2 : 3;
      const auto r = functionality_totality_report(info, p, cls, b);
      o.require(r.functional && r.total, name + " in " + fs::path(f).stem().string());
    }
  }
  // (d) verified contracts hold in the bounded model; false fixtures are not verified.
  PipelineOptions per = defaults();
  per.per_contract = true;
  for (const auto& f : corpus_programs()) {
    SourceProgram p = parse_file(f);
    const VerifyReport rep = verify_file(f, per);
    Bounds b = bounds_for(p);
    b.depth = std::min(b.depth, 2);
    const GroundModel m = bounded_least_model(definite(p), p.sorts, b);
    for (std::size_t i = 0; i < p.contracts.size() && i < rep.verdicts.size(); ++i) {
      if (rep.verdicts[i].status == Verdict::Status::Verified) {
        o.require(!contract_violated(p.contracts[i], m, b), "verified but violated: " + rep.verdicts[i].id);
      }
    }
  }
  for (const char* f : {"fixtures/reverse_false.pl", "fixtures/bstdel_eq.pl"}) {
    SourceProgram p = parse_file(corpus(f));
    const VerifyReport rep = verify_file(corpus(f), per);
    const Bounds b = bounds_for(p);
    const GroundModel m = bounded_least_model(definite(p), p.sorts, b);
    bool any_violated = false;
    for (std::size_t i = 0; i < p.contracts.size() && i < rep.verdicts.size(); ++i) {
      if (!contract_violated(p.contracts[i], m, b)) continue;
      any_violated = true;
      o.require(rep.verdicts[i].status != Verdict::Status::Verified, std::string(f) + ": false contract verified");
    }
    o.require(any_violated, std::string(f) + ": no violated contract found");
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / ("cata-acceptance-" + std::to_string(::getpid()));
  std::string inputs;
  for (const auto& f : corpus_programs()) inputs += " " + f;
  std::vector<fs::path> dirs{base / "a", base / "b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const std::string cmd = std::string(CATA_VERIFY_BIN) + " transform --trace --out " + d.string() + inputs;
    o.require(std::system(cmd.c_str()) == 0, "transform run failed");
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    const fs::path other = dirs[1] / e.path().filename();
    o.require(fs::exists(other) && read_file(e.path().string()) == read_file(other.string()),
              e.path().filename().string() + " differs");
    ++compared;
  }
  o.require(compared >= 3 * corpus_programs().size(), "missing output files");
  fs::remove_all(base);
  return o;
}

template <typename F>
Outcome guarded(F f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main() {
  report(1, "reverse verified, basic-sorted, 5+3 clause shape, under 60 s", guarded(criterion1));
  report(2, "bstdel verified under 120 s", guarded(criterion2));
  report(3, "insertion and selection sort: sortedness and count verified under 180 s", guarded(criterion3));
  report(4, "baseline encoding of reverse not proved within 10 s", guarded(criterion4), true);
  report(5, "every corpus output is basic-sorted", guarded(criterion5));
  report(6, "termination under the cap on corpus and 200 random programs; widening stabilizes", guarded(criterion6));
  report(7, "goal encoding, tupling, functionality and soundness checks", guarded(criterion7));
  report(8, "repeated transformation of the corpus is byte-identical", guarded(criterion8));
  return failures == 0 ? 0 : 1;
}
