#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cata/cata.hpp"
#include "cata/clause.hpp"
#include "cata/constraint.hpp"
#include "cata/frontend.hpp"

namespace cata {

/// `new_pred(U) <- constraint, program_atom, catas`.
struct Definition {
  std::string new_pred;
  std::vector<Term> head_vars;
  Term constraint = Term::truth();
  Atom program_atom;
  std::vector<Atom> catas;
  std::string for_predicate;
  bool is_maximal = false;

  Clause clause() const;
};

struct StepRecord {
  std::size_t index = 0;
  std::string rule;
  std::vector<std::string> in;
  std::vector<std::string> out;
  std::string answers;  // oracle answers consumed by this step
};

std::string to_string(const StepRecord& r);

class IterationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant of the algorithm failed (e.g. a clause marked foldable does
/// not fold), or the input breaks a precondition such as a missing contract.
class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransformOptions {
  std::size_t iteration_cap = 1000;
  /// At most this many atoms of one catamorphism on one data structure
  /// take part in a definition (the last ones in body order); the others
  /// are dropped when the clause is folded. 0 means no limit.
  std::size_t atoms_per_structure = 2;
  /// Contract instances added per program atom beyond the first, one per
  /// parameter binding suggested by an atom already in the clause.
  std::size_t extra_instances = 2;
};

struct TransformResult {
  std::vector<Clause> clauses;  // TransfCls
  std::vector<Definition> defs;
  std::vector<StepRecord> log;
  std::size_t iterations = 0;
};

/// The catamorphism atoms of `g` that share an ADT variable with `a`.
std::vector<Atom> cata_neighborhood(const Atom& a, const std::vector<Atom>& g, const PredicateClassification& cls);

/// One run of the transformation over a fixed program, classification and
/// set of lemma contracts (one per program predicate). The procedures are
/// exposed individually; `run` is the driver loop.
class Transformer {
 public:
  Transformer(const SourceProgram& p, const PredicateClassification& cls, std::map<std::string, Contract> lemmas,
              ConstraintOracle& oracle, TransformOptions opts = {});

  TransformResult run(const std::vector<Clause>& goals);

  std::vector<Definition> define(const std::vector<Clause>& in_cls);
  std::vector<Clause> unfold_step(const Clause& c, std::size_t atom_index);
  std::vector<Clause> unfold(const std::vector<Definition>& new_defs);
  /// Merges catamorphism atoms that agree up to the data structure, equating
  /// their outputs.
  Clause apply_functionality(const Clause& c);
  std::vector<Clause> apply_contracts(const std::vector<Clause>& unf_cls);
  std::pair<std::vector<Clause>, std::vector<Clause>> split_foldable(const std::vector<Clause>& r_cls);
  std::vector<Clause> fold(const std::vector<Clause>& out_cls);

  /// Whether some definition covers `a` in `c`: its catamorphisms include
  /// those of `a` in `c`, and the constraint of `c` entails its constraint.
  bool covered(const Clause& c, const Atom& a, bool maximal_only);

  const std::vector<Definition>& defs() const { return defs_; }
  const std::vector<StepRecord>& log() const { return log_; }
  bool is_program_atom(const Atom& a) const;

 private:
  struct Cover {
    const Definition* def = nullptr;
    Substitution sigma;  // definition variables -> clause terms
  };
  std::vector<Atom> neighborhood(const Atom& a, const Clause& c) const;
  std::optional<Cover> find_cover(const Clause& c, const Atom& a, const Definition& d);
  Definition make_definition(std::string name, const Term& constraint, const Atom& a, std::vector<Atom> catas);
  Definition* maximal_for(const std::string& pred);
  std::vector<Clause> unfold_catas(const Clause& c);
  Clause apply_contracts(const Clause& c);
  std::string next_clause_id();
  void record(std::string rule, std::vector<std::string> in, std::vector<std::string> out);

  const SourceProgram& p_;
  const PredicateClassification& cls_;
  std::map<std::string, Contract> lemmas_;
  RecordingOracle oracle_;
  TransformOptions opts_;
  std::map<std::string, std::vector<const Clause*>> by_head_;
  std::vector<Definition> defs_;
  std::vector<StepRecord> log_;
  std::size_t pred_counter_ = 0;
  std::size_t clause_counter_ = 0;
};

}  // namespace cata
