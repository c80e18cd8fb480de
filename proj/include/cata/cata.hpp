#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cata/constraint.hpp"
#include "cata/frontend.hpp"
#include "cata/model.hpp"

namespace cata {

/// (A) list catamorphism, (B) tree catamorphism, (C)/(D) their variants whose
/// recursive clauses also call auxiliary catamorphisms on the substructures.
enum class Schema { A, B, C, D };

const char* to_string(Schema s);

struct CataInfo {
  std::string pred;
  Schema schema = Schema::A;
  std::size_t param_arity = 0;
  std::size_t adt_position = 0;
  std::vector<std::size_t> input_positions;   // X
  std::vector<std::size_t> output_positions;  // Res
  Sort adt_sort;
  std::vector<std::string> auxiliaries;  // f / g, in order of first call
  std::vector<std::size_t> base_clauses;       // indices into the program clauses
  std::vector<std::size_t> recursive_clauses;  // idem
  std::vector<Diagnostic> warnings;
};

struct PredicateClassification {
  std::set<std::string> program_preds;
  std::map<std::string, CataInfo> catamorphisms;

  bool is_cata(const std::string& p) const { return catamorphisms.count(p) != 0; }
  std::set<std::string> cata_names() const;
};

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Splits predicates into program predicates and catamorphisms. Predicates
/// named in contract catamorphism lists (and what they call) are
/// catamorphisms; contract predicates (and what they call) are program
/// predicates; any other predicate is a catamorphism exactly when it has a
/// single data-structure argument and fits a schema.
PredicateClassification classify(const SourceProgram& p);

/// Matches the clauses of `pred` against the schemata. `known` supplies the
/// already analysed auxiliaries; auxiliaries missing from it are analysed on
/// demand. With an oracle, base and combine constraints are also checked to
/// define total functions (failures become warnings).
CataInfo check_schema(const std::string& pred, const SourceProgram& p,
                      const std::map<std::string, CataInfo>* known = nullptr, ConstraintOracle* oracle = nullptr);

/// Where an auxiliary's outputs sit in the tupled predicate.
struct AuxSlot {
  std::string pred;
  std::vector<std::size_t> param_map;  // auxiliary parameter i is h's parameter param_map[i]
  std::size_t first_output = 0;        // argument index in the tupled atom
  std::size_t output_count = 0;
};

struct TupleResult {
  CataInfo info;                // the tupled predicate, schema A or B
  std::vector<Sort> signature;
  std::vector<Clause> clauses;  // its defining clauses
  std::string replaces;         // the predicate it stands in for
  std::vector<AuxSlot> slots;
};

/// Tuples a schema C/D catamorphism with its auxiliaries into one schema A/B
/// predicate named `h_f_g`, with h's outputs followed by each auxiliary's.
/// Identity (nullopt) for schema A/B input.
std::optional<TupleResult> tuple_zygomorphism(const CataInfo& h, const SourceProgram& p,
                                              const PredicateClassification& cls);

/// Runs tupling on every C/D catamorphism used in the contracts or goals and
/// rewrites their atoms to the tupled predicates. Returns the names of the
/// tupled predicates.
std::vector<std::string> apply_tupling(SourceProgram& p, PredicateClassification& cls);

/// Replaces `h` atoms by tupled atoms; an auxiliary atom on the same
/// structure and parameters is merged into the tupled atom.
void rewrite_atoms(std::vector<Atom>& atoms, const TupleResult& t);

struct FunctionalityReport {
  bool functional = true;
  bool total = true;
  std::string counterexample;  // the offending input, printed
  std::size_t inputs_checked = 0;
};

/// Checks, at the given bounds, that every input has exactly one output.
FunctionalityReport functionality_totality_report(const CataInfo& c, const SourceProgram& p,
                                                  const PredicateClassification& cls, const Bounds& bounds);

}  // namespace cata
