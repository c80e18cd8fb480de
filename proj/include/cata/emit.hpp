#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cata/cata.hpp"
#include "cata/constraint.hpp"
#include "cata/frontend.hpp"
#include "cata/transform.hpp"

namespace cata {

/// SMT-LIB HORN script: a declare-fun per predicate and one universally
/// quantified implication per clause. Clauses mentioning ADT sorts get the
/// needed `declare-datatypes` (baseline mode).
std::string emit_smtlib(const std::vector<Clause>& cls, const SortTable& sorts);

/// Clauses in the surface syntax, one per line.
std::string emit_prolog(const std::vector<Clause>& cls);
/// Whole program: data declarations beyond the built-ins, `:- pred`
/// declarations, clauses, then contracts.
std::string emit_prolog(const SourceProgram& p);

enum class SolveStatus { Sat, Unsat, Unknown, Timeout };
const char* to_string(SolveStatus s);

struct SolverConfig {
  std::string solver = "z3";
  std::vector<std::string> extra_args;
  int timeout_ms = 60000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::string output;
  long wall_ms = 0;
};

/// Accepts exactly `sat`, `unsat` or `unknown` as the first line that is not
/// empty and not a `;` comment.
SolveStatus parse_status(const std::string& output);

/// Runs `<solver> [extra args] <file>` on a script written to `path`.
SolveResult solve_file(const std::string& path, const SolverConfig& cfg);
/// Writes the script to a temporary file and solves it.
SolveResult solve_script(const std::string& script, const SolverConfig& cfg);
SolveResult solve(const std::vector<Clause>& cls, const SortTable& sorts, const SolverConfig& cfg);

/// `z3 4.x.y`-style name and version, or the solver name when the version
/// cannot be read.
std::string solver_version(const SolverConfig& cfg);

struct Verdict {
  enum class Status { Verified, Unknown, SolverTimeout, TransformationFailed };
  std::string id;
  Status status = Status::Unknown;
  std::string solver;
  long wall_ms = 0;
  std::string detail;
};
const char* to_string(Verdict::Status s);

struct PipelineOptions {
  SolverConfig solver;
  int query_timeout_ms = 5000;
  bool tuple_zygo = false;
  bool per_contract = false;
  std::size_t iteration_cap = 1000;
};

/// A goal to prove together with the contract it comes from (none for goals
/// of the input that could not be lifted).
struct Obligation {
  std::string id;
  std::optional<Contract> contract;
  Clause goal;
};

/// Parsed, classified and checked input, ready for transformation.
struct Problem {
  SourceProgram program;
  PredicateClassification cls;
  std::vector<Obligation> obligations;
};

/// parse (already done) -> classify -> contract checks -> optional tupling ->
/// goal lifting. Throws FrontendError, ClassificationError or SchemaError.
Problem prepare(SourceProgram p, bool tuple_zygo);

/// One lemma per program predicate that has contracts, merged from them.
/// Synthetic predicates and those in `trivial_ok` without a contract get the
/// trivial contract; any other predicate stays without one, and the
/// transformation fails if it needs it.
std::map<std::string, Contract> lemmas_for(const Problem& pb, const std::vector<Contract>& contracts,
                                           const std::set<std::string>& trivial_ok = {});

/// Runs the transformation on the given obligations, using the contracts of
/// `lemma_set` as lemmas.
TransformResult transform_obligations(const Problem& pb, const std::vector<const Obligation*>& goals,
                                      const std::vector<Contract>& lemma_set, ConstraintOracle& oracle,
                                      std::size_t iteration_cap, const std::set<std::string>& trivial_ok = {});

struct VerifyReport {
  std::vector<Verdict> verdicts;
  std::vector<Clause> transformed;
  std::vector<StepRecord> trace;
  std::string script;
  SolveStatus backend = SolveStatus::Unknown;
  long transform_ms = 0;
  long checksat_ms = 0;
  enum class Failure { None, Input, Infrastructure };
  Failure failure = Failure::None;
  std::string error;  // set with `failure`; no verdicts then
};

VerifyReport verify_problem(const Problem& pb, const PipelineOptions& opts);
/// Parse errors and the like become an error report with no verdicts.
VerifyReport verify_file(const std::string& path, const PipelineOptions& opts);

}  // namespace cata
