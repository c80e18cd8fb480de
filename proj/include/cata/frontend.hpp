#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cata/clause.hpp"
#include "cata/sort.hpp"

namespace cata {

struct Location {
  int line = 0;
  int column = 0;
};

class FrontendError : public std::runtime_error {
 public:
  FrontendError(Location loc, const std::string& msg);
  Location where() const { return loc_; }

 private:
  Location loc_;
};

class SyntaxError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

class SortError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

/// A contract that breaks one of the well-formedness conditions on contracts;
/// `condition()` is 1..6, in the order i..vi.
class ContractError : public FrontendError {
 public:
  ContractError(Location loc, int condition, const std::string& msg);
  int condition() const { return condition_; }

 private:
  int condition_;
};

/// `pred(Z) -> c, cata_1(X_1,T_1,Y_1), ..., cata_n(X_n,T_n,Y_n) -> d`.
/// A catamorphism atom lists its parameters X, then its ADT argument T, then
/// its outputs Y.
struct Contract {
  std::string id;  // "rev@17": predicate and source line
  std::string pred;
  std::vector<Term> z;
  Term pre = Term::truth();
  std::vector<Atom> catas;
  Term post = Term::truth();
  Location loc;
  bool from_goal = false;  // lifted from a goal clause of the input
};

struct Diagnostic {
  Location loc;
  std::string message;
};

struct SourceProgram {
  SortTable sorts;
  std::vector<Clause> clauses;
  std::vector<Contract> contracts;
  std::map<std::string, std::vector<Sort>> signatures;
  std::vector<std::string> pred_order;    // first-occurrence order of predicates
  std::set<std::string> declared_preds;   // from `:- pred` directives
  std::set<std::string> synthetic_preds;  // introduced by normalization
  std::vector<Diagnostic> diagnostics;
};

// Untyped syntax tree, as produced by the parser before sort inference.
struct RawTerm {
  enum class Kind { Var, Int, App };
  Kind kind = Kind::App;
  std::string name;  // variable or functor; operators use their symbol
  std::int64_t value = 0;
  std::vector<RawTerm> args;
  Location loc;
};

struct RawAtom {
  std::string pred;
  std::vector<RawTerm> args;
  Location loc;
};

struct RawSortExpr {
  std::string name;  // "int", "bool", a parameter, or an ADT name
  std::vector<RawSortExpr> args;
};

struct RawClause {
  bool is_goal = false;
  RawAtom head;
  std::vector<RawTerm> constraints;
  std::vector<RawAtom> body;
  Location loc;
};

struct RawContract {
  RawAtom head;
  std::vector<RawTerm> pre;
  std::vector<RawAtom> catas;
  RawTerm post;
  Location loc;
};

struct RawData {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::pair<std::string, std::vector<RawSortExpr>>> constructors;
  Location loc;
};

struct RawPred {
  std::string name;
  std::vector<RawSortExpr> sorts;
  Location loc;
};

struct RawProgram {
  std::vector<RawClause> clauses;
  std::vector<RawContract> contracts;
  std::vector<RawData> data;
  std::vector<RawPred> preds;
};

/// Syntax only: no sorts, no normalization.
RawProgram parse_raw(const std::string& text);

/// Sort inference and construction of typed clauses and contracts. Positions
/// that nothing constrains default to `int`.
SourceProgram infer_sorts(const RawProgram& raw);

/// parse_raw + infer_sorts + normalization of clause atoms + the contract
/// well-formedness checks that need no predicate classification.
SourceProgram parse_program(const std::string& text);
SourceProgram parse_file(const std::string& path);

/// Rewrites atom arguments into distinct variables. Basic-sorted terms become
/// equalities; constructor terms in body atoms become calls to synthetic
/// `match_<ctor>` predicates, whose defining facts are added to the program.
void normalize_program(SourceProgram& p);

/// Checks the contract against the structural conditions. `catamorphisms`, if
/// given, is the set of predicates classified as catamorphisms and enables
/// the program-predicate and catamorphism checks of conditions i and iii.
void check_contract(const Contract& k, const SourceProgram& p, const std::set<std::string>* catamorphisms = nullptr);

/// `false <- ~d, c, pred(Z), Catas` over fresh variables.
Clause contract_to_goal(const Contract& k);

/// Turns goal clauses with exactly one program atom into contracts with a
/// true precondition and the negated goal constraint as postcondition. Goals
/// that do not have this shape are returned in `remaining`.
std::vector<Contract> lift_goals(const SourceProgram& p, const std::set<std::string>& program_preds,
                                 std::vector<Clause>& remaining);

/// Combines several contracts for one predicate into a single contract used
/// as an inductive lemma: catamorphisms are unioned (renamed apart) and the
/// postcondition is the conjunction of the `c_i => d_i`.
Contract merge_contracts(const std::vector<Contract>& ks);

/// The trivial contract `pred(Z) -> true`, for predicates without one.
Contract trivial_contract(const std::string& pred, const std::vector<Sort>& sig);

std::string contract_to_string(const Contract& k);

}  // namespace cata
