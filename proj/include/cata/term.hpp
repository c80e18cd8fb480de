#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cata/sort.hpp"

namespace cata {

using VarId = std::uint64_t;

/// Node kinds. Constraints are boolean-sorted terms, so a single tree type
/// covers LIA terms, ADT constructor terms and LIA+Bool formulas.
enum class Op : std::uint8_t {
  Var,
  IntConst,
  BoolConst,
  Cons,  // ADT constructor application
  Add,
  Sub,
  Mul,  // at least one side is an integer constant
  Neg,
  Eq,  // integers or booleans
  Le,
  Lt,
  Ge,
  Gt,
  Not,
  And,  // n-ary
  Or,   // n-ary
  Implies,
  Ite,
};

class Term;

struct TermNode {
  Op op;
  Sort sort;
  std::int64_t value = 0;  // IntConst value, BoolConst 0/1
  VarId id = 0;            // Var only
  std::string name;        // Var print hint or constructor name
  std::vector<Term> args;
  std::size_t hash = 0;
};

/// Immutable, shared term handle. Cheap to copy.
class Term {
 public:
  Term() = default;

  static Term var(VarId id, std::string name, Sort sort);
  /// A variable with a process-wide unique id. Freshness never captures.
  static Term fresh_var(std::string hint, Sort sort);
  static Term int_const(std::int64_t v);
  static Term bool_const(bool v);
  static Term truth() { return bool_const(true); }
  static Term falsity() { return bool_const(false); }
  static Term cons(std::string ctor, Sort adt, std::vector<Term> args);
  static Term make(Op op, std::vector<Term> args);

  bool valid() const { return node_ != nullptr; }
  Op op() const { return node_->op; }
  const Sort& sort() const { return node_->sort; }
  std::int64_t int_value() const { return node_->value; }
  bool bool_value() const { return node_->value != 0; }
  VarId var_id() const { return node_->id; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }
  std::size_t hash() const { return node_->hash; }
  const TermNode* node() const { return node_.get(); }

  bool is_var() const { return op() == Op::Var; }
  bool is_const() const { return op() == Op::IntConst || op() == Op::BoolConst; }
  bool is_true() const { return op() == Op::BoolConst && bool_value(); }
  bool is_false() const { return op() == Op::BoolConst && !bool_value(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

/// Total structural order, stable across runs for terms over the same variables.
int compare(const Term& a, const Term& b);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Formula and arithmetic builders. These perform only local, meaning-preserving
// simplifications (flattening, unit laws, constant folding).
Term mk_and(std::vector<Term> conjuncts);
Term mk_and(const Term& a, const Term& b);
Term mk_or(std::vector<Term> disjuncts);
Term mk_not(const Term& a);
Term mk_implies(const Term& a, const Term& b);
Term mk_eq(const Term& a, const Term& b);
Term mk_ite(const Term& c, const Term& t, const Term& e);
Term mk_cmp(Op op, const Term& a, const Term& b);
Term mk_add(const Term& a, const Term& b);
Term mk_sub(const Term& a, const Term& b);
Term mk_mul(const Term& a, const Term& b);
Term mk_neg(const Term& a);

/// Negation pushed through the boolean connectives (`~(a => b)` becomes `a & ~b`).
Term negate(const Term& a);

/// Top-level conjuncts of `c` (`true` yields an empty list).
std::vector<Term> conjuncts(const Term& c);

/// Variables of `t` in order of first occurrence, without duplicates.
std::vector<Term> vars_of(const Term& t);
void collect_vars(const Term& t, std::vector<Term>& out);
bool occurs(VarId v, const Term& t);

/// Bottom-up rebuild, applying `leaf` to every variable.
Term map_vars(const Term& t, const std::function<Term(const Term&)>& leaf);

/// Constant folding and unit laws, applied bottom-up.
Term simplify(const Term& t);

}  // namespace cata
