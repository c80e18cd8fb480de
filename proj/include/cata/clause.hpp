#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cata/term.hpp"

namespace cata {

struct Atom {
  std::string pred;
  std::vector<Term> args;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// `H <- c, G`. A goal when `head` is empty (i.e. `false`).
struct Clause {
  std::optional<Atom> head;
  Term constraint = Term::truth();
  std::vector<Atom> body;
  std::string origin;  // "line 12", or the id of the derivation step

  bool is_goal() const { return !head.has_value(); }
};

/// Sort-preserving, idempotent map from variables to terms.
class Substitution {
 public:
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Term* find(VarId v) const;
  /// Adds `v -> t`, first applying the binding to the existing range so the
  /// result stays idempotent. `v` must not occur in `t`.
  void bind(const Term& v, const Term& t);
  /// Binds without composing; the caller guarantees idempotence.
  void set(const Term& v, const Term& t) { map_[v.var_id()] = t; }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  Clause apply(const Clause& c) const;
  std::vector<Atom> apply(const std::vector<Atom>& atoms) const;

  const std::unordered_map<VarId, Term>& entries() const { return map_; }

 private:
  std::unordered_map<VarId, Term> map_;
};

/// Result of unification modulo LIA: structural bindings plus the equalities
/// between non-variable basic-sorted terms that must hold for the two atoms
/// to denote the same ground atom.
struct Unifier {
  Substitution subst;
  std::vector<Term> equalities;
};

std::optional<Unifier> unify(const Atom& left, const Atom& right);

/// Most general unifier in the purely syntactic sense: absent when the
/// predicates differ, constructors or constants clash, the occurs check fails,
/// or the atoms only unify under an arithmetic side condition.
std::optional<Substitution> mgu(const Atom& a, const Atom& b);

std::vector<Term> vars_of(const Atom& a);
std::vector<Term> vars_of(const std::vector<Atom>& atoms);
std::vector<Term> vars_of(const Clause& c);

struct VarPartition {
  std::vector<Term> bvars;     // basic-sorted variables
  std::vector<Term> adt_vars;  // ADT-sorted variables
};

VarPartition var_partition(const std::vector<Atom>& atoms);

/// Renames every variable of the clause to a fresh one.
Clause rename_apart(const Clause& c);

/// Rewrites body atoms so their arguments are pairwise distinct variables:
/// non-variable basic arguments and repeated basic variables are replaced by
/// fresh variables constrained by an equality. Non-variable ADT arguments and
/// repeated ADT variables are left alone; callers that need them gone deal
/// with them separately.
Clause normalize_body_atoms(const Clause& c);

/// True when every variable occurring in the clause has a basic sort.
bool is_basic_sorted(const Clause& c);

/// Drops constraint-only variables that are defined by a top-level equality
/// (or boolean literal), substituting their definition. Meaning preserving:
/// such variables are existentially quantified in the body.
Clause eliminate_local_vars(const Clause& c);

}  // namespace cata
