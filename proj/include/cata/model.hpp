#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cata/clause.hpp"
#include "cata/sort.hpp"

namespace cata {

/// Bounds for the ground evaluator. `depth` bounds the recursive nesting of
/// ADT values (list length, tree height); `lo..hi` is the range enumerated
/// for integer variables that no equation determines.
struct Bounds {
  int depth = 3;
  std::int64_t lo = 0;
  std::int64_t hi = 2;
  std::size_t atom_cap = 200000;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const;
};

/// A finite set of ground atoms, indexed by predicate.
class GroundModel {
 public:
  bool insert(const Atom& a);
  bool contains(const Atom& a) const { return set_.count(a) != 0; }
  const std::vector<Atom>& facts(const std::string& pred) const;
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

 private:
  std::unordered_set<Atom, AtomHash> set_;
  std::unordered_map<std::string, std::vector<Atom>> by_pred_;
};

/// Recursive nesting depth of a ground ADT value: base constructors have
/// depth 0, and every constructor adds one to the deepest same-sorted field.
int adt_depth(const Term& value);

/// All ground values of `sort` within the bounds.
std::vector<Term> enumerate_values(const Sort& sort, const SortTable& sorts, const Bounds& bounds);

/// Bottom-up fixpoint of the ground instances of the definite clauses of `p`
/// whose ADT values stay within the bounds. Goals are ignored. Throws
/// ResourceLimit when the model exceeds `bounds.atom_cap`.
GroundModel bounded_least_model(const std::vector<Clause>& p, const SortTable& sorts, const Bounds& bounds);

/// True when some ground instance of the body of `c` (constraint and atoms)
/// holds in `m`.
bool body_satisfiable(const Clause& c, const GroundModel& m, const SortTable& sorts, const Bounds& bounds);

/// Ground instances of the head of `c` derivable in one step from `m`.
std::vector<Atom> derive(const Clause& c, const GroundModel& m, const SortTable& sorts, const Bounds& bounds);

/// Evaluates a ground basic-sorted term to a constant.
Term evaluate(const Term& t);

}  // namespace cata
