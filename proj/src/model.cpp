#include "cata/model.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cata {

std::size_t AtomHash::operator()(const Atom& a) const {
  std::size_t h = std::hash<std::string>{}(a.pred);
  for (const auto& t : a.args) h = h * 1000003u ^ t.hash();
  return h;
}

bool GroundModel::insert(const Atom& a) {
  if (!set_.insert(a).second) return false;
  by_pred_[a.pred].push_back(a);
  return true;
}

const std::vector<Atom>& GroundModel::facts(const std::string& pred) const {
  static const std::vector<Atom> none;
  auto it = by_pred_.find(pred);
  return it == by_pred_.end() ? none : it->second;
}

int adt_depth(const Term& value) {
  if (value.op() != Op::Cons) return 0;
  int deepest = -1;
  for (const auto& a : value.args()) {
    if (a.sort() == value.sort()) deepest = std::max(deepest, adt_depth(a));
  }
  return deepest < 0 ? 0 : deepest + 1;
}

namespace {

void cartesian(const std::vector<std::vector<Term>>& choices, std::size_t i, std::vector<Term>& cur,
               const std::function<void(const std::vector<Term>&)>& emit) {
  if (i == choices.size()) {
    emit(cur);
    return;
  }
  for (const auto& v : choices[i]) {
    cur.push_back(v);
    cartesian(choices, i + 1, cur, emit);
    cur.pop_back();
  }
}

class Enumerator {
 public:
  Enumerator(const SortTable& sorts, const Bounds& bounds) : sorts_(sorts), bounds_(bounds) {}

  const std::vector<Term>& values(const Sort& sort, int depth) {
    const auto key = std::make_pair(sort.to_string(), depth);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Term> out;
    if (sort.is_int()) {
      for (auto v = bounds_.lo; v <= bounds_.hi; ++v) out.push_back(Term::int_const(v));
    } else if (sort.is_bool()) {
      out = {Term::falsity(), Term::truth()};
    } else {
      for (const auto& ctor : sorts_.constructors(sort)) {
        const auto fields = sorts_.field_sorts(sort, ctor.name);
        bool recursive = false;
        for (const auto& f : fields) recursive = recursive || f == sort;
        if (recursive && depth == 0) continue;
        std::vector<std::vector<Term>> choices;
        for (const auto& f : fields) choices.push_back(f == sort ? values(sort, depth - 1) : values(f, bounds_.depth));
        std::vector<Term> cur;
        cartesian(choices, 0, cur, [&](const std::vector<Term>& args) {
          out.push_back(Term::cons(ctor.name, sort, args));
        });
      }
    }
    return cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const SortTable& sorts_;
  const Bounds& bounds_;
  std::map<std::pair<std::string, int>, std::vector<Term>> cache_;
};

bool is_ground(const Term& t) { return vars_of(t).empty(); }

/// Matches a clause argument against a ground value. Non-variable basic
/// arguments are deferred as equalities.
bool match(const Term& pattern, const Term& value, Substitution& binding, std::vector<Term>& deferred) {
  if (pattern.is_var()) {
    if (const Term* b = binding.find(pattern.var_id())) return *b == value;
    binding.set(pattern, value);
    return true;
  }
  if (pattern.op() == Op::Cons) {
    if (value.op() != Op::Cons || value.name() != pattern.name() || value.args().size() != pattern.args().size()) {
      return false;
    }
    for (std::size_t i = 0; i < pattern.args().size(); ++i) {
      if (!match(pattern.arg(i), value.arg(i), binding, deferred)) return false;
    }
    return true;
  }
  deferred.push_back(mk_eq(pattern, value));
  return true;
}

using Emit = std::function<bool(const Substitution&)>;  // false stops the search

class Solver {
 public:
  Solver(const SortTable& sorts, const Bounds& bounds) : enumerator_(sorts, bounds), bounds_(bounds) {}

  /// Enumerates bindings of `c`'s variables that satisfy its body against
  /// `m`. When `delta` is given, atom `delta_pos` is drawn from it instead.
  bool run(const Clause& c, const GroundModel& m, const GroundModel* delta, std::size_t delta_pos, const Emit& emit) {
    Substitution binding;
    std::vector<Term> pending{c.constraint};
    return join(c, m, delta, delta_pos, 0, binding, pending, emit);
  }

 private:
  bool join(const Clause& c, const GroundModel& m, const GroundModel* delta, std::size_t delta_pos, std::size_t i,
            Substitution& binding, std::vector<Term>& pending, const Emit& emit) {
    if (i == c.body.size()) {
      std::vector<Term> extra;
      if (c.head) {
        for (const auto& a : c.head->args) collect_vars(a, extra);
      }
      return solve(binding, mk_and(pending), extra, emit);
    }
    const Atom& atom = c.body[i];
    const auto& source = (delta && i == delta_pos) ? delta->facts(atom.pred) : m.facts(atom.pred);
    for (const auto& fact : source) {
      if (fact.args.size() != atom.args.size()) continue;
      Substitution b = binding;
      std::vector<Term> p = pending;
      bool ok = true;
      for (std::size_t k = 0; k < atom.args.size() && ok; ++k) ok = match(atom.args[k], fact.args[k], b, p);
      if (!ok) continue;
      if (!join(c, m, delta, delta_pos, i + 1, b, p, emit)) return false;
    }
    return true;
  }

  bool solve(Substitution binding, const Term& constraint, const std::vector<Term>& extra, const Emit& emit) {
    Term cur = simplify(binding.apply(constraint));
    while (true) {
      if (cur.is_false()) return true;
      bool progressed = false;
      for (const auto& lit : conjuncts(cur)) {
        if (lit.is_var() && lit.sort().is_bool()) {
          binding.set(lit, Term::truth());
        } else if (lit.op() == Op::Not && lit.arg(0).is_var()) {
          binding.set(lit.arg(0), Term::falsity());
        } else if (lit.op() == Op::Eq && lit.arg(0).is_var() && is_ground(lit.arg(1))) {
          binding.set(lit.arg(0), evaluate(lit.arg(1)));
        } else if (lit.op() == Op::Eq && lit.arg(1).is_var() && is_ground(lit.arg(0))) {
          binding.set(lit.arg(1), evaluate(lit.arg(0)));
        } else {
          continue;
        }
        progressed = true;
        break;
      }
      if (!progressed) break;
      cur = simplify(binding.apply(cur));
    }
    std::vector<Term> open = vars_of(cur);
    for (const auto& v : extra) {
      if (!binding.find(v.var_id())) collect_vars(v, open);
    }
    if (open.empty()) {
      if (!cur.is_true()) return true;
      return emit(binding);
    }
    // Variables defined by an equation are left for last, so that the
    // equation fixes them instead of the range.
    std::vector<VarId> defined;
    for (const auto& lit : conjuncts(cur)) {
      if (lit.op() != Op::Eq) continue;
      for (const auto& side : lit.args()) {
        if (side.is_var()) defined.push_back(side.var_id());
      }
    }
    Term v = open.front();
    for (const auto& o : open) {
      if (std::find(defined.begin(), defined.end(), o.var_id()) == defined.end()) {
        v = o;
        break;
      }
    }
    for (const auto& value : enumerator_.values(v.sort(), bounds_.depth)) {
      Substitution b = binding;
      b.set(v, value);
      if (!solve(b, cur, extra, emit)) return false;
    }
    return true;
  }

  Enumerator enumerator_;
  const Bounds& bounds_;
};

bool within_bounds(const Atom& a, const Bounds& bounds) {
  for (const auto& t : a.args) {
    if (t.sort().is_adt() && adt_depth(t) > bounds.depth) return false;
  }
  return true;
}

}  // namespace

std::vector<Term> enumerate_values(const Sort& sort, const SortTable& sorts, const Bounds& bounds) {
  Enumerator e(sorts, bounds);
  return e.values(sort, bounds.depth);
}

Term evaluate(const Term& t) {
  Term v = simplify(t);
  if (!v.is_const() && v.op() != Op::Cons) throw std::logic_error("evaluate: term is not ground");
  return v;
}

std::vector<Atom> derive(const Clause& c, const GroundModel& m, const SortTable& sorts, const Bounds& bounds) {
  std::vector<Atom> out;
  if (!c.head) return out;
  Solver solver(sorts, bounds);
  solver.run(c, m, nullptr, 0, [&](const Substitution& s) {
    Atom a = s.apply(*c.head);
    for (auto& t : a.args) t = simplify(t);
    if (within_bounds(a, bounds)) out.push_back(std::move(a));
    return true;
  });
  return out;
}

bool body_satisfiable(const Clause& c, const GroundModel& m, const SortTable& sorts, const Bounds& bounds) {
  Clause probe = c;
  probe.head.reset();
  bool found = false;
  Solver solver(sorts, bounds);
  solver.run(probe, m, nullptr, 0, [&](const Substitution&) {
    found = true;
    return false;
  });
  return found;
}

GroundModel bounded_least_model(const std::vector<Clause>& p, const SortTable& sorts, const Bounds& bounds) {
  GroundModel model;
  Solver solver(sorts, bounds);
  std::vector<Atom> fresh;
  auto collect = [&](const Clause& c) {
    return [&fresh, &c, &bounds](const Substitution& s) {
      Atom a = s.apply(*c.head);
      for (auto& t : a.args) t = simplify(t);
      if (within_bounds(a, bounds)) fresh.push_back(std::move(a));
      return true;
    };
  };
  for (const auto& c : p) {
    if (c.head && c.body.empty()) solver.run(c, model, nullptr, 0, collect(c));
  }
  while (true) {
    GroundModel delta;
    for (const auto& a : fresh) {
      if (model.insert(a)) delta.insert(a);
    }
    fresh.clear();
    if (model.size() > bounds.atom_cap) {
      throw ResourceLimit("bounded model exceeds " + std::to_string(bounds.atom_cap) + " atoms");
    }
    if (delta.empty()) break;
    for (const auto& c : p) {
      if (!c.head) continue;
      for (std::size_t k = 0; k < c.body.size(); ++k) {
        if (!delta.facts(c.body[k].pred).empty()) solver.run(c, model, &delta, k, collect(c));
      }
    }
  }
  return model;
}

}  // namespace cata
