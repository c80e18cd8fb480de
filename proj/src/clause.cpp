#include "cata/clause.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace cata {

const Term* Substitution::find(VarId v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  return map_vars(t, [this](const Term& v) {
    const Term* r = find(v.var_id());
    return r ? *r : v;
  });
}

void Substitution::bind(const Term& v, const Term& t) {
  const Term image = apply(t);
  Substitution single;
  single.map_[v.var_id()] = image;
  for (auto& [id, range] : map_) range = single.apply(range);
  map_[v.var_id()] = image;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Atom> Substitution::apply(const std::vector<Atom>& atoms) const {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply(a));
  return out;
}

Clause Substitution::apply(const Clause& c) const {
  Clause out;
  if (c.head) out.head = apply(*c.head);
  out.constraint = apply(c.constraint);
  out.body = apply(c.body);
  out.origin = c.origin;
  return out;
}

std::optional<Unifier> unify(const Atom& left, const Atom& right) {
  if (left.pred != right.pred || left.args.size() != right.args.size()) return std::nullopt;
  Unifier u;
  std::vector<std::pair<Term, Term>> pending_eqs;
  std::deque<std::pair<Term, Term>> work;
  for (std::size_t i = 0; i < left.args.size(); ++i) work.emplace_back(left.args[i], right.args[i]);

  while (!work.empty()) {
    auto [s, t] = work.front();
    work.pop_front();
    s = u.subst.apply(s);
    t = u.subst.apply(t);
    if (s == t) continue;
    if (s.sort() != t.sort()) return std::nullopt;
    const bool basic = s.sort().is_basic();
    if (s.is_var() || t.is_var()) {
      const Term& v = s.is_var() ? s : t;
      const Term& other = s.is_var() ? t : s;
      if (occurs(v.var_id(), other)) {
        if (!basic) return std::nullopt;
        pending_eqs.emplace_back(s, t);
        continue;
      }
      u.subst.bind(v, other);
      continue;
    }
    if (s.op() == Op::Cons && t.op() == Op::Cons) {
      if (s.name() != t.name() || s.args().size() != t.args().size()) return std::nullopt;
      for (std::size_t i = 0; i < s.args().size(); ++i) work.emplace_back(s.arg(i), t.arg(i));
      continue;
    }
    if (!basic) return std::nullopt;
    if (s.is_const() && t.is_const()) return std::nullopt;  // distinct constants
    pending_eqs.emplace_back(s, t);
  }

  for (const auto& [s, t] : pending_eqs) {
    Term eq = mk_eq(u.subst.apply(s), u.subst.apply(t));
    if (eq.is_true()) continue;
    if (eq.is_false()) return std::nullopt;
    u.equalities.push_back(eq);
  }
  return u;
}

std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
  auto u = unify(a, b);
  if (!u || !u->equalities.empty()) return std::nullopt;
  return std::move(u->subst);
}

std::vector<Term> vars_of(const Atom& a) {
  std::vector<Term> out;
  for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

std::vector<Term> vars_of(const std::vector<Atom>& atoms) {
  std::vector<Term> out;
  for (const auto& a : atoms) {
    for (const auto& t : a.args) collect_vars(t, out);
  }
  return out;
}

std::vector<Term> vars_of(const Clause& c) {
  std::vector<Term> out;
  if (c.head) {
    for (const auto& t : c.head->args) collect_vars(t, out);
  }
  collect_vars(c.constraint, out);
  for (const auto& a : c.body) {
    for (const auto& t : a.args) collect_vars(t, out);
  }
  return out;
}

VarPartition var_partition(const std::vector<Atom>& atoms) {
  VarPartition p;
  for (const auto& v : vars_of(atoms)) {
    (v.sort().is_adt() ? p.adt_vars : p.bvars).push_back(v);
  }
  return p;
}

Clause rename_apart(const Clause& c) {
  Substitution s;
  for (const auto& v : vars_of(c)) s.set(v, Term::fresh_var(v.name(), v.sort()));
  return s.apply(c);
}

Clause normalize_body_atoms(const Clause& c) {
  Clause out = c;
  std::vector<Term> extra;
  for (auto& atom : out.body) {
    std::unordered_set<VarId> seen;
    for (auto& arg : atom.args) {
      if (!arg.sort().is_basic()) {
        if (arg.is_var()) seen.insert(arg.var_id());
        continue;
      }
      if (arg.is_var() && seen.insert(arg.var_id()).second) continue;
      Term fresh = Term::fresh_var(arg.is_var() ? arg.name() : "V", arg.sort());
      extra.push_back(mk_eq(fresh, arg));
      seen.insert(fresh.var_id());
      arg = fresh;
    }
  }
  if (!extra.empty()) {
    extra.insert(extra.begin(), out.constraint);
    out.constraint = mk_and(std::move(extra));
  }
  return out;
}

bool is_basic_sorted(const Clause& c) {
  for (const auto& v : vars_of(c)) {
    if (!v.sort().is_basic()) return false;
  }
  return true;
}

namespace {

std::size_t count_occurrences(VarId v, const Term& t) {
  if (t.is_var()) return t.var_id() == v ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : t.args()) n += count_occurrences(v, a);
  return n;
}

}  // namespace

Clause eliminate_local_vars(const Clause& c) {
  std::unordered_set<VarId> keep;
  if (c.head) {
    for (const auto& v : vars_of(*c.head)) keep.insert(v.var_id());
  }
  for (const auto& v : vars_of(c.body)) keep.insert(v.var_id());

  std::vector<Term> lits = conjuncts(simplify(c.constraint));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < lits.size() && !changed; ++i) {
      const Term& lit = lits[i];
      std::optional<Term> var;
      Term def;
      auto is_local = [&](const Term& t) { return t.is_var() && !keep.count(t.var_id()); };
      if (is_local(lit) && lit.sort().is_bool()) {
        var = lit;
        def = Term::truth();
      } else if (lit.op() == Op::Not && is_local(lit.arg(0))) {
        var = lit.arg(0);
        def = Term::falsity();
      } else if (lit.op() == Op::Eq) {
        for (int side = 0; side < 2 && !var; ++side) {
          const Term& v = lit.arg(side);
          const Term& t = lit.arg(1 - side);
          if (is_local(v) && !occurs(v.var_id(), t)) {
            var = v;
            def = t;
          }
        }
      }
      if (!var) continue;
      std::size_t uses = 0;
      for (std::size_t j = 0; j < lits.size(); ++j) {
        if (j != i) uses += count_occurrences(var->var_id(), lits[j]);
      }
      // Only inline small definitions or single uses, so formulas do not blow up.
      if (uses > 1 && !(def.is_var() || def.is_const())) continue;
      Substitution s;
      s.set(*var, def);
      std::vector<Term> next;
      for (std::size_t j = 0; j < lits.size(); ++j) {
        if (j == i) continue;
        for (auto& piece : conjuncts(simplify(s.apply(lits[j])))) next.push_back(piece);
      }
      lits = std::move(next);
      changed = true;
    }
  }
  Clause out = c;
  out.constraint = mk_and(std::move(lits));
  return out;
}

}  // namespace cata
