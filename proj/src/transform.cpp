#include "cata/transform.hpp"

#include "cata/print.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace cata {

Clause Definition::clause() const {
  Clause c;
  c.head = Atom{new_pred, head_vars};
  c.constraint = constraint;
  c.body.push_back(program_atom);
  for (const auto& a : catas) c.body.push_back(a);
  c.origin = new_pred;
  return c;
}

std::string to_string(const StepRecord& r) {
  std::ostringstream os;
  auto list = [&](const std::vector<std::string>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  };
  os << r.index << ' ' << r.rule << " in=";
  list(r.in);
  os << " out=";
  list(r.out);
  os << " q=" << r.answers;
  return os.str();
}

namespace {

std::vector<Term> adt_vars(const Atom& a) {
  std::vector<Term> out;
  for (const auto& t : a.args) {
    if (t.is_var() && t.sort().is_adt()) out.push_back(t);
  }
  return out;
}

bool shares_var(const std::vector<Term>& xs, const Atom& b) {
  for (const auto& t : b.args) {
    if (!t.sort().is_adt()) continue;
    for (const auto& x : xs) {
      if (occurs(x.var_id(), t)) return true;
    }
  }
  return false;
}

/// Extends `sigma` (pattern variables -> target terms) so that `pattern`
/// maps onto `target`. Pattern arguments are variables.
bool match_atom(const Atom& pattern, const Atom& target, Substitution& sigma) {
  if (pattern.pred != target.pred || pattern.args.size() != target.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& v = pattern.args[i];
    const Term& t = target.args[i];
    if (!v.is_var()) {
      if (!(v == t)) return false;
      continue;
    }
    if (const Term* b = sigma.find(v.var_id())) {
      if (!(*b == t)) return false;
    } else {
      sigma.set(v, t);
    }
  }
  return true;
}

/// Head arguments become distinct variables.
Clause normalize_head(Clause c) {
  if (!c.head) return c;
  std::unordered_set<VarId> seen;
  std::vector<Term> eqs{c.constraint};
  for (auto& t : c.head->args) {
    if (t.is_var() && seen.insert(t.var_id()).second) continue;
    Term v = Term::fresh_var("V", t.sort());
    eqs.push_back(mk_eq(v, t));
    t = v;
  }
  c.constraint = mk_and(std::move(eqs));
  return c;
}

}  // namespace

std::vector<Atom> cata_neighborhood(const Atom& a, const std::vector<Atom>& g, const PredicateClassification& cls) {
  const std::vector<Term> vs = adt_vars(a);
  std::vector<Atom> out;
  for (const auto& b : g) {
    if (cls.is_cata(b.pred) && shares_var(vs, b)) out.push_back(b);
  }
  return out;
}

Transformer::Transformer(const SourceProgram& p, const PredicateClassification& cls, std::map<std::string, Contract> lemmas,
                         ConstraintOracle& oracle, TransformOptions opts)
    : p_(p), cls_(cls), lemmas_(std::move(lemmas)), oracle_(oracle), opts_(opts) {
  for (const auto& c : p_.clauses) {
    if (!c.is_goal()) by_head_[c.head->pred].push_back(&c);
  }
}

bool Transformer::is_program_atom(const Atom& a) const { return !cls_.is_cata(a.pred); }

std::string Transformer::next_clause_id() { return "c" + std::to_string(++clause_counter_); }

void Transformer::record(std::string rule, std::vector<std::string> in, std::vector<std::string> out) {
  StepRecord r;
  r.index = log_.size() + 1;
  r.rule = std::move(rule);
  r.in = std::move(in);
  r.out = std::move(out);
  r.answers = oracle_.take();
  if (std::getenv("CATA_DEBUG")) std::cerr << to_string(r) << '\n';
  log_.push_back(std::move(r));
}

std::vector<Atom> Transformer::neighborhood(const Atom& a, const Clause& c) const {
  std::vector<Atom> all = cata_neighborhood(a, c.body, cls_);
  if (opts_.atoms_per_structure == 0) return all;
  std::vector<bool> keep(all.size(), true);
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  for (std::size_t i = all.size(); i-- > 0;) {
    const Term& t = all[i].args[cls_.catamorphisms.at(all[i].pred).adt_position];
    const auto key = std::make_pair(all[i].pred, debug_string(t));
    keep[i] = ++seen[key] <= opts_.atoms_per_structure;
  }
  std::vector<Atom> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (keep[i]) out.push_back(all[i]);
  }
  return out;
}

Definition* Transformer::maximal_for(const std::string& pred) {
  for (auto& d : defs_) {
    if (d.is_maximal && d.for_predicate == pred) return &d;
  }
  return nullptr;
}

std::optional<Transformer::Cover> Transformer::find_cover(const Clause& c, const Atom& a, const Definition& d) {
  Substitution sigma;
  if (!match_atom(d.program_atom, a, sigma)) return std::nullopt;
  const std::vector<Atom> need = neighborhood(a, c);
  for (const auto& n : need) {
    bool any = false;
    for (const auto& g : d.catas) {
      Substitution s2 = sigma;
      any = any || match_atom(g, n, s2);
    }
    if (!any) return std::nullopt;
  }
  std::optional<Cover> found;
  std::size_t attempts = 0;
  std::size_t visits = 0;
  // Depth-first search for a matching of `need` into the definition's catamorphisms.
  std::function<void(std::size_t, const Substitution&)> search = [&](std::size_t k, const Substitution& s) {
    if (found || attempts > 64 || ++visits > 4096) return;
    if (k == need.size()) {
      ++attempts;
      Substitution full = s;
      std::vector<Term> exists;
      for (const auto& v : vars_of(d.constraint)) {
        if (!full.find(v.var_id())) {
          Term e = Term::fresh_var(v.name(), v.sort());
          full.set(v, e);
          exists.push_back(e);
        }
      }
      if (oracle_.entails(c.constraint, full.apply(d.constraint), exists) == Entailment::Yes) found = Cover{&d, s};
      return;
    }
    for (const auto& g : d.catas) {
      Substitution s2 = s;
      if (match_atom(g, need[k], s2)) search(k + 1, s2);
      if (found) return;
    }
  };
  search(0, sigma);
  return found;
}

bool Transformer::covered(const Clause& c, const Atom& a, bool maximal_only) {
  for (const auto& d : defs_) {
    if (d.for_predicate != a.pred || (maximal_only && !d.is_maximal)) continue;
    if (find_cover(c, a, d)) return true;
  }
  return false;
}

Definition Transformer::make_definition(std::string name, const Term& constraint, const Atom& a, std::vector<Atom> catas) {
  Definition d;
  d.new_pred = std::move(name);
  d.for_predicate = a.pred;
  d.program_atom = a;
  d.catas = std::move(catas);
  d.constraint = constraint;
  std::vector<Term> vars;
  for (const auto& t : a.args) collect_vars(t, vars);
  for (const auto& b : d.catas) {
    for (const auto& t : b.args) collect_vars(t, vars);
  }
  collect_vars(constraint, vars);
  Substitution fresh;
  for (const auto& v : vars) fresh.set(v, Term::fresh_var(v.name(), v.sort()));
  d.program_atom = fresh.apply(d.program_atom);
  d.catas = fresh.apply(d.catas);
  d.constraint = fresh.apply(d.constraint);
  for (const auto& v : vars) {
    if (v.sort().is_basic()) d.head_vars.push_back(fresh.apply(v));
  }
  return d;
}

std::vector<Definition> Transformer::define(const std::vector<Clause>& in_cls) {
  std::vector<Definition> out;
  for (const auto& c : in_cls) {
    for (const auto& a : c.body) {
      if (!is_program_atom(a)) continue;
      if (covered(c, a, false)) continue;
      const std::vector<Atom> catas_a = neighborhood(a, c);
      Definition* m = maximal_for(a.pred);
      Definition d;
      std::string rule;
      if (m) {
        Substitution sigma;
        match_atom(m->program_atom, a, sigma);
        std::vector<Atom> merged = catas_a;
        for (const auto& g : m->catas) {
          bool matched = false;
          for (const auto& f : merged) {
            Substitution s2 = sigma;
            if (match_atom(g, f, s2)) {
              sigma = s2;
              matched = true;
              break;
            }
          }
          if (matched) continue;
          const std::size_t adt = cls_.catamorphisms.at(g.pred).adt_position;
          for (std::size_t i = 0; i < adt; ++i) {
            const Term& x = g.args[i];
            if (!x.is_var() || sigma.find(x.var_id())) continue;
            for (const auto& f : merged) {
              if (f.pred == g.pred) {
                sigma.set(x, f.args[i]);
                break;
              }
            }
          }
          for (const auto& t : g.args) {
            for (const auto& v : vars_of(t)) {
              if (!sigma.find(v.var_id())) sigma.set(v, Term::fresh_var(v.name(), v.sort()));
            }
          }
          merged.push_back(sigma.apply(g));
        }
        for (const auto& v : vars_of(m->constraint)) {
          if (!sigma.find(v.var_id())) sigma.set(v, Term::fresh_var(v.name(), v.sort()));
        }
        const Term alpha = widen(sigma.apply(m->constraint), c.constraint, oracle_);
        d = make_definition("ext" + std::to_string(++pred_counter_), alpha, a, std::move(merged));
        m->is_maximal = false;
        rule = "EXTEND";
      } else {
        std::vector<Term> inputs;
        for (const auto& t : a.args) {
          if (t.sort().is_basic()) collect_vars(t, inputs);
        }
        for (const auto& b : catas_a) {
          const std::size_t adt = cls_.catamorphisms.at(b.pred).adt_position;
          for (std::size_t i = 0; i < adt; ++i) collect_vars(b.args[i], inputs);
        }
        d = make_definition("new" + std::to_string(++pred_counter_), project(c.constraint, inputs), a, catas_a);
        rule = "PROJECT";
      }
      d.is_maximal = true;
      defs_.push_back(d);
      out.push_back(d);
      if (std::getenv("CATA_DEBUG")) std::cerr << "  " << debug_string(d.clause()) << "\n  from " << debug_string(c) << '\n';
      record(rule, {c.origin}, {d.new_pred});
    }
  }
  return out;
}

std::vector<Clause> Transformer::unfold_step(const Clause& c, std::size_t atom_index) {
  const Atom& a = c.body.at(atom_index);
  std::vector<Clause> out;
  auto it = by_head_.find(a.pred);
  if (it == by_head_.end()) return out;
  for (const Clause* k : it->second) {
    const Clause kr = rename_apart(*k);
    auto u = unify(a, *kr.head);
    if (!u) continue;
    std::vector<Term> parts{c.constraint, kr.constraint};
    for (const auto& e : u->equalities) parts.push_back(e);
    const Term constraint = u->subst.apply(mk_and(std::move(parts)));
    if (oracle_.is_sat(constraint) == SatResult::Unsat) continue;
    Clause r;
    if (c.head) r.head = u->subst.apply(*c.head);
    r.constraint = constraint;
    for (std::size_t i = 0; i < atom_index; ++i) r.body.push_back(u->subst.apply(c.body[i]));
    for (const auto& b : kr.body) r.body.push_back(u->subst.apply(b));
    for (std::size_t i = atom_index + 1; i < c.body.size(); ++i) r.body.push_back(u->subst.apply(c.body[i]));
    r.origin = c.origin;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Clause> Transformer::unfold_catas(const Clause& c) {
  std::vector<Clause> done;
  std::vector<Clause> work{c};
  while (!work.empty()) {
    Clause cur = std::move(work.front());
    work.erase(work.begin());
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < cur.body.size() && !at; ++i) {
      const Atom& b = cur.body[i];
      if (!cls_.is_cata(b.pred)) continue;
      if (!b.args[cls_.catamorphisms.at(b.pred).adt_position].is_var()) at = i;
    }
    if (!at) {
      done.push_back(std::move(cur));
      continue;
    }
    auto rs = unfold_step(cur, *at);
    work.insert(work.begin(), rs.begin(), rs.end());
  }
  return done;
}

Clause Transformer::apply_functionality(const Clause& c) {
  Clause r = c;
  std::vector<Term> eqs{c.constraint};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < r.body.size() && !changed; ++i) {
      const Atom& x = r.body[i];
      if (!cls_.is_cata(x.pred)) continue;
      const std::size_t adt = cls_.catamorphisms.at(x.pred).adt_position;
      for (std::size_t j = i + 1; j < r.body.size() && !changed; ++j) {
        const Atom& y = r.body[j];
        if (y.pred != x.pred) continue;
        bool same = true;
        for (std::size_t k = 0; k <= adt && same; ++k) same = x.args[k] == y.args[k];
        if (!same) continue;
        for (std::size_t k = adt + 1; k < x.args.size(); ++k) {
          if (!(x.args[k] == y.args[k])) eqs.push_back(mk_eq(x.args[k], y.args[k]));
        }
        r.body.erase(r.body.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  r.constraint = mk_and(std::move(eqs));
  return r;
}

std::vector<Clause> Transformer::unfold(const std::vector<Definition>& new_defs) {
  std::vector<Clause> out;
  for (const auto& d : new_defs) {
    const Clause dc = d.clause();
    std::vector<std::string> ids;
    std::vector<Clause> step1;
    for (auto& r : unfold_step(dc, 0)) {
      r.origin = next_clause_id();
      ids.push_back(r.origin);
      step1.push_back(std::move(r));
    }
    record("UNFOLD", {d.new_pred}, ids);
    for (const auto& c : step1) {
      std::vector<Clause> step2 = unfold_catas(c);
      std::vector<std::string> ids2;
      for (auto& r : step2) {
        r = apply_functionality(r);
        r.origin = next_clause_id();
        ids2.push_back(r.origin);
        out.push_back(r);
      }
      record("UNFOLD-CATA", {c.origin}, ids2);
    }
  }
  return out;
}

Clause Transformer::apply_contracts(const Clause& c) {
  Clause e = c;
  std::vector<Term> pres;
  std::vector<Term> posts;
  for (const auto& a : c.body) {
    if (!is_program_atom(a)) continue;
    auto it = lemmas_.find(a.pred);
    if (it == lemmas_.end()) throw TransformError("no contract for program predicate " + a.pred);
    const Contract& k = it->second;
    std::unordered_set<VarId> bound;
    Substitution z;
    for (std::size_t i = 0; i < k.z.size(); ++i) {
      z.set(k.z[i], a.args[i]);
      bound.insert(k.z[i].var_id());
    }
    std::vector<Term> free_params;
    for (const auto& cata : k.catas) {
      const std::size_t adt = cls_.catamorphisms.at(cata.pred).adt_position;
      for (std::size_t i = 0; i < adt; ++i) {
        const Term& x = cata.args[i];
        if (bound.count(x.var_id())) continue;
        if (std::find(free_params.begin(), free_params.end(), x) == free_params.end()) free_params.push_back(x);
      }
    }
    auto instantiate = [&](Substitution s) -> std::vector<Term> {
      // Reuse existing atoms first, so that free parameters get bound to
      // parameters already in the clause before any atom is added.
      auto try_reuse = [&](const Atom& cata) {
        const CataInfo& info = cls_.catamorphisms.at(cata.pred);
        const Term t = s.apply(cata.args[info.adt_position]);
        for (const auto& g : e.body) {
          if (g.pred != cata.pred || !(g.args[info.adt_position] == t)) continue;
          Substitution s2 = s;
          bool ok = true;
          for (std::size_t i = 0; i < info.adt_position && ok; ++i) {
            const Term& x = cata.args[i];
            if (bound.count(x.var_id()) || s2.find(x.var_id())) {
              ok = s2.apply(x) == g.args[i];
            } else {
              s2.set(x, g.args[i]);
            }
          }
          if (!ok) continue;
          for (std::size_t i = info.adt_position + 1; i < cata.args.size(); ++i) s2.set(cata.args[i], g.args[i]);
          s = std::move(s2);
          return true;
        }
        return false;
      };
      std::vector<Atom> pending = k.catas;
      while (!pending.empty()) {
        bool progress = false;
        for (std::size_t i = 0; i < pending.size();) {
          if (try_reuse(pending[i])) {
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
            progress = true;
          } else {
            ++i;
          }
        }
        if (progress) continue;
        // A free parameter takes the value of the same parameter of another
        // atom of this catamorphism, if the clause has one.
        const Atom& add = pending.front();
        const std::size_t adt = cls_.catamorphisms.at(add.pred).adt_position;
        for (std::size_t i = 0; i < adt; ++i) {
          const Term& x = add.args[i];
          if (bound.count(x.var_id()) || s.find(x.var_id())) continue;
          for (const auto& g : e.body) {
            if (g.pred == add.pred) {
              s.set(x, g.args[i]);
              break;
            }
          }
        }
        for (const auto& v : vars_of(pending.front())) {
          if (!bound.count(v.var_id()) && !s.find(v.var_id())) s.set(v, Term::fresh_var(v.name(), v.sort()));
        }
        e.body.push_back(s.apply(pending.front()));
        pending.erase(pending.begin());
      }
      for (const auto& v : vars_of(k.pre)) {
        if (!s.find(v.var_id())) s.set(v, Term::fresh_var(v.name(), v.sort()));
      }
      for (const auto& v : vars_of(k.post)) {
        if (!s.find(v.var_id())) s.set(v, Term::fresh_var(v.name(), v.sort()));
      }
      pres.push_back(s.apply(k.pre));
      posts.push_back(s.apply(k.post));
      std::vector<Term> binding;
      for (const auto& x : free_params) binding.push_back(s.apply(x));
      return binding;
    };
    std::vector<std::vector<Term>> seen{instantiate(z)};
    // Further instances for free parameters that other atoms of the clause
    // on the same structure suggest.
    for (const auto& cata : k.catas) {
      const CataInfo& info = cls_.catamorphisms.at(cata.pred);
      const Term t = z.apply(cata.args[info.adt_position]);
      for (const auto& g : c.body) {
        if (seen.size() > opts_.extra_instances) break;
        if (g.pred != cata.pred || !(g.args[info.adt_position] == t)) continue;
        Substitution s = z;
        bool ok = true;
        for (std::size_t i = 0; i < info.adt_position && ok; ++i) {
          const Term& x = cata.args[i];
          if (bound.count(x.var_id()) || s.find(x.var_id())) {
            ok = s.apply(x) == g.args[i];
          } else {
            s.set(x, g.args[i]);
          }
        }
        if (!ok) continue;
        std::vector<Term> binding;
        for (const auto& x : free_params) binding.push_back(s.find(x.var_id()) ? s.apply(x) : x);
        bool dup = false;
        for (const auto& b : seen) {
          bool same = true;
          for (std::size_t i = 0; i < b.size() && same; ++i) {
            same = binding[i] == free_params[i] || binding[i] == b[i];
          }
          dup = dup || same;
        }
        if (dup) continue;
        seen.push_back(instantiate(s));
      }
    }
  }
  const Term pre = mk_and(pres);
  std::unordered_set<VarId> in_e;
  for (const auto& v : vars_of(e)) in_e.insert(v.var_id());
  std::vector<Term> exists;
  for (const auto& v : vars_of(pre)) {
    if (!in_e.count(v.var_id())) exists.push_back(v);
  }
  if (oracle_.entails(e.constraint, pre, exists) == Entailment::Yes) {
    std::vector<Term> parts{e.constraint};
    parts.insert(parts.end(), pres.begin(), pres.end());
    parts.insert(parts.end(), posts.begin(), posts.end());
    e.constraint = mk_and(std::move(parts));
  }
  return e;
}

std::vector<Clause> Transformer::apply_contracts(const std::vector<Clause>& unf_cls) {
  std::vector<Clause> out;
  for (const auto& c : unf_cls) {
    Clause r = apply_contracts(c);
    r.origin = next_clause_id();
    record("APPLY-CONTRACTS", {c.origin}, {r.origin});
    out.push_back(std::move(r));
  }
  return out;
}

std::pair<std::vector<Clause>, std::vector<Clause>> Transformer::split_foldable(const std::vector<Clause>& r_cls) {
  std::pair<std::vector<Clause>, std::vector<Clause>> out;
  for (const auto& c : r_cls) {
    bool ok = true;
    for (const auto& a : c.body) {
      if (ok && is_program_atom(a)) ok = covered(c, a, false);
    }
    (ok ? out.first : out.second).push_back(c);
  }
  return out;
}

std::vector<Clause> Transformer::fold(const std::vector<Clause>& out_cls) {
  std::set<std::string> heads;
  for (const auto& d : defs_) {
    if (d.is_maximal) heads.insert(d.new_pred);
  }
  std::vector<Clause> result;
  std::size_t counter = 0;
  for (const auto& c : out_cls) {
    if (!c.is_goal() && !heads.count(c.head->pred)) continue;
    Clause r;
    r.head = c.head;
    r.constraint = c.constraint;
    // Catamorphism atoms of a definition that the clause lacks are added
    // (catamorphisms are total), once, so that two folds share them.
    std::vector<Atom> known = c.body;
    for (const auto& a : c.body) {
      if (!is_program_atom(a)) continue;
      Definition* m = maximal_for(a.pred);
      std::optional<Cover> cover;
      if (m) cover = find_cover(c, a, *m);
      if (!cover) throw TransformError("clause " + c.origin + " does not fold on " + a.pred);
      Substitution s = cover->sigma;
      for (const auto& g : m->catas) {
        bool mapped = true;
        for (const auto& v : vars_of(g)) mapped = mapped && s.find(v.var_id());
        if (mapped) continue;
        bool found = false;
        for (const auto& f : known) {
          Substitution s2 = s;
          if (match_atom(g, f, s2)) {
            s = std::move(s2);
            found = true;
            break;
          }
        }
        if (found) continue;
        const std::size_t adt = cls_.catamorphisms.at(g.pred).adt_position;
        for (std::size_t i = 0; i < adt; ++i) {
          const Term& x = g.args[i];
          if (!x.is_var() || s.find(x.var_id())) continue;
          for (const auto& f : known) {
            if (f.pred == g.pred) {
              s.set(x, f.args[i]);
              break;
            }
          }
        }
        for (const auto& v : vars_of(g)) {
          if (!s.find(v.var_id())) s.set(v, Term::fresh_var(v.name(), v.sort()));
        }
        known.push_back(s.apply(g));
      }
      Atom folded{m->new_pred, {}};
      for (const auto& u : m->head_vars) {
        if (!s.find(u.var_id())) s.set(u, Term::fresh_var(u.name(), u.sort()));
        folded.args.push_back(s.apply(u));
      }
      r.body.push_back(std::move(folded));
    }
    r = normalize_head(r);
    r.origin = "t" + std::to_string(++counter);
    record("FOLD", {c.origin}, {r.origin});
    result.push_back(std::move(r));
  }
  return result;
}

TransformResult Transformer::run(const std::vector<Clause>& goals) {
  std::vector<Clause> in_cls;
  std::vector<Clause> out_cls;
  std::size_t g = 0;
  for (const auto& goal : goals) {
    Clause c = goal;
    c.origin = "g" + std::to_string(++g);
    in_cls.push_back(c);
    out_cls.push_back(c);
  }
  TransformResult res;
  while (!in_cls.empty()) {
    if (++res.iterations > opts_.iteration_cap) {
      throw IterationCapExceeded("transformation did not terminate within " + std::to_string(opts_.iteration_cap) + " iterations");
    }
    const auto new_defs = define(in_cls);
    const auto unf = unfold(new_defs);
    const auto r = apply_contracts(unf);
    auto [yes, no] = split_foldable(r);
    std::vector<std::string> ids;
    for (const auto& c : no) ids.push_back(c.origin);
    record("SPLIT", {}, ids);
    in_cls = std::move(no);
    out_cls.insert(out_cls.end(), r.begin(), r.end());
  }
  res.clauses = fold(out_cls);
  res.defs = defs_;
  res.log = log_;
  return res;
}

}  // namespace cata
