#include "cata/cata.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cata/print.hpp"

namespace cata {

const char* to_string(Schema s) {
  switch (s) {
    case Schema::A: return "A";
    case Schema::B: return "B";
    case Schema::C: return "C";
    case Schema::D: return "D";
  }
  return "?";
}

std::set<std::string> PredicateClassification::cata_names() const {
  std::set<std::string> out;
  for (const auto& [name, info] : catamorphisms) out.insert(name);
  return out;
}

namespace {

using CallGraph = std::map<std::string, std::set<std::string>>;

CallGraph call_graph(const SourceProgram& p) {
  CallGraph g;
  for (const auto& c : p.clauses) {
    if (c.is_goal()) continue;
    auto& out = g[c.head->pred];
    for (const auto& a : c.body) out.insert(a.pred);
  }
  return g;
}

std::set<std::string> closure(std::set<std::string> seeds, const CallGraph& g) {
  std::vector<std::string> work(seeds.begin(), seeds.end());
  while (!work.empty()) {
    const std::string p = work.back();
    work.pop_back();
    auto it = g.find(p);
    if (it == g.end()) continue;
    for (const auto& q : it->second) {
      if (seeds.insert(q).second) work.push_back(q);
    }
  }
  return seeds;
}

/// Does a list-like (at most one recursive field per constructor) or a
/// tree-like sort lie underneath?
bool tree_shaped(const Sort& adt, const SortTable& sorts) {
  for (const auto& ctor : sorts.constructors(adt)) {
    std::size_t rec = 0;
    for (const auto& f : sorts.field_sorts(adt, ctor.name)) rec += f == adt ? 1 : 0;
    if (rec > 1) return true;
  }
  return false;
}

[[noreturn]] void schema_fail(const std::string& pred, const std::string& why) {
  throw SchemaError(pred + " is not a catamorphism: " + why);
}

std::string clause_where(const Clause& c) { return c.origin.empty() ? std::string() : " (" + c.origin + ")"; }

class SchemaChecker {
 public:
  SchemaChecker(const SourceProgram& p, std::map<std::string, CataInfo> known, ConstraintOracle* oracle)
      : p_(p), known_(std::move(known)), oracle_(oracle) {}

  const CataInfo& analyse(const std::string& pred) {
    if (auto it = known_.find(pred); it != known_.end()) return it->second;
    if (visiting_.count(pred)) schema_fail(pred, "it is mutually recursive with one of its auxiliaries");
    visiting_.insert(pred);
    CataInfo info = check(pred);
    visiting_.erase(pred);
    return known_.emplace(pred, std::move(info)).first->second;
  }

 private:
  CataInfo check(const std::string& pred) {
    auto sig_it = p_.signatures.find(pred);
    if (sig_it == p_.signatures.end()) schema_fail(pred, "unknown predicate");
    const std::vector<Sort>& sig = sig_it->second;

    CataInfo info;
    info.pred = pred;
    std::size_t adt_count = 0;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      if (sig[i].is_adt()) {
        info.adt_position = i;
        ++adt_count;
      }
    }
    if (adt_count != 1) schema_fail(pred, "it has " + std::to_string(adt_count) + " data-structure arguments, not one");
    info.adt_sort = sig[info.adt_position];
    info.param_arity = info.adt_position;
    for (std::size_t i = 0; i < info.adt_position; ++i) info.input_positions.push_back(i);
    for (std::size_t i = info.adt_position + 1; i < sig.size(); ++i) info.output_positions.push_back(i);
    if (info.output_positions.empty()) schema_fail(pred, "it has no output argument after the data structure");

    const auto& ctors = p_.sorts.constructors(info.adt_sort);
    std::map<std::string, std::size_t> by_ctor;
    for (std::size_t ci = 0; ci < p_.clauses.size(); ++ci) {
      const Clause& c = p_.clauses[ci];
      if (c.is_goal() || c.head->pred != pred) continue;
      const Term& pat = c.head->args[info.adt_position];
      if (pat.op() != Op::Cons) schema_fail(pred, "a clause does not match on a constructor" + clause_where(c));
      if (!by_ctor.emplace(pat.name(), ci).second) {
        schema_fail(pred, "more than one clause for constructor " + pat.name() + clause_where(c));
      }
    }
    bool any_aux = false;
    for (const auto& ctor : ctors) {
      auto it = by_ctor.find(ctor.name);
      if (it == by_ctor.end()) schema_fail(pred, "no clause for constructor " + ctor.name + ", so it is not total");
      const bool rec = check_clause(info, p_.clauses[it->second], any_aux);
      (rec ? info.recursive_clauses : info.base_clauses).push_back(it->second);
    }
    const bool tree = tree_shaped(info.adt_sort, p_.sorts);
    info.schema = any_aux ? (tree ? Schema::D : Schema::C) : (tree ? Schema::B : Schema::A);
    return info;
  }

  /// Returns whether the constructor of the clause has recursive fields.
  bool check_clause(CataInfo& info, const Clause& c, bool& any_aux) {
    const std::string& pred = info.pred;
    const Atom& head = *c.head;
    const Term& pat = head.args[info.adt_position];
    const auto fsorts = p_.sorts.field_sorts(info.adt_sort, pat.name());

    std::unordered_set<VarId> head_vars;
    std::unordered_set<VarId> params;
    std::unordered_map<VarId, std::size_t> fields;  // recursive fields only
    bool recursive = false;
    for (std::size_t i = 0; i < pat.args().size(); ++i) {
      const Term& f = pat.arg(i);
      if (!f.is_var()) schema_fail(pred, "constructor pattern " + pat.name() + " has a nested term, so recursion is not on an immediate subterm" + clause_where(c));
      if (!head_vars.insert(f.var_id()).second) schema_fail(pred, "repeated variable in the constructor pattern" + clause_where(c));
      if (fsorts[i] == info.adt_sort) {
        fields.emplace(f.var_id(), i);
        recursive = true;
      }
    }
    for (std::size_t i = 0; i < head.args.size(); ++i) {
      if (i == info.adt_position) continue;
      const Term& v = head.args[i];
      if (!v.is_var() || !head_vars.insert(v.var_id()).second) {
        schema_fail(pred, "head arguments are not distinct variables" + clause_where(c));
      }
      if (i < info.adt_position) params.insert(v.var_id());
    }

    std::set<std::size_t> recursed;
    std::unordered_set<VarId> outputs;
    std::vector<Term> call_outputs;
    for (const auto& a : c.body) {
      std::size_t adt_pos = a.args.size();
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i].sort().is_adt()) adt_pos = i;
      }
      if (adt_pos == a.args.size()) {
        schema_fail(pred, "body atom " + a.pred + " has no data-structure argument; base and combine parts must be constraints" + clause_where(c));
      }
      const Term& t = a.args[adt_pos];
      auto field = t.is_var() ? fields.find(t.var_id()) : fields.end();
      if (a.pred != pred) {
        if (field == fields.end()) schema_fail(pred, "auxiliary call " + a.pred + " is not on an immediate subterm" + clause_where(c));
        const CataInfo& aux = analyse(a.pred);
        if (aux.adt_position != adt_pos) schema_fail(pred, "auxiliary " + a.pred + " has an unexpected argument layout");
        for (std::size_t i = 0; i < adt_pos; ++i) {
          if (!a.args[i].is_var() || !params.count(a.args[i].var_id())) {
            schema_fail(pred, "parameter " + std::to_string(i + 1) + " of auxiliary call " + a.pred + " is not a parameter of " + pred + clause_where(c));
          }
        }
        if (std::find(info.auxiliaries.begin(), info.auxiliaries.end(), a.pred) == info.auxiliaries.end()) {
          info.auxiliaries.push_back(a.pred);
        }
        any_aux = true;
      } else {
        if (field == fields.end()) schema_fail(pred, "recursive call is not on an immediate subterm" + clause_where(c));
        if (!recursed.insert(field->second).second) schema_fail(pred, "more than one recursive call on the same subterm" + clause_where(c));
        for (std::size_t i = 0; i < adt_pos; ++i) {
          if (!(a.args[i] == head.args[i])) schema_fail(pred, "recursive call changes the parameters" + clause_where(c));
        }
      }
      for (std::size_t i = adt_pos + 1; i < a.args.size(); ++i) {
        const Term& v = a.args[i];
        if (!v.is_var() || head_vars.count(v.var_id()) || !outputs.insert(v.var_id()).second) {
          schema_fail(pred, "outputs of body atom " + a.pred + " are not fresh variables" + clause_where(c));
        }
        call_outputs.push_back(v);
      }
    }
    if (oracle_) check_function(info, c, call_outputs);
    return recursive;
  }

  /// Base and combine parts must define total functions from the inputs (head
  /// parameters, basic fields, outputs of calls) to the head outputs.
  void check_function(CataInfo& info, const Clause& c, const std::vector<Term>& call_outputs) {
    const Atom& head = *c.head;
    std::unordered_set<VarId> inputs;
    for (std::size_t i = 0; i < info.adt_position; ++i) inputs.insert(head.args[i].var_id());
    for (const auto& f : head.args[info.adt_position].args()) {
      if (f.sort().is_basic()) inputs.insert(f.var_id());
    }
    for (const auto& v : call_outputs) inputs.insert(v.var_id());
    std::vector<Term> others;
    std::vector<Term> outs;
    for (const auto& v : vars_of(c.constraint)) {
      if (!inputs.count(v.var_id())) others.push_back(v);
    }
    for (std::size_t i : info.output_positions) {
      const Term& v = head.args[i];
      outs.push_back(v);
      if (std::find(others.begin(), others.end(), v) == others.end()) others.push_back(v);
    }
    const std::string where = clause_where(c);
    if (oracle_->entails(Term::truth(), c.constraint, others) != Entailment::Yes) {
      info.warnings.push_back({{}, info.pred + ": could not show that the constraint defines a total function" + where});
    }
    Substitution copy;
    for (const auto& v : others) copy.set(v, Term::fresh_var(v.name(), v.sort()));
    std::vector<Term> differ;
    for (const auto& v : outs) differ.push_back(mk_not(mk_eq(v, copy.apply(v))));
    const Term q = mk_and({c.constraint, copy.apply(c.constraint), mk_or(differ)});
    if (oracle_->is_sat(q) != SatResult::Unsat) {
      info.warnings.push_back({{}, info.pred + ": could not show that the constraint defines a function" + where});
    }
  }

  const SourceProgram& p_;
  std::map<std::string, CataInfo> known_;
  ConstraintOracle* oracle_;
  std::set<std::string> visiting_;
};

}  // namespace

CataInfo check_schema(const std::string& pred, const SourceProgram& p, const std::map<std::string, CataInfo>* known,
                      ConstraintOracle* oracle) {
  SchemaChecker checker(p, known ? *known : std::map<std::string, CataInfo>{}, oracle);
  return checker.analyse(pred);
}

PredicateClassification classify(const SourceProgram& p) {
  const CallGraph g = call_graph(p);
  std::set<std::string> seed_prog;
  std::set<std::string> seed_cata;
  for (const auto& k : p.contracts) {
    seed_prog.insert(k.pred);
    for (const auto& a : k.catas) seed_cata.insert(a.pred);
  }
  const std::set<std::string> forced_prog = closure(seed_prog, g);
  const std::set<std::string> forced_cata = closure(seed_cata, g);
  for (const auto& q : forced_prog) {
    if (forced_cata.count(q)) {
      throw ClassificationError("classification conflict: " + q + " is required to be both a program predicate and a catamorphism");
    }
  }

  PredicateClassification out;
  std::map<std::string, CataInfo> known;
  for (const auto& [pred, sig] : p.signatures) {
    if (forced_prog.count(pred) || p.synthetic_preds.count(pred)) continue;
    if (forced_cata.count(pred)) {
      known.emplace(pred, check_schema(pred, p, &known));
      continue;
    }
    try {
      CataInfo info = check_schema(pred, p, &known);
      known.emplace(pred, std::move(info));
    } catch (const SchemaError&) {
    }
  }

  // Callees of program predicates are program predicates; catamorphisms may
  // only call catamorphisms.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [pred, sig] : p.signatures) {
      if (known.count(pred)) continue;
      auto it = g.find(pred);
      if (it == g.end()) continue;
      for (const auto& q : it->second) {
        if (!known.count(q)) continue;
        if (forced_cata.count(q)) {
          throw ClassificationError("classification conflict: catamorphism " + q + " is called by program predicate " + pred);
        }
        known.erase(q);
        changed = true;
      }
    }
    for (auto it = known.begin(); it != known.end();) {
      bool bad = false;
      for (const auto& aux : it->second.auxiliaries) bad = bad || !known.count(aux);
      if (bad && forced_cata.count(it->first)) {
        throw ClassificationError("classification conflict: catamorphism " + it->first + " calls a program predicate");
      }
      if (bad) {
        it = known.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  out.catamorphisms = std::move(known);
  for (const auto& [pred, sig] : p.signatures) {
    if (!out.catamorphisms.count(pred)) out.program_preds.insert(pred);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tupling

namespace {

std::vector<std::size_t> recursive_fields(const Sort& adt, const std::string& ctor, const SortTable& sorts) {
  std::vector<std::size_t> out;
  const auto fs = sorts.field_sorts(adt, ctor);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i] == adt) out.push_back(i);
  }
  return out;
}

const Clause& clause_for(const CataInfo& info, const std::vector<Clause>& clauses, const std::string& ctor) {
  for (const auto& c : clauses) {
    if (!c.is_goal() && c.head->pred == info.pred && c.head->args[info.adt_position].name() == ctor) return c;
  }
  throw SchemaError("no clause of " + info.pred + " for constructor " + ctor);
}

struct Tupler {
  const SourceProgram& p;
  const PredicateClassification& cls;
  std::map<std::string, TupleResult> memo;

  /// The predicate to use as auxiliary `name` after tupling, with its
  /// clauses and its output count.
  struct Plain {
    CataInfo info;
    std::vector<Clause> clauses;
    std::size_t own_outputs = 0;
  };

  Plain plain(const std::string& name) {
    const CataInfo& info = cls.catamorphisms.at(name);
    Plain out;
    out.own_outputs = info.output_positions.size();
    if (info.schema == Schema::A || info.schema == Schema::B) {
      out.info = info;
      for (std::size_t i : info.base_clauses) out.clauses.push_back(p.clauses[i]);
      for (std::size_t i : info.recursive_clauses) out.clauses.push_back(p.clauses[i]);
      return out;
    }
    const TupleResult& t = tuple(info);
    out.info = t.info;
    out.clauses = t.clauses;
    return out;
  }

  const TupleResult& tuple(const CataInfo& h) {
    if (auto it = memo.find(h.pred); it != memo.end()) return it->second;
    TupleResult r;
    r.replaces = h.pred;
    const std::vector<Sort>& hsig = p.signatures.at(h.pred);
    r.signature = hsig;
    std::string name = h.pred;

    std::vector<Plain> auxes;
    for (const auto& a : h.auxiliaries) {
      auxes.push_back(plain(a));
      name += "_" + a;
    }

    // Parameter correspondence, taken from the calls in h's clauses.
    std::vector<std::optional<std::vector<std::size_t>>> maps(auxes.size());
    for (std::size_t ci : h.recursive_clauses) {
      const Clause& c = p.clauses[ci];
      for (const auto& a : c.body) {
        auto pos = std::find(h.auxiliaries.begin(), h.auxiliaries.end(), a.pred);
        if (pos == h.auxiliaries.end()) continue;
        const std::size_t j = static_cast<std::size_t>(pos - h.auxiliaries.begin());
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < auxes[j].info.adt_position; ++i) {
          for (std::size_t k = 0; k < h.adt_position; ++k) {
            if (a.args[i] == c.head->args[k]) {
              m.push_back(k);
              break;
            }
          }
        }
        if (maps[j] && *maps[j] != m) throw SchemaError("cannot tuple " + h.pred + ": auxiliary " + a.pred + " is called with different parameters");
        maps[j] = m;
      }
    }

    std::size_t next_out = hsig.size();
    for (std::size_t j = 0; j < auxes.size(); ++j) {
      const Plain& ax = auxes[j];
      AuxSlot slot;
      slot.pred = h.auxiliaries[j];
      slot.param_map = maps[j].value_or(std::vector<std::size_t>{});
      slot.first_output = next_out;
      slot.output_count = ax.info.output_positions.size();
      const Atom& ahead = *ax.clauses.front().head;
      for (std::size_t k : ax.info.output_positions) r.signature.push_back(ahead.args[k].sort());
      next_out += slot.output_count;
      r.slots.push_back(slot);
    }

    r.info = h;
    r.info.pred = name;
    r.info.schema = (h.schema == Schema::C) ? Schema::A : Schema::B;
    r.info.auxiliaries.clear();
    r.info.base_clauses.clear();
    r.info.recursive_clauses.clear();
    r.info.warnings.clear();
    r.info.output_positions.clear();
    for (std::size_t i = h.adt_position + 1; i < r.signature.size(); ++i) r.info.output_positions.push_back(i);

    for (const auto& ctor : p.sorts.constructors(h.adt_sort)) {
      r.clauses.push_back(tuple_clause(h, r, auxes, ctor.name));
      (recursive_fields(h.adt_sort, ctor.name, p.sorts).empty() ? r.info.base_clauses : r.info.recursive_clauses)
          .push_back(r.clauses.size() - 1);
    }
    return memo.emplace(h.pred, std::move(r)).first->second;
  }

  Clause tuple_clause(const CataInfo& h, const TupleResult& r, const std::vector<Plain>& auxes, const std::string& ctor) {
    std::vector<Clause> hsrc;
    for (std::size_t ci : h.base_clauses) hsrc.push_back(p.clauses[ci]);
    for (std::size_t ci : h.recursive_clauses) hsrc.push_back(p.clauses[ci]);
    const Clause hc = rename_apart(clause_for(h, hsrc, ctor));
    const Atom& hh = *hc.head;
    const Term& pat = hh.args[h.adt_position];
    const auto rec = recursive_fields(h.adt_sort, ctor, p.sorts);

    std::vector<Term> constraint{hc.constraint};
    Atom head{r.info.pred, hh.args};
    // outputs[field][slot] : output tuple of "slot on field"; slot 0 is h itself.
    std::map<std::size_t, std::vector<std::vector<std::vector<Term>>>> seen;
    auto note = [&](std::size_t field, std::size_t slot, std::vector<Term> outs) {
      auto& v = seen[field];
      v.resize(auxes.size() + 1);
      v[slot].push_back(std::move(outs));
    };
    auto field_of = [&](const Term& t) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < pat.args().size(); ++i) {
        if (pat.arg(i) == t) return i;
      }
      return std::nullopt;
    };
    auto outputs_of = [](const Atom& a, std::size_t adt_pos) {
      return std::vector<Term>(a.args.begin() + static_cast<std::ptrdiff_t>(adt_pos) + 1, a.args.end());
    };

    for (const auto& a : hc.body) {
      std::size_t adt_pos = 0;
      while (!a.args[adt_pos].sort().is_adt()) ++adt_pos;
      const auto field = field_of(a.args[adt_pos]);
      if (a.pred == h.pred) {
        note(*field, 0, outputs_of(a, adt_pos));
        continue;
      }
      auto pos = std::find(h.auxiliaries.begin(), h.auxiliaries.end(), a.pred);
      const std::size_t j = static_cast<std::size_t>(pos - h.auxiliaries.begin());
      std::vector<Term> outs = outputs_of(a, adt_pos);
      // A tupled auxiliary carries extra outputs of its own auxiliaries.
      for (std::size_t k = outs.size(); k < r.slots[j].output_count; ++k) {
        outs.push_back(Term::fresh_var("Rx", r.signature[r.slots[j].first_output + k]));
      }
      note(*field, j + 1, std::move(outs));
    }

    for (std::size_t j = 0; j < auxes.size(); ++j) {
      const Plain& ax = auxes[j];
      const Clause fc = rename_apart(clause_for(ax.info, ax.clauses, ctor));
      const Atom& fh = *fc.head;
      Substitution s;
      const Term& fpat = fh.args[ax.info.adt_position];
      for (std::size_t i = 0; i < fpat.args().size(); ++i) s.set(fpat.arg(i), pat.arg(i));
      for (std::size_t i = 0; i < ax.info.adt_position; ++i) s.set(fh.args[i], hh.args[r.slots[j].param_map.at(i)]);
      const Clause g = s.apply(fc);
      constraint.push_back(g.constraint);
      for (std::size_t k : ax.info.output_positions) head.args.push_back(g.head->args[k]);
      for (const auto& a : g.body) {
        const auto field = field_of(a.args[ax.info.adt_position]);
        note(*field, j + 1, outputs_of(a, ax.info.adt_position));
      }
    }

    Clause out;
    std::vector<Atom> body;
    for (std::size_t fi : rec) {
      auto& slots = seen[fi];
      slots.resize(auxes.size() + 1);
      Atom call{r.info.pred, {}};
      for (std::size_t i = 0; i < h.adt_position; ++i) call.args.push_back(hh.args[i]);
      call.args.push_back(pat.arg(fi));
      for (std::size_t slot = 0; slot <= auxes.size(); ++slot) {
        const std::size_t first = slot == 0 ? h.adt_position + 1 : r.slots[slot - 1].first_output;
        const std::size_t count = slot == 0 ? h.output_positions.size() : r.slots[slot - 1].output_count;
        std::vector<Term> canon;
        if (slots[slot].empty()) {
          for (std::size_t k = 0; k < count; ++k) canon.push_back(Term::fresh_var("R", r.signature[first + k]));
        } else {
          canon = slots[slot].front();
          for (std::size_t o = 1; o < slots[slot].size(); ++o) {
            for (std::size_t k = 0; k < count; ++k) constraint.push_back(mk_eq(canon[k], slots[slot][o][k]));
          }
        }
        for (auto& v : canon) call.args.push_back(v);
      }
      body.push_back(std::move(call));
    }
    out.head = std::move(head);
    out.constraint = mk_and(std::move(constraint));
    out.body = std::move(body);
    out.origin = "tupling of " + h.pred;
    return normalize_body_atoms(out);
  }
};

}  // namespace

std::optional<TupleResult> tuple_zygomorphism(const CataInfo& h, const SourceProgram& p,
                                              const PredicateClassification& cls) {
  if (h.schema == Schema::A || h.schema == Schema::B) return std::nullopt;
  Tupler t{p, cls, {}};
  return t.tuple(h);
}

void rewrite_atoms(std::vector<Atom>& atoms, const TupleResult& t) {
  std::vector<Atom> out;
  std::vector<bool> used(atoms.size(), false);
  const std::size_t adt = t.info.adt_position;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].pred != t.replaces) continue;
    const Atom& a = atoms[i];
    Atom r{t.info.pred, a.args};
    for (const auto& slot : t.slots) {
      std::optional<std::size_t> match;
      for (std::size_t k = 0; k < atoms.size() && !match; ++k) {
        const Atom& b = atoms[k];
        if (used[k] || b.pred != slot.pred || b.args.size() <= slot.param_map.size()) continue;
        bool same = b.args[slot.param_map.size()] == a.args[adt];
        for (std::size_t q = 0; q < slot.param_map.size() && same; ++q) same = b.args[q] == a.args[slot.param_map[q]];
        if (same) match = k;
      }
      std::size_t own = 0;
      if (match) {
        used[*match] = true;
        const Atom& b = atoms[*match];
        for (std::size_t q = slot.param_map.size() + 1; q < b.args.size(); ++q, ++own) r.args.push_back(b.args[q]);
      }
      for (; own < slot.output_count; ++own) {
        r.args.push_back(Term::fresh_var("Y", t.signature[slot.first_output + own]));
      }
    }
    used[i] = true;
    atoms[i] = std::move(r);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!used[i] || atoms[i].pred == t.info.pred) out.push_back(atoms[i]);
  }
  atoms = std::move(out);
}

std::vector<std::string> apply_tupling(SourceProgram& p, PredicateClassification& cls) {
  std::set<std::string> used;
  for (const auto& k : p.contracts) {
    for (const auto& a : k.catas) used.insert(a.pred);
  }
  for (const auto& c : p.clauses) {
    if (!c.is_goal()) continue;
    for (const auto& a : c.body) used.insert(a.pred);
  }
  Tupler t{p, cls, {}};
  std::vector<TupleResult> results;
  for (const auto& name : p.pred_order) {
    if (!used.count(name) || !cls.is_cata(name)) continue;
    const CataInfo& info = cls.catamorphisms.at(name);
    if (info.schema == Schema::A || info.schema == Schema::B) continue;
    results.push_back(t.tuple(info));
  }
  std::vector<std::string> names;
  for (auto& r : results) {
    for (auto& k : p.contracts) rewrite_atoms(k.catas, r);
    for (auto& c : p.clauses) {
      if (c.is_goal()) rewrite_atoms(c.body, r);
    }
    const std::size_t base = p.clauses.size();
    for (auto& i : r.info.base_clauses) i += base;
    for (auto& i : r.info.recursive_clauses) i += base;
    for (const auto& c : r.clauses) p.clauses.push_back(c);
    p.signatures[r.info.pred] = r.signature;
    p.pred_order.push_back(r.info.pred);
    cls.catamorphisms[r.info.pred] = r.info;
    names.push_back(r.info.pred);
  }
  return names;
}

// ---------------------------------------------------------------------------
// Functionality and totality at bounded scale

FunctionalityReport functionality_totality_report(const CataInfo& c, const SourceProgram& p,
                                                  const PredicateClassification& cls, const Bounds& bounds) {
  std::set<std::string> preds{c.pred};
  std::vector<std::string> work{c.pred};
  while (!work.empty()) {
    const std::string q = work.back();
    work.pop_back();
    for (const auto& cl : p.clauses) {
      if (cl.is_goal() || cl.head->pred != q) continue;
      for (const auto& a : cl.body) {
        if (preds.insert(a.pred).second) work.push_back(a.pred);
      }
    }
  }
  (void)cls;
  std::vector<Clause> clauses;
  for (const auto& cl : p.clauses) {
    if (!cl.is_goal() && preds.count(cl.head->pred)) clauses.push_back(cl);
  }
  const GroundModel m = bounded_least_model(clauses, p.sorts, bounds);

  const std::vector<Sort>& sig = p.signatures.at(c.pred);
  std::vector<std::vector<Term>> domains;
  for (std::size_t i = 0; i <= c.adt_position; ++i) {
    if (sig[i].is_adt()) {
      domains.push_back(enumerate_values(sig[i], p.sorts, bounds));
    } else if (sig[i].is_bool()) {
      domains.push_back({Term::falsity(), Term::truth()});
    } else {
      std::vector<Term> d;
      for (auto v = bounds.lo; v <= bounds.hi; ++v) d.push_back(Term::int_const(v));
      domains.push_back(std::move(d));
    }
  }
  std::unordered_map<std::string, std::set<std::string>> outputs;
  auto key_of = [](const Atom& a, std::size_t upto) {
    VarNaming names;
    std::string k;
    for (std::size_t i = 0; i < upto; ++i) k += to_prolog(a.args[i], names) + ",";
    return k;
  };
  for (const auto& f : m.facts(c.pred)) {
    Atom out_part{c.pred, {f.args.begin() + static_cast<std::ptrdiff_t>(c.adt_position) + 1, f.args.end()}};
    outputs[key_of(f, c.adt_position + 1)].insert(key_of(out_part, out_part.args.size()));
  }

  FunctionalityReport rep;
  std::vector<std::size_t> idx(domains.size(), 0);
  for (const auto& d : domains) {
    if (d.empty()) return rep;
  }
  while (true) {
    Atom in{c.pred, {}};
    for (std::size_t i = 0; i < domains.size(); ++i) in.args.push_back(domains[i][idx[i]]);
    ++rep.inputs_checked;
    auto it = outputs.find(key_of(in, in.args.size()));
    const std::size_t n = it == outputs.end() ? 0 : it->second.size();
    if (n != 1 && rep.counterexample.empty()) {
      VarNaming names;
      for (std::size_t i = 0; i < in.args.size(); ++i) rep.counterexample += (i ? ", " : "") + to_prolog(in.args[i], names);
    }
    if (n == 0) rep.total = false;
    if (n > 1) rep.functional = false;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return rep;
}

}  // namespace cata
