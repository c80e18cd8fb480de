#include "cata/frontend.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cata/print.hpp"

namespace cata {

namespace {

// ---------------------------------------------------------------------------
// Type terms for inference. Unresolved variables default to int.

class TypeStore {
 public:
  int var() {
    nodes_.push_back({true, "", {}, static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }

  int con(std::string name, std::vector<int> args = {}) {
    nodes_.push_back({false, std::move(name), std::move(args), static_cast<int>(nodes_.size())});
    return nodes_.back().parent;
  }

  int from_sort(const Sort& s, std::map<std::string, int>& params) {
    switch (s.kind()) {
      case SortKind::Int: return con("int");
      case SortKind::Bool: return con("bool");
      case SortKind::Param: {
        auto it = params.find(s.name());
        if (it == params.end()) it = params.emplace(s.name(), var()).first;
        return it->second;
      }
      case SortKind::Adt: {
        std::vector<int> args;
        for (const auto& a : s.args()) args.push_back(from_sort(a, params));
        return con(s.name(), std::move(args));
      }
    }
    return con("int");
  }

  int find(int x) {
    while (nodes_[x].parent != x) {
      nodes_[x].parent = nodes_[nodes_[x].parent].parent;
      x = nodes_[x].parent;
    }
    return x;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].is_var) {
      if (occurs(a, b)) return false;
      nodes_[a].parent = b;
      return true;
    }
    if (nodes_[b].is_var) return unify(b, a);
    if (nodes_[a].name != nodes_[b].name || nodes_[a].args.size() != nodes_[b].args.size()) return false;
    const auto args_a = nodes_[a].args;
    const auto args_b = nodes_[b].args;
    for (std::size_t i = 0; i < args_a.size(); ++i) {
      if (!unify(args_a[i], args_b[i])) return false;
    }
    return true;
  }

  Sort resolve(int x) {
    x = find(x);
    const Node& n = nodes_[x];
    if (n.is_var || n.name == "int") return Sort::integer();
    if (n.name == "bool") return Sort::boolean();
    std::vector<Sort> args;
    for (int a : n.args) args.push_back(resolve(a));
    return Sort::adt(n.name, std::move(args));
  }

  std::string show(int x) { return resolve_partial(x); }

 private:
  struct Node {
    bool is_var;
    std::string name;
    std::vector<int> args;
    int parent;
  };

  bool occurs(int v, int t) {
    t = find(t);
    if (t == v) return true;
    for (int a : nodes_[t].args) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  std::string resolve_partial(int x) {
    x = find(x);
    const Node& n = nodes_[x];
    if (n.is_var) return "_";
    std::string s = n.name;
    if (!n.args.empty()) {
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? "," : "") + resolve_partial(n.args[i]);
      s += ")";
    }
    return s;
  }

  std::vector<Node> nodes_;
};

using Scope = std::map<std::string, int>;

class Inference {
 public:
  explicit Inference(const RawProgram& raw) : raw_(raw) {}

  SourceProgram run() {
    declare_data();
    for (const auto& pd : raw_.preds) declare_pred(pd);
    clause_scopes_.resize(raw_.clauses.size());
    for (std::size_t i = 0; i < raw_.clauses.size(); ++i) infer_clause(raw_.clauses[i], clause_scopes_[i]);
    contract_scopes_.resize(raw_.contracts.size());
    for (std::size_t i = 0; i < raw_.contracts.size(); ++i) infer_contract(raw_.contracts[i], contract_scopes_[i]);

    for (const auto& name : out_.pred_order) {
      std::vector<Sort> sig;
      for (int t : sigs_.at(name)) sig.push_back(types_.resolve(t));
      out_.signatures[name] = std::move(sig);
    }
    for (std::size_t i = 0; i < raw_.clauses.size(); ++i) out_.clauses.push_back(build_clause(raw_.clauses[i], clause_scopes_[i]));
    for (std::size_t i = 0; i < raw_.contracts.size(); ++i) {
      out_.contracts.push_back(build_contract(raw_.contracts[i], contract_scopes_[i]));
    }
    return std::move(out_);
  }

 private:
  Sort to_sort(const RawSortExpr& e, const std::set<std::string>& params, Location loc) {
    if (params.count(e.name)) return Sort::param(e.name);
    if (e.name == "int" && e.args.empty()) return Sort::integer();
    if (e.name == "bool" && e.args.empty()) return Sort::boolean();
    const AdtDecl* d = out_.sorts.find_adt(e.name);
    if (!d && !pending_adts_.count(e.name)) throw SortError(loc, "unknown sort '" + e.name + "'");
    const std::size_t arity = d ? d->params.size() : pending_adts_.at(e.name);
    if (arity != e.args.size()) throw SortError(loc, "sort '" + e.name + "' expects " + std::to_string(arity) + " arguments");
    std::vector<Sort> args;
    for (const auto& a : e.args) args.push_back(to_sort(a, params, loc));
    return Sort::adt(e.name, std::move(args));
  }

  void declare_data() {
    for (const auto& d : raw_.data) pending_adts_[d.name] = d.params.size();
    for (const auto& d : raw_.data) {
      AdtDecl decl;
      decl.name = d.name;
      decl.params = d.params;
      const std::set<std::string> params(d.params.begin(), d.params.end());
      for (const auto& [ctor, fields] : d.constructors) {
        ConstructorDecl cd{ctor, {}};
        for (const auto& f : fields) cd.fields.push_back(to_sort(f, params, d.loc));
        decl.constructors.push_back(std::move(cd));
      }
      try {
        out_.sorts.declare(std::move(decl));
      } catch (const std::invalid_argument& e) {
        throw SortError(d.loc, e.what());
      }
    }
  }

  std::vector<int>& signature(const std::string& pred, std::size_t arity, Location loc) {
    auto it = sigs_.find(pred);
    if (it == sigs_.end()) {
      std::vector<int> sig;
      for (std::size_t i = 0; i < arity; ++i) sig.push_back(types_.var());
      it = sigs_.emplace(pred, std::move(sig)).first;
      out_.pred_order.push_back(pred);
    } else if (it->second.size() != arity) {
      throw SortError(loc, "predicate " + pred + " used with arity " + std::to_string(arity) + " but earlier with " +
                               std::to_string(it->second.size()));
    }
    return it->second;
  }

  void declare_pred(const RawPred& pd) {
    auto& sig = signature(pd.name, pd.sorts.size(), pd.loc);
    out_.declared_preds.insert(pd.name);
    for (std::size_t i = 0; i < pd.sorts.size(); ++i) {
      std::map<std::string, int> params;
      const int t = types_.from_sort(to_sort(pd.sorts[i], {}, pd.loc), params);
      if (!types_.unify(sig[i], t)) arg_conflict(pd.name, i, pd.loc);
    }
  }

  [[noreturn]] void arg_conflict(const std::string& pred, std::size_t i, Location loc) {
    throw SortError(loc, "sort conflict on argument " + std::to_string(i + 1) + " of predicate " + pred);
  }

  void infer_atom(const RawAtom& a, Scope& scope) {
    auto& sig = signature(a.pred, a.args.size(), a.loc);
    const std::vector<int> sig_copy = sig;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const int t = infer(a.args[i], scope);
      if (!types_.unify(t, sig_copy[i])) arg_conflict(a.pred, i, a.args[i].loc);
    }
  }

  void infer_clause(const RawClause& c, Scope& scope) {
    if (!c.is_goal) infer_atom(c.head, scope);
    for (const auto& k : c.constraints) expect(k, types_.con("bool"), scope);
    for (const auto& a : c.body) infer_atom(a, scope);
  }

  void infer_contract(const RawContract& k, Scope& scope) {
    infer_atom(k.head, scope);
    for (const auto& c : k.pre) expect(c, types_.con("bool"), scope);
    for (const auto& a : k.catas) infer_atom(a, scope);
    expect(k.post, types_.con("bool"), scope);
  }

  void expect(const RawTerm& t, int type, Scope& scope) {
    const int actual = infer(t, scope);
    if (!types_.unify(actual, type)) mismatch(t, actual, type);
  }

  [[noreturn]] void mismatch(const RawTerm& t, int actual, int expected) {
    const std::string detail = types_.show(actual) + " vs " + types_.show(expected);
    if (t.kind == RawTerm::Kind::Var) throw SortError(t.loc, "sort conflict on variable " + t.name + " (" + detail + ")");
    throw SortError(t.loc, "sort conflict in '" + t.name + "' term (" + detail + ")");
  }

  int infer(const RawTerm& t, Scope& scope) {
    int ty = infer_node(t, scope);
    node_types_[&t] = ty;
    return ty;
  }

  int infer_node(const RawTerm& t, Scope& scope) {
    switch (t.kind) {
      case RawTerm::Kind::Int: return types_.con("int");
      case RawTerm::Kind::Var: {
        auto it = scope.find(t.name);
        if (it == scope.end()) it = scope.emplace(t.name, types_.var()).first;
        return it->second;
      }
      case RawTerm::Kind::App: break;
    }
    const std::string& f = t.name;
    const std::size_t n = t.args.size();
    auto arity = [&](std::size_t k) {
      if (n != k) throw SortError(t.loc, "'" + f + "' expects " + std::to_string(k) + " arguments");
    };
    if (f == "true" || f == "false") {
      arity(0);
      return types_.con("bool");
    }
    if (f == "&" || f == "|" || f == "=>" || f == "~") {
      arity(f == "~" ? 1 : 2);
      for (const auto& a : t.args) expect(a, types_.con("bool"), scope);
      return types_.con("bool");
    }
    if (f == "=" || f == "\\=" || f == "!=") {
      arity(2);
      const int l = infer(t.args[0], scope);
      const int r = infer(t.args[1], scope);
      if (!types_.unify(l, r)) {
        if (t.args[1].kind == RawTerm::Kind::Var && t.args[0].kind != RawTerm::Kind::Var) mismatch(t.args[1], r, l);
        mismatch(t.args[0], l, r);
      }
      return types_.con("bool");
    }
    if (f == "=<" || f == "<" || f == "<=" || f == ">=" || f == ">") {
      arity(2);
      for (const auto& a : t.args) expect(a, types_.con("int"), scope);
      return types_.con("bool");
    }
    if (f == "+" || f == "-" || f == "*" || f == "neg") {
      arity(f == "neg" ? 1 : 2);
      for (const auto& a : t.args) expect(a, types_.con("int"), scope);
      return types_.con("int");
    }
    if (f == "ite") {
      arity(3);
      expect(t.args[0], types_.con("bool"), scope);
      const int a = infer(t.args[1], scope);
      expect(t.args[2], a, scope);
      return a;
    }
    const AdtDecl* owner = out_.sorts.owner_of(f);
    const ConstructorDecl* ctor = out_.sorts.find_constructor(f);
    if (!owner || !ctor) throw SortError(t.loc, "unknown function symbol " + f + "/" + std::to_string(n));
    arity(ctor->fields.size());
    std::map<std::string, int> params;
    std::vector<int> param_types;
    for (const auto& p : owner->params) param_types.push_back(params.emplace(p, types_.var()).first->second);
    for (std::size_t i = 0; i < n; ++i) expect(t.args[i], types_.from_sort(ctor->fields[i], params), scope);
    return types_.con(owner->name, param_types);
  }

  // -- term construction ----------------------------------------------------

  using VarMap = std::map<std::string, Term>;

  Term build(const RawTerm& t, const Scope& scope, VarMap& vars) {
    switch (t.kind) {
      case RawTerm::Kind::Int: return Term::int_const(t.value);
      case RawTerm::Kind::Var: {
        auto it = vars.find(t.name);
        if (it == vars.end()) {
          const std::string hint = t.name[0] == '_' ? "V" : t.name;
          it = vars.emplace(t.name, Term::fresh_var(hint, types_.resolve(scope.at(t.name)))).first;
        }
        return it->second;
      }
      case RawTerm::Kind::App: break;
    }
    const std::string& f = t.name;
    std::vector<Term> a;
    for (const auto& arg : t.args) a.push_back(build(arg, scope, vars));
    if (f == "true") return Term::truth();
    if (f == "false") return Term::falsity();
    if (f == "&") return mk_and(a[0], a[1]);
    if (f == "|") return mk_or({a[0], a[1]});
    if (f == "=>") return mk_implies(a[0], a[1]);
    if (f == "~") return mk_not(a[0]);
    if (f == "=") return mk_eq(a[0], a[1]);
    if (f == "\\=" || f == "!=") return mk_not(mk_eq(a[0], a[1]));
    if (f == "=<" || f == "<=") return mk_cmp(Op::Le, a[0], a[1]);
    if (f == "<") return mk_cmp(Op::Lt, a[0], a[1]);
    if (f == ">=") return mk_cmp(Op::Ge, a[0], a[1]);
    if (f == ">") return mk_cmp(Op::Gt, a[0], a[1]);
    if (f == "+") return mk_add(a[0], a[1]);
    if (f == "-") return mk_sub(a[0], a[1]);
    if (f == "neg") return mk_neg(a[0]);
    if (f == "*") {
      if (a[0].op() != Op::IntConst && a[1].op() != Op::IntConst) {
        throw SortError(t.loc, "non-linear multiplication");
      }
      return mk_mul(a[0], a[1]);
    }
    if (f == "ite") return mk_ite(a[0], a[1], a[2]);
    return Term::cons(f, types_.resolve(node_types_.at(&t)), std::move(a));
  }

  Atom build_atom(const RawAtom& a, const Scope& scope, VarMap& vars) {
    Atom out{a.pred, {}};
    for (const auto& t : a.args) out.args.push_back(build(t, scope, vars));
    return out;
  }

  Clause build_clause(const RawClause& c, const Scope& scope) {
    VarMap vars;
    Clause out;
    out.origin = "line " + std::to_string(c.loc.line);
    if (!c.is_goal) out.head = build_atom(c.head, scope, vars);
    std::vector<Term> cs;
    for (const auto& k : c.constraints) cs.push_back(build(k, scope, vars));
    out.constraint = mk_and(std::move(cs));
    for (const auto& a : c.body) out.body.push_back(build_atom(a, scope, vars));
    resolve_adt_equalities(out, c.loc);
    return out;
  }

  /// Top-level equalities between ADT terms are solved away by substitution.
  static void resolve_adt_equalities(Clause& c, Location loc) {
    while (true) {
      std::vector<Term> lits = conjuncts(c.constraint);
      std::size_t at = lits.size();
      for (std::size_t i = 0; i < lits.size() && at == lits.size(); ++i) {
        if (lits[i].op() == Op::Eq && lits[i].arg(0).sort().is_adt()) at = i;
      }
      if (at == lits.size()) break;
      const Term eq = lits[at];
      lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(at));
      c.constraint = mk_and(lits);
      Atom l{"=", {eq.arg(0)}};
      Atom r{"=", {eq.arg(1)}};
      auto u = unify(l, r);
      if (!u) {
        c.constraint = Term::falsity();
        break;
      }
      c = u->subst.apply(c);
      u->equalities.insert(u->equalities.begin(), c.constraint);
      c.constraint = mk_and(u->equalities);
    }
    std::vector<Term> nested;
    std::vector<Term> stack{c.constraint};
    while (!stack.empty()) {
      Term t = stack.back();
      stack.pop_back();
      if (t.op() == Op::Eq && t.arg(0).sort().is_adt()) {
        throw SortError(loc, "equality between data structures is only supported as a top-level conjunct");
      }
      for (const auto& a : t.args()) {
        if (a.sort().is_bool()) stack.push_back(a);
      }
    }
  }

  Contract build_contract(const RawContract& k, const Scope& scope) {
    VarMap vars;
    Contract out;
    out.pred = k.head.pred;
    out.id = k.head.pred + "@" + std::to_string(k.loc.line);
    out.loc = k.loc;
    for (const auto& t : k.head.args) out.z.push_back(build(t, scope, vars));
    std::vector<Term> pre;
    for (const auto& c : k.pre) pre.push_back(build(c, scope, vars));
    out.pre = mk_and(std::move(pre));
    for (const auto& a : k.catas) out.catas.push_back(build_atom(a, scope, vars));
    out.post = build(k.post, scope, vars);
    return out;
  }

  const RawProgram& raw_;
  SourceProgram out_;
  TypeStore types_;
  std::map<std::string, std::size_t> pending_adts_;
  std::map<std::string, std::vector<int>> sigs_;
  std::unordered_map<const RawTerm*, int> node_types_;
  std::vector<Scope> clause_scopes_;
  std::vector<Scope> contract_scopes_;
};

}  // namespace

SourceProgram infer_sorts(const RawProgram& raw) { return Inference(raw).run(); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

class Normalizer {
 public:
  explicit Normalizer(SourceProgram& p) : p_(p) {}

  void run() {
    std::vector<Clause> out;
    for (const auto& c : p_.clauses) out.push_back(normalize(c));
    for (auto& c : synthetic_) out.push_back(std::move(c));
    p_.clauses = std::move(out);
  }

 private:
  Clause normalize(const Clause& c) {
    Clause out = c;
    std::vector<Term> eqs{out.constraint};
    if (out.head) {
      std::unordered_set<VarId> seen;
      for (auto& arg : out.head->args) {
        if (!arg.sort().is_basic()) continue;
        if (arg.is_var() && seen.insert(arg.var_id()).second) continue;
        Term v = Term::fresh_var(arg.is_var() ? arg.name() : "V", arg.sort());
        eqs.push_back(mk_eq(v, arg));
        arg = v;
      }
    }
    std::vector<Atom> body;
    for (const auto& a : out.body) {
      Atom atom = a;
      std::vector<Atom> before;
      std::unordered_set<VarId> adt_seen;
      for (auto& arg : atom.args) {
        if (!arg.sort().is_adt()) continue;
        if (arg.op() == Op::Cons) arg = match_var(arg, before);
        if (!adt_seen.insert(arg.var_id()).second) {
          throw SortError({}, "repeated data-structure variable in body atom " + atom.pred + " (" + c.origin + ")");
        }
      }
      for (auto& b : before) body.push_back(std::move(b));
      body.push_back(std::move(atom));
    }
    out.body = std::move(body);
    out.constraint = mk_and(std::move(eqs));
    return normalize_body_atoms(out);
  }

  /// Replaces constructor term `t` by a fresh variable W and emits
  /// `match_<ctor>(W, args...)`, recursively for nested constructor terms.
  Term match_var(const Term& t, std::vector<Atom>& out) {
    const std::string pred = "match_" + t.name() + "_" + t.sort().mangled();
    Term w = Term::fresh_var("W", t.sort());
    Atom m{pred, {w}};
    for (const auto& a : t.args()) m.args.push_back(a.op() == Op::Cons ? match_var(a, out) : a);
    out.push_back(std::move(m));
    if (!p_.synthetic_preds.count(pred)) {
      p_.synthetic_preds.insert(pred);
      std::vector<Sort> sig{t.sort()};
      std::vector<Term> fields;
      for (const auto& a : t.args()) {
        sig.push_back(a.sort());
        fields.push_back(Term::fresh_var("V", a.sort()));
      }
      p_.signatures[pred] = sig;
      p_.pred_order.push_back(pred);
      Clause def;
      def.head = Atom{pred, {Term::cons(t.name(), t.sort(), fields)}};
      for (const auto& f : fields) def.head->args.push_back(f);
      def.origin = "match " + t.name();
      synthetic_.push_back(std::move(def));
    }
    return w;
  }

  SourceProgram& p_;
  std::vector<Clause> synthetic_;
};

}  // namespace

void normalize_program(SourceProgram& p) { Normalizer(p).run(); }

// ---------------------------------------------------------------------------
// Contracts

void check_contract(const Contract& k, const SourceProgram& p, const std::set<std::string>* catamorphisms) {
  std::unordered_set<VarId> z;
  for (const auto& t : k.z) {
    if (!t.is_var()) throw ContractError(k.loc, 1, "argument of " + k.pred + " is not a variable");
    if (!z.insert(t.var_id()).second) throw ContractError(k.loc, 1, "arguments of " + k.pred + " are not distinct");
  }
  if (catamorphisms && catamorphisms->count(k.pred)) {
    throw ContractError(k.loc, 1, k.pred + " is a catamorphism, not a program predicate");
  }
  if (!p.signatures.count(k.pred)) throw ContractError(k.loc, 1, "unknown predicate " + k.pred);

  std::unordered_set<VarId> xs;
  std::unordered_set<VarId> ys;
  for (const auto& a : k.catas) {
    if (catamorphisms && !catamorphisms->count(a.pred)) {
      throw ContractError(k.loc, 3, a.pred + " is not a catamorphism");
    }
    std::size_t adt_pos = a.args.size();
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (a.args[i].sort().is_adt()) {
        if (adt_pos != a.args.size()) throw ContractError(k.loc, 3, a.pred + " has more than one data-structure argument");
        adt_pos = i;
      }
    }
    if (adt_pos == a.args.size()) throw ContractError(k.loc, 3, a.pred + " has no data-structure argument");
    const Term& t = a.args[adt_pos];
    if (!t.is_var() || !z.count(t.var_id())) {
      throw ContractError(k.loc, 5, "data-structure argument of " + a.pred + " is not a variable of " + k.pred);
    }
    std::unordered_set<VarId> local;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i == adt_pos) continue;
      const Term& v = a.args[i];
      if (!v.is_var()) throw ContractError(k.loc, 4, "argument " + std::to_string(i + 1) + " of " + a.pred + " is not a variable");
      if (!local.insert(v.var_id()).second) {
        throw ContractError(k.loc, 4, "arguments of " + a.pred + " are not distinct variables");
      }
      if (i < adt_pos) {
        if (ys.count(v.var_id())) throw ContractError(k.loc, 4, "input of " + a.pred + " is an output of another atom");
        xs.insert(v.var_id());
      } else {
        if (z.count(v.var_id()) || xs.count(v.var_id()) || !ys.insert(v.var_id()).second) {
          throw ContractError(k.loc, 4, "output of " + a.pred + " is not a fresh variable");
        }
      }
    }
  }
  for (const auto& v : vars_of(k.pre)) {
    if (!z.count(v.var_id()) && !xs.count(v.var_id())) {
      throw ContractError(k.loc, 2, "precondition mentions " + v.name() + ", which is neither an argument nor a parameter");
    }
  }
  for (const auto& v : vars_of(k.post)) {
    if (!z.count(v.var_id()) && !xs.count(v.var_id()) && !ys.count(v.var_id())) {
      throw ContractError(k.loc, 6, "postcondition mentions unbound variable " + v.name());
    }
  }
}

SourceProgram parse_program(const std::string& text) {
  SourceProgram p = infer_sorts(parse_raw(text));
  normalize_program(p);
  for (const auto& k : p.contracts) {
    check_contract(k, p);
    if (k.post.is_true()) p.diagnostics.push_back({k.loc, "contract " + k.id + " has postcondition true and holds trivially"});
  }
  return p;
}

SourceProgram parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FrontendError({}, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

namespace {

Substitution fresh_renaming(const std::vector<Term>& vars, const Substitution& base = {}) {
  Substitution s = base;
  for (const auto& v : vars) {
    if (!s.find(v.var_id())) s.set(v, Term::fresh_var(v.name(), v.sort()));
  }
  return s;
}

std::vector<Term> contract_vars(const Contract& k) {
  std::vector<Term> out;
  for (const auto& t : k.z) collect_vars(t, out);
  collect_vars(k.pre, out);
  for (const auto& a : k.catas) {
    for (const auto& t : a.args) collect_vars(t, out);
  }
  collect_vars(k.post, out);
  return out;
}

}  // namespace

Clause contract_to_goal(const Contract& k) {
  const Substitution s = fresh_renaming(contract_vars(k));
  Clause g;
  g.constraint = mk_and(negate(s.apply(k.post)), s.apply(k.pre));
  Atom head{k.pred, {}};
  for (const auto& t : k.z) head.args.push_back(s.apply(t));
  g.body.push_back(std::move(head));
  for (const auto& a : k.catas) g.body.push_back(s.apply(a));
  g.origin = "contract " + k.id;
  return g;
}

std::vector<Contract> lift_goals(const SourceProgram& p, const std::set<std::string>& program_preds,
                                 std::vector<Clause>& remaining) {
  std::vector<Contract> out;
  for (const auto& c : p.clauses) {
    if (!c.is_goal()) continue;
    const Clause g = eliminate_local_vars(c);
    std::size_t program_atoms = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < g.body.size(); ++i) {
      if (program_preds.count(g.body[i].pred)) {
        ++program_atoms;
        at = i;
      }
    }
    if (program_atoms != 1) {
      remaining.push_back(c);
      continue;
    }
    Contract k;
    k.pred = g.body[at].pred;
    k.id = k.pred + "@" + (c.origin.rfind("line ", 0) == 0 ? c.origin.substr(5) : c.origin);
    k.z = g.body[at].args;
    for (std::size_t i = 0; i < g.body.size(); ++i) {
      if (i != at) k.catas.push_back(g.body[i]);
    }
    k.post = negate(g.constraint);
    k.from_goal = true;
    try {
      check_contract(k, p);
    } catch (const ContractError&) {
      remaining.push_back(c);
      continue;
    }
    out.push_back(std::move(k));
  }
  return out;
}

Contract merge_contracts(const std::vector<Contract>& ks) {
  if (ks.size() == 1) return ks.front();
  Contract out = ks.front();
  out.id = out.pred + "@merged";
  out.catas.clear();
  out.pre = Term::truth();
  std::vector<Term> posts;
  for (const auto& k : ks) {
    Substitution base;
    for (std::size_t i = 0; i < k.z.size(); ++i) base.set(k.z[i], out.z[i]);
    const Substitution s = fresh_renaming(contract_vars(k), base);
    for (const auto& a : k.catas) out.catas.push_back(s.apply(a));
    posts.push_back(mk_implies(s.apply(k.pre), s.apply(k.post)));
  }
  out.post = mk_and(std::move(posts));
  out.from_goal = false;
  return out;
}

Contract trivial_contract(const std::string& pred, const std::vector<Sort>& sig) {
  Contract k;
  k.pred = pred;
  k.id = pred + "@trivial";
  for (const auto& s : sig) k.z.push_back(Term::fresh_var("Z", s));
  return k;
}

std::string contract_to_string(const Contract& k) {
  VarNaming names;
  std::ostringstream os;
  os << to_prolog(Atom{k.pred, k.z}, names) << " ==> ";
  std::vector<std::string> items;
  if (!k.pre.is_true()) items.push_back(to_prolog(k.pre, names));
  for (const auto& a : k.catas) items.push_back(to_prolog(a, names));
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? ", " : "") << items[i];
  os << (items.empty() ? "=> " : " => ") << to_prolog(k.post, names);
  return os.str();
}

}  // namespace cata
