#include "cata/term.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace cata {

namespace {

std::atomic<VarId> next_var_id{1};

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const TermNode& n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 1315423911u;
  h = combine(h, std::hash<std::int64_t>{}(n.value));
  h = combine(h, std::hash<VarId>{}(n.id));
  if (n.op == Op::Cons) h = combine(h, std::hash<std::string>{}(n.name));
  for (const auto& a : n.args) h = combine(h, a.hash());
  return h;
}

Sort result_sort(Op op, const std::vector<Term>& args) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Neg:
      return Sort::integer();
    case Op::Ite:
      return args.at(1).sort();
    default:
      return Sort::boolean();
  }
}

}  // namespace

Term Term::var(VarId id, std::string name, Sort sort) {
  TermNode n{Op::Var, std::move(sort), 0, id, std::move(name), {}, 0};
  n.hash = node_hash(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::fresh_var(std::string hint, Sort sort) {
  return var(next_var_id.fetch_add(1), std::move(hint), std::move(sort));
}

Term Term::int_const(std::int64_t v) {
  TermNode n{Op::IntConst, Sort::integer(), v, 0, {}, {}, 0};
  n.hash = node_hash(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::bool_const(bool v) {
  TermNode n{Op::BoolConst, Sort::boolean(), v ? 1 : 0, 0, {}, {}, 0};
  n.hash = node_hash(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::cons(std::string ctor, Sort adt, std::vector<Term> args) {
  TermNode n{Op::Cons, std::move(adt), 0, 0, std::move(ctor), std::move(args), 0};
  n.hash = node_hash(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::make(Op op, std::vector<Term> args) {
  if (op == Op::Var || op == Op::IntConst || op == Op::BoolConst || op == Op::Cons) {
    throw std::invalid_argument("Term::make: leaf operator");
  }
  Sort s = result_sort(op, args);
  TermNode n{op, std::move(s), 0, 0, {}, std::move(args), 0};
  n.hash = node_hash(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Term& a, const Term& b) {
  if (a.node() == b.node()) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  switch (a.op()) {
    case Op::Var:
      if (a.var_id() != b.var_id()) return a.var_id() < b.var_id() ? -1 : 1;
      return 0;
    case Op::IntConst:
    case Op::BoolConst:
      if (a.int_value() != b.int_value()) return a.int_value() < b.int_value() ? -1 : 1;
      return 0;
    case Op::Cons:
      if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
      if (auto c = a.sort() <=> b.sort(); c != 0) return c < 0 ? -1 : 1;
      break;
    default:
      break;
  }
  const auto& x = a.args();
  const auto& y = b.args();
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (int c = compare(x[i], y[i]); c != 0) return c;
  }
  return 0;
}

Term mk_and(std::vector<Term> conjuncts) {
  std::vector<Term> flat;
  for (auto& c : conjuncts) {
    if (c.is_true()) continue;
    if (c.is_false()) return Term::falsity();
    if (c.op() == Op::And) {
      for (const auto& d : c.args()) flat.push_back(d);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::vector<Term> out;
  for (auto& c : flat) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  if (out.empty()) return Term::truth();
  if (out.size() == 1) return out.front();
  return Term::make(Op::And, std::move(out));
}

Term mk_and(const Term& a, const Term& b) { return mk_and(std::vector<Term>{a, b}); }

Term mk_or(std::vector<Term> disjuncts) {
  std::vector<Term> out;
  for (auto& d : disjuncts) {
    if (d.is_false()) continue;
    if (d.is_true()) return Term::truth();
    if (d.op() == Op::Or) {
      for (const auto& e : d.args()) {
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      }
    } else if (std::find(out.begin(), out.end(), d) == out.end()) {
      out.push_back(std::move(d));
    }
  }
  if (out.empty()) return Term::falsity();
  if (out.size() == 1) return out.front();
  return Term::make(Op::Or, std::move(out));
}

Term mk_not(const Term& a) {
  if (a.op() == Op::BoolConst) return Term::bool_const(!a.bool_value());
  if (a.op() == Op::Not) return a.arg(0);
  return Term::make(Op::Not, {a});
}

Term mk_implies(const Term& a, const Term& b) {
  if (a.is_true()) return b;
  if (a.is_false() || b.is_true()) return Term::truth();
  if (b.is_false()) return mk_not(a);
  if (a == b) return Term::truth();
  return Term::make(Op::Implies, {a, b});
}

Term mk_eq(const Term& a, const Term& b) {
  if (a == b) return Term::truth();
  if (a.is_const() && b.is_const()) return Term::bool_const(a.int_value() == b.int_value());
  if (a.sort().is_bool()) {
    if (b.op() == Op::BoolConst) return b.bool_value() ? a : mk_not(a);
    if (a.op() == Op::BoolConst) return a.bool_value() ? b : mk_not(b);
  }
  return Term::make(Op::Eq, {a, b});
}

Term mk_ite(const Term& c, const Term& t, const Term& e) {
  if (c.is_true()) return t;
  if (c.is_false()) return e;
  if (t == e) return t;
  return Term::make(Op::Ite, {c, t, e});
}

Term mk_cmp(Op op, const Term& a, const Term& b) {
  if (op == Op::Eq) return mk_eq(a, b);
  if (a.op() == Op::IntConst && b.op() == Op::IntConst) {
    const auto x = a.int_value();
    const auto y = b.int_value();
    switch (op) {
      case Op::Le: return Term::bool_const(x <= y);
      case Op::Lt: return Term::bool_const(x < y);
      case Op::Ge: return Term::bool_const(x >= y);
      case Op::Gt: return Term::bool_const(x > y);
      default: break;
    }
  }
  if (a == b) {
    if (op == Op::Le || op == Op::Ge) return Term::truth();
    if (op == Op::Lt || op == Op::Gt) return Term::falsity();
  }
  return Term::make(op, {a, b});
}

Term mk_add(const Term& a, const Term& b) {
  if (a.op() == Op::IntConst && b.op() == Op::IntConst) {
    return Term::int_const(a.int_value() + b.int_value());
  }
  if (a.op() == Op::IntConst && a.int_value() == 0) return b;
  if (b.op() == Op::IntConst && b.int_value() == 0) return a;
  return Term::make(Op::Add, {a, b});
}

Term mk_sub(const Term& a, const Term& b) {
  if (a.op() == Op::IntConst && b.op() == Op::IntConst) {
    return Term::int_const(a.int_value() - b.int_value());
  }
  if (b.op() == Op::IntConst && b.int_value() == 0) return a;
  if (a == b) return Term::int_const(0);
  return Term::make(Op::Sub, {a, b});
}

Term mk_mul(const Term& a, const Term& b) {
  if (a.op() == Op::IntConst && b.op() == Op::IntConst) {
    return Term::int_const(a.int_value() * b.int_value());
  }
  for (const auto* k : {&a, &b}) {
    if (k->op() == Op::IntConst && k->int_value() == 0) return Term::int_const(0);
  }
  if (a.op() == Op::IntConst && a.int_value() == 1) return b;
  if (b.op() == Op::IntConst && b.int_value() == 1) return a;
  return Term::make(Op::Mul, {a, b});
}

Term mk_neg(const Term& a) {
  if (a.op() == Op::IntConst) return Term::int_const(-a.int_value());
  if (a.op() == Op::Neg) return a.arg(0);
  return Term::make(Op::Neg, {a});
}

Term negate(const Term& a) {
  switch (a.op()) {
    case Op::BoolConst:
      return Term::bool_const(!a.bool_value());
    case Op::Not:
      return a.arg(0);
    case Op::And: {
      std::vector<Term> ds;
      for (const auto& c : a.args()) ds.push_back(negate(c));
      return mk_or(std::move(ds));
    }
    case Op::Or: {
      std::vector<Term> cs;
      for (const auto& d : a.args()) cs.push_back(negate(d));
      return mk_and(std::move(cs));
    }
    case Op::Implies:
      return mk_and(a.arg(0), negate(a.arg(1)));
    case Op::Le:
      return mk_cmp(Op::Gt, a.arg(0), a.arg(1));
    case Op::Lt:
      return mk_cmp(Op::Ge, a.arg(0), a.arg(1));
    case Op::Ge:
      return mk_cmp(Op::Lt, a.arg(0), a.arg(1));
    case Op::Gt:
      return mk_cmp(Op::Le, a.arg(0), a.arg(1));
    default:
      return mk_not(a);
  }
}

std::vector<Term> conjuncts(const Term& c) {
  if (c.is_true()) return {};
  if (c.op() == Op::And) return c.args();
  return {c};
}

void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    for (const auto& v : out) {
      if (v.var_id() == t.var_id()) return;
    }
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

std::vector<Term> vars_of(const Term& t) {
  std::vector<Term> out;
  collect_vars(t, out);
  return out;
}

bool occurs(VarId v, const Term& t) {
  if (t.is_var()) return t.var_id() == v;
  for (const auto& a : t.args()) {
    if (occurs(v, a)) return true;
  }
  return false;
}

namespace {

Term rebuild(const Term& t, std::vector<Term> args) {
  switch (t.op()) {
    case Op::Cons:
      return Term::cons(t.name(), t.sort(), std::move(args));
    case Op::And:
      return mk_and(std::move(args));
    case Op::Or:
      return mk_or(std::move(args));
    case Op::Not:
      return mk_not(args[0]);
    case Op::Implies:
      return mk_implies(args[0], args[1]);
    case Op::Eq:
      return mk_eq(args[0], args[1]);
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt:
      return mk_cmp(t.op(), args[0], args[1]);
    case Op::Add:
      return mk_add(args[0], args[1]);
    case Op::Sub:
      return mk_sub(args[0], args[1]);
    case Op::Mul:
      return mk_mul(args[0], args[1]);
    case Op::Neg:
      return mk_neg(args[0]);
    case Op::Ite:
      return mk_ite(args[0], args[1], args[2]);
    default:
      return t;
  }
}

}  // namespace

Term map_vars(const Term& t, const std::function<Term(const Term&)>& leaf) {
  if (t.is_var()) return leaf(t);
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(map_vars(a, leaf));
    changed = changed || args.back().node() != a.node();
  }
  if (!changed) return t;
  return rebuild(t, std::move(args));
}

Term simplify(const Term& t) {
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(simplify(a));
  return rebuild(t, std::move(args));
}

}  // namespace cata
