#include "cata/print.hpp"

#include <sstream>

namespace cata {

const std::string& VarNaming::name(const Term& var) {
  auto it = names_.find(var.var_id());
  if (it != names_.end()) return it->second;
  std::string n;
  if (style_ == Style::Hint) {
    n = (var.name().empty() ? std::string("V") : var.name()) + "_" + std::to_string(var.var_id());
  } else {
    const std::size_t k = next_++;
    n = std::string(1, static_cast<char>('A' + k % 26));
    if (k >= 26) n += std::to_string(k / 26);
  }
  return names_.emplace(var.var_id(), std::move(n)).first->second;
}

void VarNaming::reserve(const Clause& c) {
  for (const auto& v : vars_of(c)) name(v);
}

namespace {

int level(const Term& t) {
  switch (t.op()) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    case Op::Eq:
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt: return 5;
    case Op::Add:
    case Op::Sub: return 6;
    case Op::Mul: return 7;
    case Op::Neg: return 8;
    case Op::IntConst: return t.int_value() < 0 ? 8 : 9;
    default: return 9;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::Eq: return "=";
    case Op::Le: return "=<";
    case Op::Lt: return "<";
    case Op::Ge: return ">=";
    case Op::Gt: return ">";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " => ";
    default: return "?";
  }
}

void print(std::ostream& os, const Term& t, int min_level, VarNaming& names);

void print_list(std::ostream& os, const Term& t, VarNaming& names) {
  os << '[';
  const Term* cur = &t;
  bool first = true;
  while (cur->op() == Op::Cons && cur->name() == "cons") {
    if (!first) os << ',';
    first = false;
    print(os, cur->arg(0), 1, names);
    cur = &cur->arg(1);
  }
  if (!(cur->op() == Op::Cons && cur->name() == "nil")) {
    os << '|';
    print(os, *cur, 1, names);
  }
  os << ']';
}

void print(std::ostream& os, const Term& t, int min_level, VarNaming& names) {
  const int lv = level(t);
  const bool parens = lv < min_level;
  if (parens) os << '(';
  switch (t.op()) {
    case Op::Var:
      os << names.name(t);
      break;
    case Op::IntConst:
      os << t.int_value();
      break;
    case Op::BoolConst:
      os << (t.bool_value() ? "true" : "false");
      break;
    case Op::Cons:
      if (t.name() == "nil") {
        os << "[]";
      } else if (t.name() == "cons") {
        print_list(os, t, names);
      } else {
        os << t.name();
        if (!t.args().empty()) {
          os << '(';
          for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) os << ',';
            print(os, t.arg(i), 1, names);
          }
          os << ')';
        }
      }
      break;
    case Op::Ite:
      os << "ite(";
      print(os, t.arg(0), 1, names);
      os << ',';
      print(os, t.arg(1), 1, names);
      os << ',';
      print(os, t.arg(2), 1, names);
      os << ')';
      break;
    case Op::Not:
      os << '~';
      print(os, t.arg(0), 6, names);
      break;
    case Op::Neg:
      os << '-';
      print(os, t.arg(0), 9, names);
      break;
    case Op::Implies:
      print(os, t.arg(0), 2, names);
      os << symbol(t.op());
      print(os, t.arg(1), 1, names);
      break;
    case Op::And:
    case Op::Or:
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) os << symbol(t.op());
        print(os, t.arg(i), lv + 1, names);
      }
      break;
    case Op::Add:
    case Op::Sub:
      print(os, t.arg(0), 6, names);
      os << symbol(t.op());
      print(os, t.arg(1), 7, names);
      break;
    case Op::Mul:
      print(os, t.arg(0), 8, names);
      os << '*';
      print(os, t.arg(1), 8, names);
      break;
    default:  // comparisons
      print(os, t.arg(0), 6, names);
      os << symbol(t.op());
      print(os, t.arg(1), 6, names);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string to_prolog(const Term& t, VarNaming& names) {
  std::ostringstream os;
  print(os, t, 1, names);
  return os.str();
}

std::string to_prolog(const Atom& a, VarNaming& names) {
  std::ostringstream os;
  os << a.pred;
  if (!a.args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ',';
      print(os, a.args[i], 1, names);
    }
    os << ')';
  }
  return os.str();
}

std::string to_prolog(const Clause& c, VarNaming& names) {
  names.reserve(c);
  std::ostringstream os;
  os << (c.head ? to_prolog(*c.head, names) : std::string("false"));
  std::vector<std::string> items;
  if (!c.constraint.is_true() || (c.body.empty() && !c.head)) items.push_back(to_prolog(c.constraint, names));
  for (const auto& a : c.body) items.push_back(to_prolog(a, names));
  if (!items.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) os << ", ";
      os << items[i];
    }
  }
  os << '.';
  return os.str();
}

std::string to_prolog(const Clause& c) {
  VarNaming names;
  return to_prolog(c, names);
}

std::string debug_string(const Term& t) {
  VarNaming names(VarNaming::Style::Hint);
  return to_prolog(t, names);
}

std::string debug_string(const Clause& c) {
  VarNaming names(VarNaming::Style::Hint);
  return to_prolog(c, names);
}

}  // namespace cata
