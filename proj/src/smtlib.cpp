#include "cata/smtlib.hpp"

#include <sstream>

namespace cata {

std::string smt_sort(const Sort& s) {
  if (s.is_int()) return "Int";
  if (s.is_bool()) return "Bool";
  return s.mangled();
}

std::string smt_constructor(const Sort& adt, const std::string& ctor) { return adt.mangled() + "." + ctor; }

namespace {

const char* smt_op(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Neg: return "-";
    case Op::Eq: return "=";
    case Op::Le: return "<=";
    case Op::Lt: return "<";
    case Op::Ge: return ">=";
    case Op::Gt: return ">";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    default: return "?";
  }
}

}  // namespace

void write_smt(std::ostream& os, const Term& t, const SmtVarName& name) {
  switch (t.op()) {
    case Op::Var:
      os << name(t);
      return;
    case Op::IntConst:
      if (t.int_value() < 0) {
        os << "(- " << -t.int_value() << ')';
      } else {
        os << t.int_value();
      }
      return;
    case Op::BoolConst:
      os << (t.bool_value() ? "true" : "false");
      return;
    case Op::Cons:
      if (t.args().empty()) {
        os << smt_constructor(t.sort(), t.name());
        return;
      }
      os << '(' << smt_constructor(t.sort(), t.name());
      break;
    default:
      os << '(' << smt_op(t.op());
      break;
  }
  for (const auto& a : t.args()) {
    os << ' ';
    write_smt(os, a, name);
  }
  os << ')';
}

std::string to_smt(const Term& t, const SmtVarName& name) {
  std::ostringstream os;
  write_smt(os, t, name);
  return os.str();
}

}  // namespace cata
