#pragma once

#include <functional>
#include <ostream>
#include <string>

#include "cata/term.hpp"

namespace cata {

using SmtVarName = std::function<std::string(const Term&)>;

/// `Int`, `Bool`, or the mangled datatype name (`list_int`).
std::string smt_sort(const Sort& s);
/// Datatype constructor symbol, e.g. `list_int.cons`.
std::string smt_constructor(const Sort& adt, const std::string& ctor);

void write_smt(std::ostream& os, const Term& t, const SmtVarName& name);
std::string to_smt(const Term& t, const SmtVarName& name);

}  // namespace cata
