#pragma once

#include <string>
#include <unordered_map>

#include "cata/clause.hpp"

namespace cata {

/// Assigns printable names to variables. Canonical naming hands out
/// `A`..`Z`, `A1`..`Z1`, ... in order of first request, which makes printed
/// output independent of internal variable ids.
class VarNaming {
 public:
  enum class Style { Canonical, Hint };

  explicit VarNaming(Style style = Style::Canonical) : style_(style) {}

  const std::string& name(const Term& var);
  void reserve(const Clause& c);  // pre-assign in head, constraint, body order

 private:
  Style style_;
  std::unordered_map<VarId, std::string> names_;
  std::size_t next_ = 0;
};

std::string to_prolog(const Term& t, VarNaming& names);
std::string to_prolog(const Atom& a, VarNaming& names);
std::string to_prolog(const Clause& c, VarNaming& names);
/// Prints with a fresh canonical naming.
std::string to_prolog(const Clause& c);
/// Debug rendering that keeps source variable hints (suffixed with ids).
std::string debug_string(const Term& t);
std::string debug_string(const Clause& c);

}  // namespace cata
