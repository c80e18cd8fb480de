#include "cata/sort.hpp"

#include <stdexcept>

namespace cata {

Sort Sort::integer() {
  Sort s;
  s.kind_ = SortKind::Int;
  s.name_ = "int";
  return s;
}

Sort Sort::boolean() {
  Sort s;
  s.kind_ = SortKind::Bool;
  s.name_ = "bool";
  return s;
}

Sort Sort::adt(std::string name, std::vector<Sort> args) {
  Sort s;
  s.kind_ = SortKind::Adt;
  s.name_ = std::move(name);
  s.args_ = std::move(args);
  return s;
}

Sort Sort::param(std::string name) {
  Sort s;
  s.kind_ = SortKind::Param;
  s.name_ = std::move(name);
  return s;
}

std::strong_ordering operator<=>(const Sort& a, const Sort& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.name_ <=> b.name_; c != 0) return c;
  if (a.args_.size() != b.args_.size()) return a.args_.size() <=> b.args_.size();
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Sort::to_string() const {
  if (args_.empty()) return name_;
  std::string out = name_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i].to_string();
  }
  return out + ")";
}

std::string Sort::mangled() const {
  std::string out = name_;
  for (const auto& a : args_) out += "_" + a.mangled();
  return out;
}

Sort Sort::substitute(const std::map<std::string, Sort>& params) const {
  if (kind_ == SortKind::Param) {
    auto it = params.find(name_);
    return it == params.end() ? *this : it->second;
  }
  if (args_.empty()) return *this;
  Sort s = *this;
  for (auto& a : s.args_) a = a.substitute(params);
  return s;
}

namespace {

bool mentions_self(const Sort& field, const std::string& adt) {
  if (field.is_adt() && field.name() == adt) return true;
  for (const auto& a : field.args()) {
    if (mentions_self(a, adt)) return true;
  }
  return false;
}

}  // namespace

SortTable::SortTable() {
  const Sort t = Sort::param("T");
  declare(AdtDecl{"list",
                  {"T"},
                  {ConstructorDecl{"nil", {}},
                   ConstructorDecl{"cons", {t, Sort::adt("list", {t})}}}});
  declare(AdtDecl{"tree",
                  {"T"},
                  {ConstructorDecl{"leaf", {}},
                   ConstructorDecl{"node", {Sort::adt("tree", {t}), t, Sort::adt("tree", {t})}}}});
}

void SortTable::declare(AdtDecl decl) {
  if (by_name_.count(decl.name)) {
    throw std::invalid_argument("data type '" + decl.name + "' declared twice");
  }
  if (decl.constructors.empty()) {
    throw std::invalid_argument("data type '" + decl.name + "' has no constructors");
  }
  bool has_base = false;
  for (const auto& c : decl.constructors) {
    if (by_ctor_.count(c.name)) {
      throw std::invalid_argument("constructor '" + c.name + "' declared twice");
    }
    bool recursive = false;
    for (const auto& f : c.fields) recursive = recursive || mentions_self(f, decl.name);
    has_base = has_base || !recursive;
  }
  if (!has_base) {
    throw std::invalid_argument("data type '" + decl.name + "' has no non-recursive constructor");
  }
  const std::size_t idx = decls_.size();
  by_name_[decl.name] = idx;
  for (const auto& c : decl.constructors) by_ctor_[c.name] = idx;
  decls_.push_back(std::move(decl));
}

const AdtDecl* SortTable::find_adt(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &decls_[it->second];
}

const AdtDecl* SortTable::owner_of(const std::string& ctor) const {
  auto it = by_ctor_.find(ctor);
  return it == by_ctor_.end() ? nullptr : &decls_[it->second];
}

const ConstructorDecl* SortTable::find_constructor(const std::string& ctor) const {
  const AdtDecl* d = owner_of(ctor);
  if (!d) return nullptr;
  for (const auto& c : d->constructors) {
    if (c.name == ctor) return &c;
  }
  return nullptr;
}

std::vector<Sort> SortTable::field_sorts(const Sort& adt, const std::string& ctor) const {
  const AdtDecl* d = owner_of(ctor);
  if (!d || d->name != adt.name()) {
    throw std::invalid_argument("constructor '" + ctor + "' does not build " + adt.to_string());
  }
  std::map<std::string, Sort> binding;
  for (std::size_t i = 0; i < d->params.size() && i < adt.args().size(); ++i) {
    binding[d->params[i]] = adt.args()[i];
  }
  std::vector<Sort> out;
  for (const auto& f : find_constructor(ctor)->fields) out.push_back(f.substitute(binding));
  return out;
}

const std::vector<ConstructorDecl>& SortTable::constructors(const Sort& adt) const {
  const AdtDecl* d = find_adt(adt.name());
  if (!d) throw std::invalid_argument("unknown data type " + adt.to_string());
  return d->constructors;
}

}  // namespace cata
