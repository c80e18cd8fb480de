#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cata {

enum class SortKind { Int, Bool, Adt, Param };

/// A many-sorted first-order sort. `Param` only appears inside ADT
/// declarations, where it stands for a type parameter such as the `T`
/// of `list(T)`.
class Sort {
 public:
  Sort() = default;

  static Sort integer();
  static Sort boolean();
  static Sort adt(std::string name, std::vector<Sort> args = {});
  static Sort param(std::string name);

  SortKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Sort>& args() const { return args_; }

  bool is_basic() const { return kind_ == SortKind::Int || kind_ == SortKind::Bool; }
  bool is_adt() const { return kind_ == SortKind::Adt; }
  bool is_int() const { return kind_ == SortKind::Int; }
  bool is_bool() const { return kind_ == SortKind::Bool; }

  /// Prolog-style rendering: `int`, `bool`, `list(int)`.
  std::string to_string() const;
  /// Identifier-safe rendering used for SMT-LIB datatype names: `list_int`.
  std::string mangled() const;

  Sort substitute(const std::map<std::string, Sort>& params) const;

  friend bool operator==(const Sort&, const Sort&) = default;
  friend std::strong_ordering operator<=>(const Sort& a, const Sort& b);

 private:
  SortKind kind_ = SortKind::Int;
  std::string name_;
  std::vector<Sort> args_;
};

struct ConstructorDecl {
  std::string name;
  std::vector<Sort> fields;  // may mention the declaration's parameters
};

struct AdtDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<ConstructorDecl> constructors;
};

/// Registry of algebraic data types. `list(T)` (constructors `nil`, `cons`)
/// and `tree(T)` (constructors `leaf`, `node`) are always present.
class SortTable {
 public:
  SortTable();

  /// Throws std::invalid_argument when the declaration has no base
  /// constructor, reuses a constructor name, or redeclares a type.
  void declare(AdtDecl decl);

  const AdtDecl* find_adt(const std::string& name) const;
  /// The declaration that owns constructor `ctor`, if any.
  const AdtDecl* owner_of(const std::string& ctor) const;
  const ConstructorDecl* find_constructor(const std::string& ctor) const;

  /// Field sorts of `ctor` instantiated at the concrete ADT sort `adt`.
  std::vector<Sort> field_sorts(const Sort& adt, const std::string& ctor) const;
  const std::vector<ConstructorDecl>& constructors(const Sort& adt) const;
  const std::vector<AdtDecl>& declarations() const { return decls_; }

 private:
  std::vector<AdtDecl> decls_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::string, std::size_t> by_ctor_;
};

}  // namespace cata
