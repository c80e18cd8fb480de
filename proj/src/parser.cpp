#include <cctype>
#include <set>
#include <sstream>

#include "cata/frontend.hpp"

namespace cata {

namespace {

std::string format_location(Location loc, const std::string& msg) {
  std::ostringstream os;
  os << loc.line << ':' << loc.column << ": " << msg;
  return os.str();
}

}  // namespace

FrontendError::FrontendError(Location loc, const std::string& msg)
    : std::runtime_error(format_location(loc, msg)), loc_(loc) {}

ContractError::ContractError(Location loc, int condition, const std::string& msg)
    : FrontendError(loc, "contract condition " + std::to_string(condition) + ": " + msg), condition_(condition) {}

namespace {

enum class Tok { Var, Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  Location loc;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (i_ >= s_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        t.kind = Tok::Int;
        t.text = s_.substr(i_, j - i_);
        try {
          t.value = std::stoll(t.text);
        } catch (const std::out_of_range&) {
          throw SyntaxError(t.loc, "integer literal out of range");
        }
        advance(j - i_);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        t.text = s_.substr(i_, j - i_);
        t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var : Tok::Ident;
        advance(j - i_);
      } else {
        static const char* puncts[] = {"==>", ":-", "=>", "=<", "<=", ">=", "\\=", "!=", "=", "<", ">", "+",
                                       "-",   "*",  "~",  "&",  "|",  "(",  ")",  "[",  "]", ",", "."};
        bool found = false;
        for (const char* p : puncts) {
          const std::string ps(p);
          if (s_.compare(i_, ps.size(), ps) == 0) {
            t.kind = Tok::Punct;
            t.text = ps;
            advance(ps.size());
            found = true;
            break;
          }
        }
        if (!found) throw SyntaxError(t.loc, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void skip_space() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else if (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '*') {
        const Location start{line_, col_};
        advance(2);
        while (i_ + 1 < s_.size() && !(s_[i_] == '*' && s_[i_ + 1] == '/')) advance(1);
        if (i_ + 1 >= s_.size()) throw SyntaxError(start, "unterminated block comment");
        advance(2);
      } else {
        return;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& constraint_functors() {
  static const std::set<std::string> names = {"=>", "|",  "&", "~", "=", "\\=", "!=", "=<", "<", "<=",
                                              ">=", ">",  "+", "-", "*", "neg", "ite", "true", "false"};
  return names;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  RawProgram run() {
    RawProgram p;
    while (peek().kind != Tok::End) {
      if (is(":-")) {
        directive(p);
      } else {
        p.clauses.push_back(clause());
      }
    }
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }

  Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.loc, msg + ", found " + got);
  }

  [[noreturn]] void unclosed(Location open) const {
    const Token& t = peek();
    std::ostringstream os;
    os << "unclosed '(': found " << (t.kind == Tok::End ? "end of input" : "'" + t.text + "'") << " at " << t.loc.line
       << ':' << t.loc.column;
    throw SyntaxError(open, os.str());
  }

  void expect(const char* punct) {
    if (!is(punct)) fail(std::string("expected '") + punct + "'");
    take();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return take().text;
  }

  void directive(RawProgram& p) {
    const Location loc = peek().loc;
    expect(":-");
    const std::string kind = ident("directive name");
    if (kind == "spec") {
      p.contracts.push_back(contract(loc));
    } else if (kind == "data") {
      p.data.push_back(data(loc));
    } else if (kind == "pred") {
      RawPred rp;
      rp.loc = loc;
      rp.name = ident("predicate name");
      if (is("(")) rp.sorts = sort_list();
      expect(".");
      p.preds.push_back(std::move(rp));
    } else {
      throw SyntaxError(loc, "unknown directive '" + kind + "'");
    }
  }

  RawContract contract(Location loc) {
    RawContract k;
    k.loc = loc;
    k.head = atom_head();
    expect("==>");
    if (!is("=>")) {
      while (true) {
        RawTerm item = disjunction();
        place(std::move(item), k.pre, k.catas);
        if (!is(",")) break;
        take();
      }
    }
    expect("=>");
    k.post = implication();
    expect(".");
    return k;
  }

  RawData data(Location loc) {
    RawData d;
    d.loc = loc;
    d.name = ident("data type name");
    if (is("(")) {
      take();
      while (true) {
        if (peek().kind != Tok::Var) fail("expected a type parameter");
        d.params.push_back(take().text);
        if (!is(",")) break;
        take();
      }
      expect(")");
    }
    expect("=");
    while (true) {
      std::string ctor = ident("constructor name");
      std::vector<RawSortExpr> fields;
      if (is("(")) fields = sort_list();
      d.constructors.emplace_back(std::move(ctor), std::move(fields));
      if (!is("|")) break;
      take();
    }
    expect(".");
    return d;
  }

  std::vector<RawSortExpr> sort_list() {
    expect("(");
    std::vector<RawSortExpr> out;
    while (true) {
      out.push_back(sort_expr());
      if (!is(",")) break;
      take();
    }
    expect(")");
    return out;
  }

  RawSortExpr sort_expr() {
    RawSortExpr s;
    if (peek().kind == Tok::Var) {
      s.name = take().text;
      return s;
    }
    s.name = ident("sort");
    if (is("(")) s.args = sort_list();
    return s;
  }

  RawAtom atom_head() {
    RawAtom a;
    a.loc = peek().loc;
    a.pred = ident("predicate name");
    if (is("(")) a.args = arg_list();
    return a;
  }

  RawClause clause() {
    RawClause c;
    c.loc = peek().loc;
    c.head = atom_head();
    if (c.head.pred == "false" && c.head.args.empty()) c.is_goal = true;
    if (is(":-")) {
      take();
      while (true) {
        place(implication(), c.constraints, c.body);
        if (!is(",")) break;
        take();
      }
    }
    expect(".");
    return c;
  }

  /// Body items that are applications of non-constraint functors are atoms.
  static void place(RawTerm item, std::vector<RawTerm>& constraints, std::vector<RawAtom>& atoms) {
    if (item.kind == RawTerm::Kind::App && !constraint_functors().count(item.name)) {
      atoms.push_back(RawAtom{item.name, std::move(item.args), item.loc});
    } else {
      constraints.push_back(std::move(item));
    }
  }

  std::vector<RawTerm> arg_list() {
    const Location open = peek().loc;
    expect("(");
    std::vector<RawTerm> out;
    while (true) {
      out.push_back(implication());
      if (!is(",")) break;
      take();
    }
    if (!is(")")) unclosed(open);
    take();
    return out;
  }

  static RawTerm app(std::string name, std::vector<RawTerm> args, Location loc) {
    RawTerm t;
    t.kind = RawTerm::Kind::App;
    t.name = std::move(name);
    t.args = std::move(args);
    t.loc = loc;
    return t;
  }

  RawTerm implication() {
    RawTerm lhs = disjunction();
    if (!is("=>")) return lhs;
    const Location loc = take().loc;
    RawTerm rhs = implication();
    return app("=>", {std::move(lhs), std::move(rhs)}, loc);
  }

  RawTerm disjunction() {
    RawTerm t = conjunction();
    while (is("|")) {
      const Location loc = take().loc;
      t = app("|", {std::move(t), conjunction()}, loc);
    }
    return t;
  }

  RawTerm conjunction() {
    RawTerm t = negation();
    while (is("&")) {
      const Location loc = take().loc;
      t = app("&", {std::move(t), negation()}, loc);
    }
    return t;
  }

  RawTerm negation() {
    if (is("~")) {
      const Location loc = take().loc;
      return app("~", {negation()}, loc);
    }
    return comparison();
  }

  RawTerm comparison() {
    RawTerm lhs = additive();
    static const std::set<std::string> ops = {"=", "\\=", "!=", "=<", "<=", "<", ">=", ">"};
    if (peek().kind == Tok::Punct && ops.count(peek().text)) {
      const Token op = take();
      RawTerm rhs = additive();
      return app(op.text, {std::move(lhs), std::move(rhs)}, op.loc);
    }
    return lhs;
  }

  RawTerm additive() {
    RawTerm t = multiplicative();
    while (is("+") || is("-")) {
      const Token op = take();
      t = app(op.text, {std::move(t), multiplicative()}, op.loc);
    }
    return t;
  }

  RawTerm multiplicative() {
    RawTerm t = unary();
    while (is("*")) {
      const Location loc = take().loc;
      t = app("*", {std::move(t), unary()}, loc);
    }
    return t;
  }

  RawTerm unary() {
    if (is("-")) {
      const Location loc = take().loc;
      RawTerm inner = unary();
      if (inner.kind == RawTerm::Kind::Int) {
        inner.value = -inner.value;
        inner.loc = loc;
        return inner;
      }
      return app("neg", {std::move(inner)}, loc);
    }
    return primary();
  }

  RawTerm primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      RawTerm r;
      r.kind = RawTerm::Kind::Int;
      r.value = t.value;
      r.loc = t.loc;
      take();
      return r;
    }
    if (t.kind == Tok::Var) {
      RawTerm r;
      r.kind = RawTerm::Kind::Var;
      r.name = t.text == "_" ? "_" + std::to_string(anon_++) : t.text;
      r.loc = t.loc;
      take();
      return r;
    }
    if (t.kind == Tok::Ident) {
      const Location loc = t.loc;
      std::string name = take().text;
      std::vector<RawTerm> args;
      if (is("(")) args = arg_list();
      return app(std::move(name), std::move(args), loc);
    }
    if (is("(")) {
      const Location open = take().loc;
      RawTerm inner = implication();
      if (!is(")")) unclosed(open);
      take();
      return inner;
    }
    if (is("[")) return list();
    fail("expected a term");
  }

  RawTerm list() {
    const Location loc = take().loc;
    if (is("]")) {
      take();
      return app("nil", {}, loc);
    }
    std::vector<RawTerm> elems;
    while (true) {
      elems.push_back(conjunction());
      if (!is(",")) break;
      take();
    }
    RawTerm tail = app("nil", {}, loc);
    if (is("|")) {
      take();
      tail = conjunction();
    }
    expect("]");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) tail = app("cons", {std::move(*it), std::move(tail)}, loc);
    return tail;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int anon_ = 0;
};

}  // namespace

RawProgram parse_raw(const std::string& text) { return Parser(text).run(); }

}  // namespace cata
