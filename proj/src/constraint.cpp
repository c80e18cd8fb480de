#include "cata/constraint.hpp"

#include <chrono>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cata/clause.hpp"
#include "cata/smtlib.hpp"

namespace cata {

const char* to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat: return "sat";
    case SatResult::Unsat: return "unsat";
    case SatResult::Unknown: return "unknown";
  }
  return "unknown";
}

SmtSession::SmtSession(Options opts) : opts_(std::move(opts)) {}

void SmtSession::start() {
  if (path_.empty()) {
    path_ = find_executable(opts_.solver);
    if (path_.empty()) throw SolverUnavailable("SMT solver not found: " + opts_.solver);
  }
  std::vector<std::string> argv{path_};
  argv.insert(argv.end(), opts_.args.begin(), opts_.args.end());
  proc_.start(argv);
  if (!proc_.write_all("(set-option :timeout " + std::to_string(opts_.timeout_ms) + ")\n")) {
    throw SolverUnavailable("cannot talk to " + path_);
  }
}

std::optional<SatResult> SmtSession::ask(const std::string& script) {
  if (!proc_.running()) start();
  if (!proc_.write_all(script)) return std::nullopt;
  bool timed_out = false;
  auto line = proc_.read_line(opts_.timeout_ms * 2 + 1000, timed_out);
  if (timed_out) {
    proc_.kill();
    ++stats_.restarts;
    return SatResult::Unknown;
  }
  if (!line) return std::nullopt;
  if (*line == "sat") return SatResult::Sat;
  if (*line == "unsat") return SatResult::Unsat;
  if (*line == "unknown" || *line == "timeout") return SatResult::Unknown;
  proc_.kill();
  throw ProtocolError("unexpected solver reply: " + *line);
}

SatResult SmtSession::check(const std::string& declarations, const std::string& assertion) {
  ++stats_.queries;
  const std::string key = declarations + "|" + assertion;
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++stats_.cache_hits;
    return it->second;
  }
  std::ostringstream script;
  script << "(push 1)\n" << declarations << "(assert " << assertion << ")\n(check-sat)\n(pop 1)\n";
  const auto t0 = std::chrono::steady_clock::now();
  ++stats_.solver_calls;
  auto res = ask(script.str());
  if (!res) {
    proc_.kill();
    ++stats_.restarts;
    res = ask(script.str());
    if (!res) throw SolverUnavailable("SMT solver terminated unexpectedly: " + path_);
  }
  stats_.solver_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  cache_.emplace(key, *res);
  return *res;
}

namespace {

/// Canonical query naming: free variables in order of first occurrence get
/// `x0, x1, ...`, existential ones `e0, e1, ...`.
class QueryNames {
 public:
  void bind_exists(const std::vector<Term>& vs) {
    for (const auto& v : vs) {
      if (!names_.count(v.var_id())) {
        names_.emplace(v.var_id(), "e" + std::to_string(bound_.size()));
        bound_.push_back(v);
      }
    }
  }

  void scan(const Term& t) {
    for (const auto& v : vars_of(t)) {
      if (!names_.count(v.var_id())) {
        names_.emplace(v.var_id(), "x" + std::to_string(free_.size()));
        free_.push_back(v);
      }
    }
  }

  std::string name(const Term& v) const { return names_.at(v.var_id()); }

  std::string declarations() const {
    std::ostringstream os;
    for (const auto& v : free_) os << "(declare-const " << name(v) << ' ' << smt_sort(v.sort()) << ")\n";
    return os.str();
  }

  std::string binder() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < bound_.size(); ++i) os << (i ? " " : "") << '(' << name(bound_[i]) << ' ' << smt_sort(bound_[i].sort()) << ')';
    os << ')';
    return os.str();
  }

  SmtVarName fn() const {
    return [this](const Term& v) { return name(v); };
  }

 private:
  std::unordered_map<VarId, std::string> names_;
  std::vector<Term> free_;
  std::vector<Term> bound_;
};

}  // namespace

SatResult SmtOracle::is_sat(const Term& c) {
  if (c.is_true()) return SatResult::Sat;
  if (c.is_false()) return SatResult::Unsat;
  QueryNames names;
  names.scan(c);
  return session_.check(names.declarations(), to_smt(c, names.fn()));
}

Entailment SmtOracle::entails(const Term& c, const Term& d, const std::vector<Term>& exists) {
  if (d.is_true() || c.is_false()) return Entailment::Yes;
  std::vector<Term> used_exists;
  for (const auto& v : exists) {
    if (occurs(v.var_id(), d)) used_exists.push_back(v);
  }
  if (used_exists.empty()) {
    bool all_present = true;
    const auto cs = conjuncts(c);
    for (const auto& lit : conjuncts(d)) {
      bool found = false;
      for (const auto& x : cs) found = found || x == lit;
      all_present = all_present && found;
    }
    if (all_present) return Entailment::Yes;
  }
  QueryNames names;
  names.bind_exists(used_exists);
  names.scan(c);
  names.scan(d);
  std::string goal = to_smt(d, names.fn());
  if (!used_exists.empty()) goal = "(exists " + names.binder() + ' ' + goal + ')';
  const std::string assertion = "(and " + to_smt(c, names.fn()) + " (not " + goal + "))";
  switch (session_.check(names.declarations(), assertion)) {
    case SatResult::Unsat: return Entailment::Yes;
    case SatResult::Sat: return Entailment::No;
    case SatResult::Unknown: return Entailment::Unknown;
  }
  return Entailment::Unknown;
}

SatResult RecordingOracle::is_sat(const Term& c) {
  const SatResult r = inner_.is_sat(c);
  log_ += r == SatResult::Sat ? 's' : r == SatResult::Unsat ? 'u' : '?';
  return r;
}

Entailment RecordingOracle::entails(const Term& c, const Term& d, const std::vector<Term>& exists) {
  const Entailment r = inner_.entails(c, d, exists);
  log_ += r == Entailment::Yes ? 'y' : r == Entailment::No ? 'n' : '?';
  return r;
}

std::string RecordingOracle::take() {
  std::string out;
  out.swap(log_);
  return out;
}

char ReplayOracle::next() {
  if (pos_ >= answers_.size()) throw std::runtime_error("replay log exhausted");
  return answers_[pos_++];
}

SatResult ReplayOracle::is_sat(const Term&) {
  const char a = next();
  if (a == 's') return SatResult::Sat;
  if (a == 'u') return SatResult::Unsat;
  if (a == '?') return SatResult::Unknown;
  throw std::runtime_error(std::string("replay log expected a satisfiability answer, found '") + a + "'");
}

Entailment ReplayOracle::entails(const Term&, const Term&, const std::vector<Term>&) {
  const char a = next();
  if (a == 'y') return Entailment::Yes;
  if (a == 'n') return Entailment::No;
  if (a == '?') return Entailment::Unknown;
  throw std::runtime_error(std::string("replay log expected an entailment answer, found '") + a + "'");
}

bool is_literal(const Term& t) {
  switch (t.op()) {
    case Op::Var:
    case Op::BoolConst:
    case Op::Eq:
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt: return true;
    case Op::Not: return t.arg(0).is_var();
    default: return false;
  }
}

ConjunctiveView conjunctive_view(const Term& c) {
  ConjunctiveView v;
  std::vector<Term> rest;
  for (const auto& lit : conjuncts(c)) (is_literal(lit) ? v.literals : rest).push_back(lit);
  v.residue = mk_and(std::move(rest));
  return v;
}

Term project(const Term& c, const std::vector<Term>& vars) {
  std::unordered_set<VarId> keep;
  for (const auto& v : vars) keep.insert(v.var_id());
  auto inside = [&](const Term& t) {
    for (const auto& v : vars_of(t)) {
      if (!keep.count(v.var_id())) return false;
    }
    return true;
  };
  const std::vector<Term> lits = conjuncts(c);
  Substitution defs;
  for (const auto& lit : lits) {
    auto define = [&](const Term& x, const Term& t) {
      if (x.is_var() && !keep.count(x.var_id()) && !defs.find(x.var_id()) && inside(t)) {
        defs.set(x, t);
        return true;
      }
      return false;
    };
    if (lit.op() == Op::Eq) {
      if (!define(lit.arg(0), lit.arg(1))) define(lit.arg(1), lit.arg(0));
    } else if (lit.is_var()) {
      define(lit, Term::truth());
    } else if (lit.op() == Op::Not && lit.arg(0).is_var()) {
      define(lit.arg(0), Term::falsity());
    }
  }
  std::vector<Term> out;
  for (const auto& lit : lits) {
    Term l = simplify(defs.apply(lit));
    if (!l.is_true() && inside(l)) out.push_back(l);
  }
  return mk_and(std::move(out));
}

Term widen(const Term& c1, const Term& c2, ConstraintOracle& oracle) {
  ConjunctiveView v = conjunctive_view(c1);
  std::vector<Term> candidates = v.literals;
  if (!v.residue.is_true()) candidates.push_back(v.residue);
  std::vector<Term> kept;
  for (const auto& lit : candidates) {
    if (oracle.entails(c2, lit) == Entailment::Yes) kept.push_back(lit);
  }
  return mk_and(std::move(kept));
}

}  // namespace cata
