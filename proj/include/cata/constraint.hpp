#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cata/subprocess.hpp"
#include "cata/term.hpp"

namespace cata {

enum class SatResult { Sat, Unsat, Unknown };
enum class Entailment { Yes, No, Unknown };

const char* to_string(SatResult r);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmtStats {
  std::uint64_t queries = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t restarts = 0;
  double solver_ms = 0;
};

/// A persistent SMT solver process speaking SMT-LIB v2 on stdin/stdout.
/// Every query runs inside push/pop, and answers are cached by query text,
/// so equal queries get equal answers for the lifetime of the session.
class SmtSession {
 public:
  struct Options {
    std::string solver = "z3";
    std::vector<std::string> args = {"-in"};
    int timeout_ms = 5000;
  };

  explicit SmtSession(Options opts);
  SmtSession(const SmtSession&) = delete;
  SmtSession& operator=(const SmtSession&) = delete;

  /// Satisfiability of `assertion` after `declarations` (SMT-LIB text).
  SatResult check(const std::string& declarations, const std::string& assertion);
  const SmtStats& stats() const { return stats_; }
  const Options& options() const { return opts_; }

 private:
  void start();
  std::optional<SatResult> ask(const std::string& script);

  Options opts_;
  std::string path_;
  Subprocess proc_;
  std::map<std::string, SatResult> cache_;
  SmtStats stats_;
};

/// Decision services over LIA+Bool constraints. Results may be recorded and
/// replayed, so all transformation steps go through this interface.
class ConstraintOracle {
 public:
  virtual ~ConstraintOracle() = default;
  virtual SatResult is_sat(const Term& c) = 0;
  /// Whether every model of `c` can be extended, by choosing values for
  /// `exists`, to a model of `d`.
  virtual Entailment entails(const Term& c, const Term& d, const std::vector<Term>& exists = {}) = 0;
};

class SmtOracle : public ConstraintOracle {
 public:
  explicit SmtOracle(SmtSession& session) : session_(session) {}
  SatResult is_sat(const Term& c) override;
  Entailment entails(const Term& c, const Term& d, const std::vector<Term>& exists = {}) override;

 private:
  SmtSession& session_;
};

/// Wraps another oracle and logs one character per answer (`s`/`u`/`?` for
/// satisfiability, `y`/`n`/`?` for entailment).
class RecordingOracle : public ConstraintOracle {
 public:
  explicit RecordingOracle(ConstraintOracle& inner) : inner_(inner) {}
  SatResult is_sat(const Term& c) override;
  Entailment entails(const Term& c, const Term& d, const std::vector<Term>& exists = {}) override;
  /// Answers since the previous call.
  std::string take();

 private:
  ConstraintOracle& inner_;
  std::string log_;
};

/// Replays recorded answers in order; throws if the queries run out.
class ReplayOracle : public ConstraintOracle {
 public:
  explicit ReplayOracle(std::string answers) : answers_(std::move(answers)) {}
  SatResult is_sat(const Term& c) override;
  Entailment entails(const Term& c, const Term& d, const std::vector<Term>& exists = {}) override;
  bool exhausted() const { return pos_ == answers_.size(); }

 private:
  char next();
  std::string answers_;
  std::size_t pos_ = 0;
};

/// Top-level conjuncts split into atomic literals (relations, boolean
/// literals) and everything else, kept together as one residue formula.
struct ConjunctiveView {
  std::vector<Term> literals;
  Term residue = Term::truth();
};

ConjunctiveView conjunctive_view(const Term& c);
bool is_literal(const Term& t);

/// A formula over `vars` entailed by `c`: literals of `c` whose variables lie
/// in `vars`, after one round of substituting definitions `X = t` of the
/// other variables.
Term project(const Term& c, const std::vector<Term>& vars);

/// Generalization: the literals of `c1` (and its residue) entailed by `c2`.
/// Unknown entailment drops the literal.
Term widen(const Term& c1, const Term& c2, ConstraintOracle& oracle);

}  // namespace cata
