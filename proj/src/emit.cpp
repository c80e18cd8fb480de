#include "cata/emit.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

#include "cata/print.hpp"
#include "cata/smtlib.hpp"
#include "cata/subprocess.hpp"

namespace cata {

namespace {

bool is_simple_symbol(const std::string& s) {
  static const std::set<std::string> reserved{"and", "or", "not", "ite", "true", "false", "let", "forall", "exists",
                                              "assert", "par", "as", "distinct", "_", "!"};
  if (s.empty() || reserved.count(s) || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '.' && ch != '$') return false;
  }
  return true;
}

std::string symbol(const std::string& s) { return is_simple_symbol(s) ? s : "|" + s + "|"; }

void collect_adts(const Sort& s, const SortTable& sorts, std::vector<Sort>& out) {
  if (!s.is_adt()) return;
  for (const auto& x : out) {
    if (x == s) return;
  }
  out.push_back(s);
  for (const auto& c : sorts.constructors(s)) {
    for (const auto& f : sorts.field_sorts(s, c.name)) collect_adts(f, sorts, out);
  }
}

void term_sorts(const Term& t, const SortTable& sorts, std::vector<Sort>& out) {
  collect_adts(t.sort(), sorts, out);
  for (const auto& a : t.args()) term_sorts(a, sorts, out);
}

std::string atom_smt(const Atom& a, VarNaming& names) {
  if (a.args.empty()) return symbol(a.pred);
  std::ostringstream os;
  os << '(' << symbol(a.pred);
  for (const auto& t : a.args) os << ' ' << to_smt(t, [&](const Term& v) { return names.name(v); });
  os << ')';
  return os.str();
}

}  // namespace

std::string emit_smtlib(const std::vector<Clause>& cls, const SortTable& sorts) {
  std::ostringstream os;
  os << "(set-logic HORN)\n";
  std::vector<Sort> adts;
  std::vector<std::pair<std::string, std::vector<Sort>>> preds;
  std::set<std::string> seen;
  auto note = [&](const Atom& a) {
    for (const auto& t : a.args) term_sorts(t, sorts, adts);
    if (!seen.insert(a.pred).second) return;
    std::vector<Sort> sig;
    for (const auto& t : a.args) sig.push_back(t.sort());
    preds.emplace_back(a.pred, std::move(sig));
  };
  for (const auto& c : cls) {
    if (c.head) note(*c.head);
    for (const auto& a : c.body) note(a);
    term_sorts(c.constraint, sorts, adts);
  }
  if (!adts.empty()) {
    os << "(declare-datatypes (";
    for (std::size_t i = 0; i < adts.size(); ++i) os << (i ? " " : "") << '(' << adts[i].mangled() << " 0)";
    os << ")\n  (";
    for (std::size_t i = 0; i < adts.size(); ++i) {
      const Sort& s = adts[i];
      os << (i ? "\n   " : "") << '(';
      bool first = true;
      for (const auto& c : sorts.constructors(s)) {
        os << (first ? "" : " ") << '(' << smt_constructor(s, c.name);
        first = false;
        const auto fields = sorts.field_sorts(s, c.name);
        for (std::size_t f = 0; f < fields.size(); ++f) {
          os << " (" << smt_constructor(s, c.name) << '.' << f << ' ' << smt_sort(fields[f]) << ')';
        }
        os << ')';
      }
      os << ')';
    }
    os << "))\n";
  }
  for (const auto& [name, sig] : preds) {
    os << "(declare-fun " << symbol(name) << " (";
    for (std::size_t i = 0; i < sig.size(); ++i) os << (i ? " " : "") << smt_sort(sig[i]);
    os << ") Bool)\n";
  }
  for (const auto& c : cls) {
    VarNaming names;
    names.reserve(c);
    const std::vector<Term> vars = vars_of(c);
    std::vector<std::string> body;
    if (!c.constraint.is_true()) body.push_back(to_smt(c.constraint, [&](const Term& v) { return names.name(v); }));
    for (const auto& a : c.body) body.push_back(atom_smt(a, names));
    std::string lhs;
    if (body.empty()) {
      lhs = "true";
    } else if (body.size() == 1) {
      lhs = body[0];
    } else {
      lhs = "(and";
      for (const auto& b : body) lhs += " " + b;
      lhs += ")";
    }
    const std::string rhs = c.head ? atom_smt(*c.head, names) : "false";
    std::string imp = "(=> " + lhs + " " + rhs + ")";
    if (!vars.empty()) {
      std::string binder = "(";
      for (std::size_t i = 0; i < vars.size(); ++i) {
        binder += (i ? " (" : "(") + names.name(vars[i]) + " " + smt_sort(vars[i].sort()) + ")";
      }
      binder += ")";
      imp = "(forall " + binder + " " + imp + ")";
    }
    os << "(assert " << imp << ")\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

std::string emit_prolog(const std::vector<Clause>& cls) {
  std::ostringstream os;
  for (const auto& c : cls) os << to_prolog(c) << '\n';
  return os.str();
}

std::string emit_prolog(const SourceProgram& p) {
  std::ostringstream os;
  for (const auto& d : p.sorts.declarations()) {
    if (d.name == "list" || d.name == "tree") continue;
    os << ":- data " << d.name;
    if (!d.params.empty()) {
      os << '(';
      for (std::size_t i = 0; i < d.params.size(); ++i) os << (i ? ", " : "") << d.params[i];
      os << ')';
    }
    os << " = ";
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      const auto& c = d.constructors[i];
      os << (i ? " | " : "") << c.name;
      if (!c.fields.empty()) {
        os << '(';
        for (std::size_t f = 0; f < c.fields.size(); ++f) os << (f ? ", " : "") << c.fields[f].to_string();
        os << ')';
      }
    }
    os << ".\n";
  }
  for (const auto& name : p.pred_order) {
    if (p.synthetic_preds.count(name)) continue;
    auto it = p.signatures.find(name);
    if (it == p.signatures.end()) continue;
    os << ":- pred " << name;
    if (!it->second.empty()) {
      os << '(';
      for (std::size_t i = 0; i < it->second.size(); ++i) os << (i ? ", " : "") << it->second[i].to_string();
      os << ')';
    }
    os << ".\n";
  }
  // Synthetic match atoms go back into constructor terms, as in the source.
  std::map<std::string, const Clause*> matchers;
  for (const auto& c : p.clauses) {
    if (c.head && p.synthetic_preds.count(c.head->pred)) matchers.emplace(c.head->pred, &c);
  }
  for (const auto& c : p.clauses) {
    if (c.head && p.synthetic_preds.count(c.head->pred)) continue;
    Clause r = c;
    for (std::size_t i = 0; i < r.body.size();) {
      auto it = matchers.find(r.body[i].pred);
      const auto s = it == matchers.end() ? std::nullopt : mgu(r.body[i], *rename_apart(*it->second).head);
      if (!s) {
        ++i;
        continue;
      }
      r.body.erase(r.body.begin() + static_cast<std::ptrdiff_t>(i));
      r = s->apply(r);
    }
    os << to_prolog(r) << '\n';
  }
  for (const auto& k : p.contracts) os << ":- spec " << contract_to_string(k) << ".\n";
  return os.str();
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
    case SolveStatus::Timeout: return "timeout";
  }
  return "unknown";
}

const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Verified: return "verified";
    case Verdict::Status::Unknown: return "unknown";
    case Verdict::Status::SolverTimeout: return "solver-timeout";
    case Verdict::Status::TransformationFailed: return "transformation-failed";
  }
  return "unknown";
}

SolveStatus parse_status(const std::string& output) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == ';') continue;
    line = line.substr(b);
    if (line == "sat") return SolveStatus::Sat;
    if (line == "unsat") return SolveStatus::Unsat;
    if (line == "unknown") return SolveStatus::Unknown;
    throw ProtocolError("unexpected solver output: " + line);
  }
  throw ProtocolError("solver produced no status");
}

SolveResult solve_file(const std::string& path, const SolverConfig& cfg) {
  const std::string exe = find_executable(cfg.solver);
  if (exe.empty()) throw SolverUnavailable("solver not found: " + cfg.solver);
  std::vector<std::string> argv{exe};
  argv.insert(argv.end(), cfg.extra_args.begin(), cfg.extra_args.end());
  argv.push_back(path);
  const ProcessResult pr = run_process(argv, cfg.timeout_ms);
  SolveResult r;
  r.output = pr.output;
  r.wall_ms = pr.wall_ms;
  r.status = pr.timed_out ? SolveStatus::Timeout : parse_status(pr.output);
  return r;
}

SolveResult solve_script(const std::string& script, const SolverConfig& cfg) {
  const char* tmp = std::getenv("TMPDIR");
  std::string templ = std::string(tmp && *tmp ? tmp : "/tmp") + "/cata-XXXXXX.smt2";
  std::vector<char> buf(templ.begin(), templ.end());
  buf.push_back('\0');
  const int fd = ::mkstemps(buf.data(), 5);
  if (fd < 0) throw SolverUnavailable("cannot create a temporary file");
  ::close(fd);
  const std::string path(buf.data());
  {
    std::ofstream out(path);
    out << script;
  }
  try {
    SolveResult r = solve_file(path, cfg);
    std::remove(path.c_str());
    return r;
  } catch (...) {
    std::remove(path.c_str());
    throw;
  }
}

SolveResult solve(const std::vector<Clause>& cls, const SortTable& sorts, const SolverConfig& cfg) {
  return solve_script(emit_smtlib(cls, sorts), cfg);
}

std::string solver_version(const SolverConfig& cfg) {
  static std::mutex mu;
  static std::map<std::string, std::string> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(cfg.solver); it != cache.end()) return it->second;
  std::string out = cfg.solver;
  const std::string exe = find_executable(cfg.solver);
  if (!exe.empty()) {
    const ProcessResult pr = run_process({exe, "--version"}, 5000);
    std::istringstream in(pr.output);
    std::string word;
    std::string prev;
    while (in >> word) {
      if (prev == "version") {
        const std::size_t slash = exe.find_last_of('/');
        out = exe.substr(slash == std::string::npos ? 0 : slash + 1) + " " + word;
        break;
      }
      prev = word;
    }
  }
  cache.emplace(cfg.solver, out);
  return out;
}

Problem prepare(SourceProgram p, bool tuple_zygo) {
  Problem pb;
  pb.cls = classify(p);
  const std::set<std::string> catas = pb.cls.cata_names();
  for (const auto& k : p.contracts) check_contract(k, p, &catas);
  if (tuple_zygo) apply_tupling(p, pb.cls);
  std::vector<Clause> remaining;
  std::vector<Contract> lifted = lift_goals(p, pb.cls.program_preds, remaining);
  for (const auto& k : p.contracts) pb.obligations.push_back(Obligation{k.id, k, contract_to_goal(k)});
  for (const auto& k : lifted) pb.obligations.push_back(Obligation{k.id, k, contract_to_goal(k)});
  for (const auto& g : remaining) {
    const std::string where = g.origin.rfind("line ", 0) == 0 ? g.origin.substr(5) : g.origin;
    pb.obligations.push_back(Obligation{"goal@" + where, std::nullopt, g});
  }
  pb.program = std::move(p);
  return pb;
}

std::map<std::string, Contract> lemmas_for(const Problem& pb, const std::vector<Contract>& contracts,
                                           const std::set<std::string>& trivial_ok) {
  std::map<std::string, std::vector<Contract>> by_pred;
  for (const auto& k : contracts) by_pred[k.pred].push_back(k);
  std::map<std::string, Contract> out;
  for (const auto& pred : pb.cls.program_preds) {
    auto it = by_pred.find(pred);
    if (it != by_pred.end()) {
      out.emplace(pred, it->second.size() == 1 ? it->second.front() : merge_contracts(it->second));
    } else if (pb.program.synthetic_preds.count(pred) || trivial_ok.count(pred)) {
      out.emplace(pred, trivial_contract(pred, pb.program.signatures.at(pred)));
    }
  }
  return out;
}

TransformResult transform_obligations(const Problem& pb, const std::vector<const Obligation*>& goals,
                                      const std::vector<Contract>& lemma_set, ConstraintOracle& oracle,
                                      std::size_t iteration_cap, const std::set<std::string>& trivial_ok) {
  TransformOptions topts;
  topts.iteration_cap = iteration_cap;
  Transformer t(pb.program, pb.cls, lemmas_for(pb, lemma_set, trivial_ok), oracle, topts);
  std::vector<Clause> gs;
  for (const auto* o : goals) gs.push_back(o->goal);
  return t.run(gs);
}

namespace {

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
}

struct Attempt {
  bool transformed = false;
  std::string detail;
  TransformResult result;
  std::string script;
  SolveStatus status = SolveStatus::Unknown;
};

Verdict::Status verdict_of(const Attempt& a) {
  if (!a.transformed) return Verdict::Status::TransformationFailed;
  if (a.status == SolveStatus::Sat) return Verdict::Status::Verified;
  if (a.status == SolveStatus::Timeout) return Verdict::Status::SolverTimeout;
  return Verdict::Status::Unknown;
}

}  // namespace

VerifyReport verify_problem(const Problem& pb, const PipelineOptions& opts) {
  VerifyReport rep;
  SmtSession::Options so;
  so.timeout_ms = opts.query_timeout_ms;
  if (opts.solver.solver.find("z3") != std::string::npos) so.solver = opts.solver.solver;
  SmtSession session(so);
  SmtOracle oracle(session);
  const std::string solver = solver_version(opts.solver);

  std::set<std::string> had_contract;
  for (const auto& o : pb.obligations) {
    if (o.contract) had_contract.insert(o.contract->pred);
  }

  auto contracts_of = [](const std::vector<const Obligation*>& os) {
    std::vector<Contract> out;
    for (const auto* o : os) {
      if (o->contract) out.push_back(*o->contract);
    }
    return out;
  };

  auto attempt = [&](const std::vector<const Obligation*>& goals, const std::vector<Contract>& lemma_set) {
    Attempt a;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      a.result = transform_obligations(pb, goals, lemma_set, oracle, opts.iteration_cap, had_contract);
      a.transformed = true;
    } catch (const TransformError& e) {
      a.detail = e.what();
    } catch (const IterationCapExceeded& e) {
      a.detail = e.what();
    }
    rep.transform_ms += elapsed_ms(t0);
    if (!a.transformed) return a;
    a.script = emit_smtlib(a.result.clauses, pb.program.sorts);
    const SolveResult sr = solve_script(a.script, opts.solver);
    rep.checksat_ms += sr.wall_ms;
    a.status = sr.status;
    return a;
  };

  auto finish = [&](const Attempt& a) {
    rep.transformed = a.result.clauses;
    rep.trace = a.result.log;
    rep.script = a.script;
    rep.backend = a.status;
  };

  std::vector<const Obligation*> all;
  for (const auto& o : pb.obligations) all.push_back(&o);
  const auto t_start = std::chrono::steady_clock::now();

  try {
    if (!opts.per_contract) {
      const Attempt a = attempt(all, contracts_of(all));
      finish(a);
      for (const auto* o : all) rep.verdicts.push_back(Verdict{o->id, verdict_of(a), solver, 0, a.detail});
    } else {
      std::map<const Obligation*, Verdict> dropped;
      std::vector<const Obligation*> alive = all;
      bool changed = true;
      while (changed && !alive.empty()) {
        changed = false;
        const std::vector<Contract> lemma_set = contracts_of(alive);
        for (std::size_t i = 0; i < alive.size() && !changed; ++i) {
          const Attempt a = attempt({alive[i]}, lemma_set);
          if (verdict_of(a) == Verdict::Status::Verified) continue;
          dropped.emplace(alive[i], Verdict{alive[i]->id, verdict_of(a), solver, 0, a.detail});
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
        }
      }
      Attempt joint;
      if (!alive.empty()) {
        joint = attempt(alive, contracts_of(alive));
        finish(joint);
      }
      for (const auto* o : all) {
        auto it = dropped.find(o);
        rep.verdicts.push_back(it != dropped.end() ? it->second : Verdict{o->id, verdict_of(joint), solver, 0, joint.detail});
      }
    }
  } catch (const SolverUnavailable& e) {
    rep.failure = VerifyReport::Failure::Infrastructure;
    rep.error = e.what();
    rep.verdicts.clear();
  } catch (const ProtocolError& e) {
    rep.failure = VerifyReport::Failure::Infrastructure;
    rep.error = e.what();
    rep.verdicts.clear();
  }
  const long total = elapsed_ms(t_start);
  for (auto& v : rep.verdicts) v.wall_ms = total;
  return rep;
}

VerifyReport verify_file(const std::string& path, const PipelineOptions& opts) {
  VerifyReport rep;
  Problem pb;
  try {
    std::ifstream probe(path);
    if (!probe) throw FrontendError({}, "cannot read " + path);
    pb = prepare(parse_file(path), opts.tuple_zygo);
  } catch (const FrontendError& e) {
    rep.failure = VerifyReport::Failure::Input;
    rep.error = e.what();
    return rep;
  } catch (const ClassificationError& e) {
    rep.failure = VerifyReport::Failure::Input;
    rep.error = e.what();
    return rep;
  } catch (const SchemaError& e) {
    rep.failure = VerifyReport::Failure::Input;
    rep.error = e.what();
    return rep;
  }
  return verify_problem(pb, opts);
}

}  // namespace cata
