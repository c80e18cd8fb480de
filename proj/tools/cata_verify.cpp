// cata-verify: catamorphism-based contract verification for constrained Horn
// clauses.
//
//   cata-verify transform [flags] <file>...
//   cata-verify verify [flags] <file>...
//   cata-verify bench [flags] <dir-or-file>...
//
// Exit codes: 0 all contracts verified, 1 some not verified, 2 usage or input
// error, 3 infrastructure error (solver missing or misbehaving).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cata/bench.hpp"
#include "cata/emit.hpp"
#include "cata/print.hpp"
#include "cata/subprocess.hpp"

namespace fs = std::filesystem;
using namespace cata;

namespace {

enum Exit { kOk = 0, kNotVerified = 1, kInput = 2, kInfra = 3 };

struct Settings {
  std::vector<std::string> inputs;
  std::string solver;
  std::vector<std::string> solver_args;
  int query_timeout_ms = 5000;
  int timeout_ms = 60000;
  bool tuple_zygo = false;
  bool per_contract = false;
  bool trace = false;
  bool baseline = false;
  std::string emit;
  std::string out = ".";
  std::string csv;
  unsigned jobs = 0;
  std::size_t iteration_cap = 1000;
};

PipelineOptions pipeline(const Settings& s) {
  PipelineOptions o;
  o.solver.solver = s.solver;
  o.solver.extra_args = s.solver_args;
  o.solver.timeout_ms = s.timeout_ms;
  o.query_timeout_ms = s.query_timeout_ms;
  o.tuple_zygo = s.tuple_zygo;
  o.per_contract = s.per_contract;
  o.iteration_cap = s.iteration_cap;
  return o;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string trace_text(const std::vector<StepRecord>& log) {
  std::string s;
  for (const auto& r : log) s += to_string(r) + "\n";
  return s;
}

/// Untransformed clause set: the program and every goal, ADTs included.
std::vector<Clause> baseline_clauses(const Problem& pb) {
  std::vector<Clause> out;
  for (const auto& c : pb.program.clauses) {
    if (!c.is_goal()) out.push_back(c);
  }
  for (const auto& o : pb.obligations) out.push_back(o.goal);
  return out;
}

struct Loaded {
  Problem pb;
  std::string error;
};

Loaded load(const std::string& path, bool tuple) {
  Loaded l;
  try {
    if (!fs::is_regular_file(path)) throw FrontendError({}, "cannot read " + path);
    l.pb = prepare(parse_file(path), tuple);
  } catch (const FrontendError& e) {
    l.error = e.what();
  } catch (const ClassificationError& e) {
    l.error = e.what();
  } catch (const SchemaError& e) {
    l.error = e.what();
  }
  return l;
}

int cmd_transform(const Settings& s) {
  int code = kOk;
  fs::create_directories(s.out);
  for (const auto& in : s.inputs) {
    Loaded l = load(in, s.tuple_zygo);
    if (!l.error.empty()) {
      std::cerr << in << ": " << l.error << '\n';
      code = std::max(code, static_cast<int>(kInput));
      continue;
    }
    const std::string stem = fs::path(in).stem().string();
    std::vector<Clause> cls;
    std::vector<StepRecord> log;
    if (s.baseline) {
      cls = baseline_clauses(l.pb);
    } else {
      SmtSession::Options so;
      so.timeout_ms = s.query_timeout_ms;
      SmtSession session(so);
      SmtOracle oracle(session);
      std::vector<const Obligation*> goals;
      std::vector<Contract> contracts;
      for (const auto& o : l.pb.obligations) {
        goals.push_back(&o);
        if (o.contract) contracts.push_back(*o.contract);
      }
      try {
        TransformResult r = transform_obligations(l.pb, goals, contracts, oracle, s.iteration_cap);
        cls = std::move(r.clauses);
        log = std::move(r.log);
      } catch (const TransformError& e) {
        std::cerr << in << ": transformation failed: " << e.what() << '\n';
        code = std::max(code, static_cast<int>(kNotVerified));
        continue;
      } catch (const IterationCapExceeded& e) {
        std::cerr << in << ": transformation failed: " << e.what() << '\n';
        code = std::max(code, static_cast<int>(kNotVerified));
        continue;
      }
    }
    const std::string prolog = emit_prolog(cls);
    const std::string smt = emit_smtlib(cls, l.pb.program.sorts);
    const std::string suffix = s.baseline ? ".baseline" : ".transf";
    write_file(fs::path(s.out) / (stem + suffix + ".pl"), prolog);
    write_file(fs::path(s.out) / (stem + (s.baseline ? ".baseline.smt2" : ".smt2")), smt);
    if (s.trace && !s.baseline) write_file(fs::path(s.out) / (stem + ".trace"), trace_text(log));
    if (s.emit == "prolog") std::cout << prolog;
    if (s.emit == "smt2") std::cout << smt;
  }
  return code;
}

void print_verdicts(const std::string& file, const std::vector<Verdict>& vs) {
  std::size_t w = 8;
  for (const auto& v : vs) w = std::max(w, v.id.size());
  std::cout << file << '\n';
  for (const auto& v : vs) {
    std::cout << "  " << v.id << std::string(w - v.id.size() + 2, ' ') << to_string(v.status);
    std::cout << "  " << v.solver << "  " << v.wall_ms << " ms";
    if (!v.detail.empty()) std::cout << "  (" << v.detail << ')';
    std::cout << '\n';
  }
}

int cmd_verify(const Settings& s) {
  int code = kOk;
  const PipelineOptions opts = pipeline(s);
  for (const auto& in : s.inputs) {
    VerifyReport rep;
    if (s.baseline) {
      Loaded l = load(in, s.tuple_zygo);
      if (!l.error.empty()) {
        rep.failure = VerifyReport::Failure::Input;
        rep.error = l.error;
      } else {
        rep.script = emit_smtlib(baseline_clauses(l.pb), l.pb.program.sorts);
        try {
          const SolveResult sr = solve_script(rep.script, opts.solver);
          rep.backend = sr.status;
          rep.checksat_ms = sr.wall_ms;
          const Verdict::Status st = sr.status == SolveStatus::Sat       ? Verdict::Status::Verified
                                     : sr.status == SolveStatus::Timeout ? Verdict::Status::SolverTimeout
                                                                         : Verdict::Status::Unknown;
          for (const auto& o : l.pb.obligations) {
            rep.verdicts.push_back(Verdict{o.id, st, solver_version(opts.solver), sr.wall_ms, ""});
          }
        } catch (const SolverUnavailable& e) {
          rep.failure = VerifyReport::Failure::Infrastructure;
          rep.error = e.what();
        } catch (const ProtocolError& e) {
          rep.failure = VerifyReport::Failure::Infrastructure;
          rep.error = e.what();
        }
      }
    } else {
      rep = verify_file(in, opts);
    }
    if (rep.failure == VerifyReport::Failure::Input) {
      std::cerr << in << ": " << rep.error << '\n';
      code = std::max(code, static_cast<int>(kInput));
      continue;
    }
    if (rep.failure == VerifyReport::Failure::Infrastructure) {
      std::cerr << in << ": " << rep.error << '\n';
      return kInfra;
    }
    print_verdicts(in, rep.verdicts);
    for (const auto& v : rep.verdicts) {
      if (v.status != Verdict::Status::Verified) code = std::max(code, static_cast<int>(kNotVerified));
    }
    if (s.out != "." || s.trace) {
      fs::create_directories(s.out);
      const std::string stem = fs::path(in).stem().string();
      if (!s.baseline) write_file(fs::path(s.out) / (stem + ".transf.pl"), emit_prolog(rep.transformed));
      write_file(fs::path(s.out) / (stem + (s.baseline ? ".baseline.smt2" : ".smt2")), rep.script);
      if (s.trace) write_file(fs::path(s.out) / (stem + ".trace"), trace_text(rep.trace));
      std::string verdicts;
      for (const auto& v : rep.verdicts) verdicts += v.id + " " + to_string(v.status) + "\n";
      write_file(fs::path(s.out) / (stem + ".verdicts"), verdicts);
    }
  }
  return code;
}

int cmd_bench(const Settings& s) {
  std::vector<std::string> files;
  for (const auto& in : s.inputs) {
    if (fs::is_directory(in)) {
      for (auto& f : corpus_files(in)) files.push_back(f);
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    } else {
      std::cerr << "no such corpus: " << in << '\n';
      return kInput;
    }
  }
  if (!files.empty() && find_executable(s.solver).empty()) {
    std::cerr << "solver not found: " << s.solver << '\n';
    return kInfra;
  }
  const unsigned jobs = s.jobs ? s.jobs : std::max(1u, std::thread::hardware_concurrency());
  const BenchReport report = run_bench(files, pipeline(s), jobs);
  std::cout << format_table(report);
  const std::string csv = s.csv.empty() ? (fs::path(s.out) / "bench.csv").string() : s.csv;
  if (!fs::path(csv).parent_path().empty()) fs::create_directories(fs::path(csv).parent_path());
  write_file(csv, format_csv(report));
  return kOk;
}

void add_common(CLI::App* sub, Settings& s) {
  sub->add_option("inputs", s.inputs, "Input files")->required();
  sub->add_option("--solver", s.solver, "CHC solver executable (fallback: CATA_SOLVER, then z3)");
  sub->add_option("--solver-arg", s.solver_args, "Extra solver argument (repeatable)");
  sub->add_option("--query-timeout", s.query_timeout_ms, "Per constraint query timeout in ms")
      ->check(CLI::PositiveNumber);
  sub->add_option("--timeout", s.timeout_ms, "Per problem solver timeout in ms")->check(CLI::PositiveNumber);
  sub->add_option("--iteration-cap", s.iteration_cap, "Transformation iteration cap")->check(CLI::PositiveNumber);
  sub->add_flag("--tuple-zygo", s.tuple_zygo, "Tuple zygomorphic catamorphisms before transforming");
  sub->add_flag("--per-contract", s.per_contract, "One verdict per contract");
  sub->add_flag("--trace", s.trace, "Write the derivation trace");
  sub->add_flag("--baseline", s.baseline, "Skip the transformation and encode ADTs directly");
  sub->add_option("--emit", s.emit, "Print the result in this format")->check(CLI::IsMember({"prolog", "smt2"}));
  sub->add_option("--out", s.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catamorphism-based contract verification for constrained Horn clauses"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  Settings s;
  CLI::App* transform = app.add_subcommand("transform", "Transform clauses and write them out");
  CLI::App* verify = app.add_subcommand("verify", "Transform and check contracts with the CHC solver");
  CLI::App* bench = app.add_subcommand("bench", "Verify every program of a corpus and tabulate");
  add_common(transform, s);
  add_common(verify, s);
  add_common(bench, s);
  bench->add_option("--jobs", s.jobs, "Worker count (default: hardware threads)");
  bench->add_option("--csv", s.csv, "CSV report path (default: <out>/bench.csv)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  if (s.solver.empty()) {
    const char* env = std::getenv("CATA_SOLVER");
    s.solver = env && *env ? env : "z3";
  }
  try {
    if (*transform) return cmd_transform(s);
    if (*verify) return cmd_verify(s);
    return cmd_bench(s);
  } catch (const SolverUnavailable& e) {
    std::cerr << e.what() << '\n';
    return kInfra;
  } catch (const ProtocolError& e) {
    std::cerr << e.what() << '\n';
    return kInfra;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInfra;
  }
}
