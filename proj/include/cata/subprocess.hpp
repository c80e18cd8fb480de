#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cata {

class SolverUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolves `name` against PATH unless it already contains a slash. Returns
/// an empty string when no executable is found.
std::string find_executable(const std::string& name);

/// A child process with piped stdin/stdout (stderr is merged into stdout).
class Subprocess {
 public:
  Subprocess() = default;
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess();

  void start(const std::vector<std::string>& argv);
  bool running() const { return pid_ > 0; }
  /// False when the child has closed its input.
  bool write_all(const std::string& data);
  /// One line without the trailing newline; nullopt on EOF or timeout
  /// (`timed_out` tells which).
  std::optional<std::string> read_line(int timeout_ms, bool& timed_out);
  void kill();

 private:
  int pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;
  long wall_ms = 0;
};

/// Runs `argv` to completion, killing it after `timeout_ms`.
ProcessResult run_process(const std::vector<std::string>& argv, int timeout_ms);

}  // namespace cata
