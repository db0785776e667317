#pragma once

#include "cobp/verifier.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cobp::cli {

/// Process exit codes. Every run status and verdict maps to exactly one.
enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kDeadlock = 2,
  kStepLimit = 3,
  kViolation = 4,
  kBoundExceeded = 5,
};

int exit_code(RunStatus s);
int exit_code(Outcome o);

struct RunConfig {
  std::string example;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10'000;
  std::string arbiter = "random";  // random | first | priority
  std::optional<std::string> ctx_path;
  std::optional<std::string> trace_path;
  bool snapshots = false;

  /// Throws ConfigError.
  void validate() const;
};

struct VerifyConfig {
  std::string example;
  Limits limits;
  unsigned workers = 1;
  std::optional<std::string> ctx_path;
  std::optional<std::string> report_path;
  /// Counterexample replay as JSON lines.
  std::optional<std::string> trace_path;
};

/// Runs an example; human summary on `out`, problems on `err`.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_list(std::ostream& out);

/// Reads COBP_LOG (trace, debug, info, warn, error, off) and configures the
/// diagnostic logger on stderr. Defaults to warn.
void init_logging();

}  // namespace cobp::cli
