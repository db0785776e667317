#pragma once

#include "cobp/engine.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cobp {

struct Limits {
  std::uint64_t max_states = 1'000'000;
  std::uint64_t max_depth = 10'000;
  /// Only used by trace enumeration.
  std::uint64_t max_traces = 1'000'000;

  /// Throws ConfigError on a zero bound.
  void validate() const;
};

enum class SearchOrder { dfs, bfs };

struct VerifyOptions {
  Limits limits;
  SearchOrder order = SearchOrder::dfs;
  /// Frontier expansion threads; used by BFS only.
  unsigned workers = 1;
};

/// A safety property checked on the initial state (with `last == nullptr`)
/// and after every transition.
struct Assertion {
  std::string name;
  std::function<bool(const EngineState& st, const Event* last)> holds;
};

enum class Outcome { ok, deadlock, violation, bound_exceeded };
std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::ok;
  /// Name of the failed assertion for `violation`.
  std::string violated;
  std::vector<Event> counterexample;
  /// Replay of the counterexample, present for deadlock and violation.
  std::optional<Trace> trace;
  std::uint64_t states_visited = 0;
  std::chrono::duration<double, std::milli> elapsed{0};

  /// {outcome, statesVisited, elapsedMs, counterexample: [event...]}, plus
  /// "violated" for violations.
  Value to_json() const;
};

/// Digest identifying a synchronization state: context digest, every live
/// copy's (cbt, state, seed, pending statement), pending notices and queued
/// external events. Independent of rng state and step count.
std::string state_key(const EngineState& st);

/// Program with the env-model CBTs appended after its own.
std::shared_ptr<const Program> with_env(const Program& program, const std::vector<CbtPtr>& env_model);

/// Exhaustive explorer of the synchronization-state graph. Every available
/// choice branches; visited states are pruned by key.
class Verifier {
 public:
  Verifier(std::shared_ptr<const Program> program, ContextStore ctx_init);

  Verdict verify(const std::vector<Assertion>& assertions, const VerifyOptions& options = {}) const;

  /// Number of reachable states. Throws BoundExceeded past the limits.
  std::uint64_t count_states(const Limits& limits = {}) const;

  /// Keys of all reachable states. Throws BoundExceeded past the limits.
  std::set<std::string> reachable_keys(const Limits& limits = {}) const;

  /// Every maximal run as a sequence of `Event::display()` strings. Throws
  /// BoundExceeded on cycles longer than max_depth or too many traces.
  std::set<std::vector<std::string>> enumerate_maximal_traces(const Limits& limits = {}) const;

  const Engine& engine() const noexcept { return engine_; }

 private:
  Verdict dfs(const std::vector<Assertion>& assertions, const Limits& limits, bool stop_on_deadlock,
              std::set<std::string>* keys) const;
  Verdict bfs(const std::vector<Assertion>& assertions, const Limits& limits, unsigned workers) const;
  void finish(Verdict& v) const;

  Engine engine_;
  ContextStore ctx_init_;
};

Verdict verify(const Program& program, const ContextStore& ctx_init, const std::vector<CbtPtr>& env_model,
               const std::vector<Assertion>& assertions, const VerifyOptions& options = {});
std::uint64_t count_states(const Program& program, const ContextStore& ctx_init, const std::vector<CbtPtr>& env_model,
                           const Limits& limits = {});
std::set<std::vector<std::string>> enumerate_maximal_traces(const Program& program, const ContextStore& ctx_init,
                                                            const std::vector<CbtPtr>& env_model = {},
                                                            const Limits& limits = {});

}  // namespace cobp
