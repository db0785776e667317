#pragma once

#include "cobp/behavior.hpp"
#include "cobp/context.hpp"
#include "cobp/events.hpp"
#include "cobp/trace.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cobp {

/// Arbitration randomness. A small standard engine keeps state copies cheap
/// for the verifier.
using Rng = std::minstd_rand;

/// CBTs plus the repository and payload predicates they rely on. All CBTs are
/// registered before a run starts.
struct Program {
  std::vector<CbtPtr> cbts;
  Repository repo;
  PredicateRegistry predicates;

  void add(CbtDefinition cbt) { cbts.push_back(std::make_shared<const CbtDefinition>(std::move(cbt))); }
  /// Distinct bindings in CBT registration order.
  std::vector<QueryBinding> bindings() const;
};

class Arbiter {
 public:
  enum class Kind { seeded_random, first_lexicographic, priority };

  static Arbiter seeded_random() { return Arbiter(Kind::seeded_random, {}); }
  static Arbiter first_lexicographic() { return Arbiter(Kind::first_lexicographic, {}); }
  /// Lower rank wins; unranked labels come last; ties break lexicographically.
  static Arbiter priority(std::map<std::string, int> label_ranks) {
    return Arbiter(Kind::priority, std::move(label_ranks));
  }

  Kind kind() const noexcept { return kind_; }
  /// Index into the sorted, non-empty `options`.
  std::size_t pick(const std::vector<Event>& options, Rng& rng) const;

 private:
  Arbiter(Kind k, std::map<std::string, int> ranks) : kind_(k), ranks_(std::move(ranks)) {}
  Kind kind_;
  std::map<std::string, int> ranks_;
};

struct EngineState {
  ContextStore ctx;
  std::map<std::string, LiveCopy> copies;  // by id
  std::deque<Event> external_queue;
  std::deque<Event> pending_notices;
  std::uint64_t step_count = 0;
  Rng rng;
  /// Last results per binding id.
  std::map<std::string, std::vector<QueryResult>> results;
  /// Ids spawned by initialization, for the trace header.
  std::vector<std::string> init_spawned;
};

struct Choice {
  enum class Kind { notice, internal, external };
  Kind kind;
  Event event;
};

/// What may happen next. `options` is empty for quiescent and deadlock states;
/// internal options are every selectable event in sorted order.
struct Choices {
  StepStatus status;
  std::vector<Choice> options;
};

struct Transition {
  Event event;
  Choice::Kind kind;
  std::vector<std::string> spawned_ids;
  std::vector<std::string> ended_keys;
};

struct StepResult {
  std::optional<Event> event;
  StepStatus status;
  TraceEntry entry;
};

/// Thread-safe mailbox for events produced outside the engine thread. The run
/// loop drains it into the external queue before every step.
class ExternalInbox {
 public:
  void post(Event e);
  std::vector<Event> drain();

 private:
  std::mutex mu_;
  std::vector<Event> events_;
};

class Engine {
 public:
  explicit Engine(std::shared_ptr<const Program> program, Arbiter arbiter = Arbiter::seeded_random());

  const Program& program() const noexcept { return *program_; }
  const Arbiter& arbiter() const noexcept { return arbiter_; }

  /// Spawns a copy per initial query result and starts each of them.
  EngineState initialize(const ContextStore& ctx_init, std::uint64_t seed = 0) const;

  /// Pending statements in live-copy id order.
  std::vector<SyncStatement> statements(const EngineState& st) const;
  Choices choices(const EngineState& st) const;
  /// Performs one transition. The choice must come from `choices(st)`.
  Transition fire(EngineState& st, const Choice& choice) const;

  StepResult step_in_place(EngineState& st) const;
  /// Functional form: `st` is left untouched.
  std::pair<StepResult, EngineState> step(const EngineState& st) const;

  /// Steps until quiescence, deadlock or `max_steps` transitions. The trace
  /// starts with an "init" entry when `st` is fresh and ends with an "end" entry.
  Trace run(EngineState& st, std::uint64_t max_steps, ExternalInbox* inbox = nullptr,
            bool snapshots = false) const;

  /// Re-executes `events` from `st`, choosing each one in turn. Throws
  /// EngineError if an event is not among the available choices.
  Trace replay(EngineState& st, const std::vector<Event>& events) const;

  /// Queues a program-namespace event for the next super-step.
  static void enqueue_external(EngineState& st, Event e);

 private:
  TraceEntry make_entry(const EngineState& before, const std::vector<SyncStatement>& stmts) const;
  TraceEntry fire_entry(EngineState& st, const Choice& choice, StepStatus status) const;
  TraceEntry init_entry(const EngineState& st) const;
  TraceEntry end_entry(const EngineState& st, RunStatus status) const;

  std::shared_ptr<const Program> program_;
  Arbiter arbiter_;
  std::vector<QueryBinding> bindings_;
};

}  // namespace cobp
