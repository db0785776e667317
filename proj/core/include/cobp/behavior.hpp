#pragma once

#include "cobp/context.hpp"
#include "cobp/events.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cobp {

using StateId = std::int64_t;

/// Result of one step function call: pause on a statement in `next`, or finish.
struct StepOutcome {
  std::optional<SyncStatement> statement;  // empty means Done
  StateId next = 0;

  static StepOutcome sync(SyncStatement s, StateId next_state) { return {std::move(s), next_state}; }
  static StepOutcome done() { return {}; }
  bool is_done() const noexcept { return !statement.has_value(); }
};

/// Called once at spawn with `last == nullptr` and `state == init_state`, and
/// afterwards with the state returned previously and the event that resumed
/// the copy. `ctx` is always the post-effect snapshot.
using StepFn = std::function<StepOutcome(StateId state, const QueryResult& seed, const ContextStore& ctx,
                                         const Event* last)>;

struct CbtDefinition {
  std::string name;
  std::string query;
  Value params;
  StateId init_state = 0;
  StepFn step;
  /// Finish as soon as the seed leaves the query.
  bool interruptible = false;

  QueryBinding binding() const { return {query, params}; }
};

using CbtPtr = std::shared_ptr<const CbtDefinition>;

struct LiveCopy {
  std::string id;  // cbt name + "#" + seed key
  CbtPtr cbt;
  StateId state = 0;
  QueryResult seed;
  std::optional<SyncStatement> pending;
  /// Serialized seed value, filled in at spawn.
  std::string seed_text;
};

std::string live_copy_id(const CbtDefinition& cbt, const QueryResult& seed);

/// One copy per (cbt, added result of the cbt's binding), ordered by cbt
/// registration order, then result key. Copies are not yet started.
std::vector<LiveCopy> spawn_live_copies(const std::vector<CbtPtr>& cbts, const QueryDiff& diff);

/// Runs the first step. Returns nullopt when the copy finishes immediately.
std::optional<LiveCopy> start(LiveCopy copy, const ContextStore& ctx);

/// True iff `copy` resumes on `e` (including the implicit end-of-seed notice
/// of interruptible CBTs).
bool resumes_on(const LiveCopy& copy, const Event& e, const PredicateRegistry& preds = PredicateRegistry::builtin());

/// Resumes `copy` on `e` if it waits for it, else returns it unchanged.
/// Returns nullopt when the copy finishes.
std::optional<LiveCopy> advance(const LiveCopy& copy, const Event& e, const ContextStore& ctx_after,
                                const PredicateRegistry& preds = PredicateRegistry::builtin());

/// Pending statements of paused copies, in the given (id) order.
std::vector<SyncStatement> collect_statements(const std::vector<LiveCopy>& copies);

// Helpers for writing step functions -----------------------------------------

using StatementFn = std::function<SyncStatement(const QueryResult& seed, const ContextStore& ctx)>;

/// Straight-line body: state i pauses on steps[i]; resuming moves to i + 1.
/// After the last statement the copy finishes, or wraps to 0 when `loop`.
StepFn sequence(std::vector<StatementFn> steps, bool loop = false);

/// Statement that does not depend on seed or context.
StatementFn fixed(SyncStatement s);

}  // namespace cobp
