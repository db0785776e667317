#pragma once

#include "cobp/events.hpp"
#include "cobp/value.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cobp {

enum class StepStatus { progressed, super_step, quiescent, deadlock };
/// `stopped` marks a replay that ended while choices were still available.
enum class RunStatus { quiescent, deadlock, max_steps, stopped };

std::string to_string(StepStatus s);
std::string to_string(RunStatus s);

struct TraceEntry {
  std::uint64_t step = 0;
  /// "init", "notice", "internal", "external" or "end".
  std::string kind;
  std::optional<Event> event;
  /// Requested events before the transition, sorted.
  std::vector<Event> requested;
  /// Labels of requested events that were blocked, sorted.
  std::vector<std::string> blocked_labels;
  std::vector<std::string> spawned_ids;
  /// "<binding>:<key>" for every result that left its query.
  std::vector<std::string> ended_keys;
  std::string ctx_digest;
  /// Step status, or for the final entry the run status.
  std::string status;
  /// Full context, only when the run was asked for snapshots.
  std::optional<Value> ctx;

  Value to_json() const;
};

struct Trace {
  std::vector<TraceEntry> entries;
  RunStatus status = RunStatus::quiescent;

  /// Selected events in order (notices included).
  std::vector<Event> events() const;
  /// `display()` of every selected event.
  std::vector<std::string> labels() const;
  void write_jsonl(std::ostream& os) const;
};

}  // namespace cobp
