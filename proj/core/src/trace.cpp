#include "cobp/trace.hpp"

#include <ostream>

namespace cobp {

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::progressed: return "progressed";
    case StepStatus::super_step: return "superStep";
    case StepStatus::quiescent: return "quiescent";
    case StepStatus::deadlock: return "deadlock";
  }
  return "unknown";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::quiescent: return "quiescent";
    case RunStatus::deadlock: return "deadlock";
    case RunStatus::max_steps: return "maxSteps";
    case RunStatus::stopped: return "stopped";
  }
  return "unknown";
}

Value TraceEntry::to_json() const {
  Value req = Value::array();
  for (const auto& e : requested) req.push_back(e);
  Value j = {
      {"step", step},
      {"kind", kind},
      {"selectedEvent", event ? Value(*event) : Value()},
      {"requested", std::move(req)},
      {"blockedLabels", blocked_labels},
      {"spawnedIds", spawned_ids},
      {"endedKeys", ended_keys},
      {"ctxDigest", ctx_digest},
      {"status", status},
  };
  if (ctx) j["ctx"] = *ctx;
  return j;
}

std::vector<Event> Trace::events() const {
  std::vector<Event> out;
  for (const auto& e : entries) {
    if (e.event) out.push_back(*e.event);
  }
  return out;
}

std::vector<std::string> Trace::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.event) out.push_back(e.event->display());
  }
  return out;
}

void Trace::write_jsonl(std::ostream& os) const {
  for (const auto& e : entries) os << e.to_json().dump() << '\n';
}

}  // namespace cobp
