#pragma once

// Trace-level checks shared by the example tests and the acceptance runner.

#include "cobp/engine.hpp"
#include "cobp/examples/game_of_life.hpp"
#include "cobp/examples/program.hpp"

#include <set>
#include <string>
#include <vector>

namespace testing_support {

using Labels = std::vector<std::string>;

/// Live copies created at each tick (plus the clock itself), by id.
inline std::vector<std::set<std::string>> lc_sets(const cobp::examples::ExampleProgram& ex) {
  const cobp::Engine engine(ex.runnable(), cobp::Arbiter::first_lexicographic());
  cobp::EngineState st = engine.initialize(ex.ctx_init);
  const cobp::Trace t = engine.run(st, 100'000);
  std::vector<std::set<std::string>> out;
  for (const auto& e : t.entries) {
    if (!e.event || e.event->label() != "tick") continue;
    std::set<std::string> ids(e.spawned_ids.begin(), e.spawned_ids.end());
    ids.insert("CBT_tick#1");
    out.push_back(std::move(ids));
  }
  return out;
}

/// Population at the start of every generation, then the final one.
inline std::vector<std::set<cobp::examples::Cell>> generations(const cobp::examples::ExampleProgram& ex,
                                                              std::uint64_t seed = 0) {
  const cobp::Engine engine(ex.runnable());
  cobp::EngineState st = engine.initialize(ex.ctx_init, seed);
  std::vector<std::set<cobp::examples::Cell>> out;
  for (;;) {
    const auto r = engine.step_in_place(st);
    if (!r.event) break;
    if (r.event->label() == "tick") out.push_back(cobp::examples::population(st.ctx));
  }
  out.push_back(cobp::examples::population(st.ctx));
  return out;
}

/// Along the trace, light switching agrees with the room occupancy flags
/// (the room starts empty): on(light) only while nonempty, off(light) only
/// while empty.
inline bool light_follows_occupancy(const Labels& trace, const std::string& room) {
  bool empty = true;
  for (const auto& l : trace) {
    if (l == "roomIsNonempty(" + room + ")") empty = false;
    if (l == "roomIsEmpty(" + room + ")") empty = true;
    if (l == "on(" + room + ",light)" && empty) return false;
    if (l == "off(" + room + ",light)" && !empty) return false;
  }
  return true;
}

/// No light is switched off between an emergency's start and its end.
inline bool no_off_during_emergency(const Labels& trace) {
  int active = 0;
  for (const auto& l : trace) {
    if (l.rfind("emergencyStart(", 0) == 0) ++active;
    if (l.rfind("emergencyEnd(", 0) == 0) --active;
    if (active > 0 && l.rfind("off(", 0) == 0 && l.find(",light)") != std::string::npos) return false;
  }
  return true;
}

/// Cold/Hot events of `room`, in order.
inline Labels pours(const Labels& trace, int room) {
  const std::string suffix = "(" + std::to_string(room) + ")";
  Labels out;
  for (const auto& l : trace) {
    if (l == "Cold" + suffix || l == "Hot" + suffix) out.push_back(l.substr(0, l.find('(')));
  }
  return out;
}

inline bool alternating_from_cold(const Labels& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] != (i % 2 == 0 ? "Cold" : "Hot")) return false;
  }
  return true;
}

inline bool is_prefix(const Labels& prefix, const Labels& trace) {
  return prefix.size() <= trace.size() && std::equal(prefix.begin(), prefix.end(), trace.begin());
}

inline std::ptrdiff_t index_of(const Labels& trace, const std::string& label) {
  const auto it = std::find(trace.begin(), trace.end(), label);
  return it == trace.end() ? -1 : it - trace.begin();
}

inline std::ptrdiff_t last_index_of(const Labels& trace, const std::string& label) {
  const auto it = std::find(trace.rbegin(), trace.rend(), label);
  return it == trace.rend() ? -1 : trace.rend() - it - 1;
}

}  // namespace testing_support
