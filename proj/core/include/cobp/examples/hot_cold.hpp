#pragma once

#include "cobp/examples/program.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cobp::examples {

/// Two CBTs pouring Cold and Hot three times each, bound to a constant query,
/// plus an optional Interleave CBT. `cold_first` selects Interleave's initial
/// state (the one blocking Hot).
ExampleProgram build_hot_cold(bool with_interleave, bool cold_first = true);

/// Interleave body: state 0 blocks `b` until `a`, state 1 blocks `a` until `b`.
StepFn alternation(Event a, Event b);

struct Room {
  int id;
  std::string type;
};

/// Cold/Hot CBTs bound to RoomWithTaps (kitchens and bathrooms) and an
/// Interleave CBT bound to Kitchen; each room with taps pours only after its
/// Push event. The env model pushes every tap room once.
ExampleProgram build_ext_hot_cold(const std::vector<Room>& rooms);

Event push_event(int room);
Event cold_event(int room);
Event hot_event(int room);

}  // namespace cobp::examples
