#pragma once

#include "cobp/examples/program.hpp"

#include <string>
#include <vector>

namespace cobp::examples {

/// Room types: "office", "kitchen", "restroom".
struct BuildingRoom {
  std::string id;
  std::string type;
};

struct Worker {
  std::string id;
  std::string name;
};

/// An environment event issued once the simulated clock reaches `at` seconds.
struct ScheduledEvent {
  int at = 0;
  Event event;
};

struct BuildingOptions {
  std::vector<BuildingRoom> rooms;
  std::vector<Worker> workers;
  /// Emergencies, worker movements and anything else the script should play.
  std::vector<ScheduledEvent> script;
  /// Simulated minutes; one clockTick advances `now` by 60 s.
  int minutes = 10;
  /// Motion detections each room's simulated sensor emits.
  int motions = 1;
  int no_movement_seconds = 180;
  /// Turn every light on during an emergency.
  bool emergency_lights = false;
};

ExampleProgram build_smart_building(const BuildingOptions& options);

Event light_on(const std::string& room);
Event light_off(const std::string& room);
Event ac_on(const std::string& room);
Event ac_off(const std::string& room);
Event motion_detected(const std::string& room);
Event room_is_empty(const std::string& room);
Event room_is_nonempty(const std::string& room);
Event clock_tick();
Event emergency_start(const std::string& id);
Event emergency_end(const std::string& id);
Event enter(const std::string& worker, const std::string& room);
Event leave(const std::string& worker);
Event announce(const std::string& name);

bool room_empty(const ContextStore& ctx, const std::string& room);

}  // namespace cobp::examples
