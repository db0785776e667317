#include "cobp/examples/registry.hpp"

#include "cobp/examples/game_of_life.hpp"
#include "cobp/examples/grid_robot.hpp"
#include "cobp/examples/hot_cold.hpp"
#include "cobp/examples/smart_building.hpp"

#include <map>

namespace cobp::examples {

namespace {

ExampleProgram renamed(ExampleProgram ex, std::string name, Outcome expected, std::string description = {}) {
  ex.name = std::move(name);
  ex.expected = expected;
  if (!description.empty()) ex.description = std::move(description);
  return ex;
}

std::vector<Cell> blinker() { return {{5, 4}, {5, 5}, {5, 6}}; }

std::vector<Cell> dance_seed() { return {{0, 1}, {2, 0}, {2, 2}, {5, 0}, {5, 1}, {6, 0}, {6, 1}}; }

std::vector<Cell> dancers_in_a_row() { return {{5, 4}, {5, 5}, {5, 6}}; }

RobotOptions robot_in(GridWorld world) {
  RobotOptions o;
  o.world = std::move(world);
  o.start = {1, 1, 1};
  return o;
}

BuildingOptions building(std::vector<BuildingRoom> rooms) {
  BuildingOptions o;
  o.rooms = std::move(rooms);
  return o;
}

std::vector<RegistryEntry> make_registry() {
  std::vector<RegistryEntry> r;
  auto add = [&r](std::string name, std::function<ExampleProgram()> build) {
    ExampleProgram probe = build();
    r.push_back({std::move(name), probe.description, std::move(build)});
  };
  add("hot-cold", [] { return build_hot_cold(false); });
  add("hot-cold-interleave", [] { return build_hot_cold(true); });
  add("ext-hot-cold", [] { return build_ext_hot_cold({{1, "kitchen"}, {2, "bathroom"}, {3, "bedroom"}}); });
  add("gol", [] { return renamed(build_game_of_life(blinker()), "gol", Outcome::ok, "Game of Life blinker, two generations"); });
  add("gol-lonely", [] { return renamed(build_game_of_life({{5, 5}, {10, 10}}, {.generations = 1}), "gol-lonely", Outcome::ok,
                                         "two isolated cells dying in the first generation"); });
  add("gol-dance", [] {
    return renamed(build_game_of_life(dance_seed(), {.generations = 2, .evolved = true}), "gol-dance", Outcome::ok,
                   "Game of Life with the mating-dance rule, two generations");
  });
  add("gol-dance-buggy", [] {
    auto ex = build_game_of_life(dancers_in_a_row(), {.generations = 1, .evolved = true, .lonely_check = false});
    ex.description = "mating dance without the loneliness check; dancers get duplicated";
    return ex;
  });
  add("gol-dance-row", [] {
    return renamed(build_game_of_life(dancers_in_a_row(), {.generations = 1, .evolved = true}), "gol-dance-row",
                   Outcome::ok, "mating dance with the loneliness check on three dancers in a row");
  });
  add("robot", [] { return build_grid_robot(robot_in(walled_world())); });
  add("robot-corner", [] {
    auto ex = build_grid_robot(robot_in(corner_world()));
    ex.description = "grid robot driving into a dead end";
    return renamed(std::move(ex), "robot-corner", Outcome::deadlock);
  });
  add("robot-delivery", [] {
    RobotOptions o = robot_in(corridor_world());
    o.delivery = std::make_pair(Cell{1, 3}, Cell{1, 5});
    auto ex = build_grid_robot(o);
    ex.description = "grid robot carrying a package along a corridor";
    return renamed(std::move(ex), "robot-delivery", Outcome::deadlock);
  });
  add("robot-battery", [] {
    RobotOptions o = robot_in(walled_world());
    o.socket = Cell{8, 8};
    o.battery = 20;
    auto ex = build_grid_robot(o);
    ex.description = "grid robot returning to its power socket when the battery runs low";
    return renamed(std::move(ex), "robot-battery", Outcome::bound_exceeded);
  });
  add("smart-building-1room", [] {
    auto ex = build_smart_building(building({{"r1", "office"}}));
    ex.description = "one office, one motion, ten simulated minutes";
    return renamed(std::move(ex), "smart-building-1room", Outcome::ok);
  });
  add("smart-building-2rooms", [] {
    auto ex = build_smart_building(building({{"r1", "office"}, {"r2", "kitchen"}}));
    ex.description = "an office and a kitchen, one motion each, ten simulated minutes";
    return renamed(std::move(ex), "smart-building-2rooms", Outcome::ok);
  });
  add("smart-building", [] {
    BuildingOptions o = building({{"r1", "office"}, {"r2", "restroom"}});
    o.workers = {{"w1", "Dana"}};
    o.script = {{60, enter("w1", "r1")}, {120, emergency_start("e1")}, {420, emergency_end("e1")}, {480, leave("w1")}};
    o.emergency_lights = true;
    return build_smart_building(o);
  });
  return r;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {{"hotcold", "hot-cold"},
                                                       {"hotcold-interleave", "hot-cold-interleave"},
                                                       {"life", "gol"}};
  return a;
}

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> r = make_registry();
  return r;
}

ExampleProgram make_example(const std::string& name) {
  const auto alias = aliases().find(name);
  const std::string& canonical = alias == aliases().end() ? name : alias->second;
  for (const auto& e : registry()) {
    if (e.name == canonical) return e.build();
  }
  throw ConfigError("unknown example '" + name + "'");
}

std::vector<std::string> example_names() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

}  // namespace cobp::examples
