#pragma once

#include "cobp/examples/game_of_life.hpp"
#include "cobp/examples/program.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cobp::examples {

/// Heading: 0 = north (row - 1), 1 = east, 2 = south, 3 = west.
struct Pose {
  int row = 0;
  int col = 0;
  int heading = 0;
  bool operator==(const Pose&) const = default;
};

/// Occupancy grid; '#' is a wall, anything else is free. Cells outside the
/// grid count as walls.
struct GridWorld {
  std::vector<std::string> map;

  bool wall(int row, int col) const;
  /// Free cells between (row, col) and the first wall in direction `heading`.
  int distance(int row, int col, int heading) const;
};

struct RobotOptions {
  GridWorld world;
  Pose start;
  /// Package to deliver: (source, destination).
  std::optional<std::pair<Cell, Cell>> delivery;
  /// Power socket; enables battery drain and the recharge behaviour.
  std::optional<Cell> socket;
  int battery = 100;
  int low_battery = 5;
};

ExampleProgram build_grid_robot(const RobotOptions& options);

Event move_forward();
Event turn_left();
Event turn_right();
Event scan_event(int ahead, int left, int right);
Event new_target(Cell c);
Event target_reached(Cell c);

Pose robot_pose(const ContextStore& ctx);

/// Shortest action sequence (forward/left/right events) from `from` to any
/// heading at `to`, avoiding the moves the obstacle rules would block.
/// Ties are broken by the order forward, left, right. nullopt if unreachable.
std::optional<std::vector<Event>> calc_path(const GridWorld& world, Pose from, Cell to);

/// 10x10 world with border walls and a few interior blocks, no dead ends.
GridWorld walled_world();
/// Corridor ending in a dead end: any run ends in deadlock.
GridWorld corner_world();
/// 1-wide corridor for the delivery scenario.
GridWorld corridor_world();

}  // namespace cobp::examples
