#include "cobp/examples/grid_robot.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>

namespace cobp::examples {

namespace {

constexpr std::array<int, 4> kDr = {-1, 0, 1, 0};
constexpr std::array<int, 4> kDc = {0, 1, 0, -1};

int left_of(int h) { return (h + 3) % 4; }
int right_of(int h) { return (h + 1) % 4; }

const std::string kRobotId = "r1";

Cell payload_cell(const Value& p) { return {p.at(0).get<int>(), p.at(1).get<int>()}; }

Value target_record(Cell c) { return {{"id", cell_key(c)}, {"row", c.first}, {"col", c.second}}; }

Cell seed_target(const QueryResult& seed) {
  return {static_cast<int>(seed_int(seed, "row")), static_cast<int>(seed_int(seed, "col"))};
}

EventSet all_moves() { return EventSet::label("move"); }

EventSet moves_except(const Event& keep) {
  std::vector<Event> others;
  for (const auto& m : {move_forward(), turn_left(), turn_right()}) {
    if (m != keep) others.push_back(m);
  }
  return EventSet::of(std::move(others));
}

RowPredicate field_below(std::string field, int threshold) {
  return [field = std::move(field), threshold](const Record& r, const ContextStore&, const Value&) {
    return r.at(field).get<double>() < threshold;
  };
}

/// Blocks `move` while the seed answers `query`.
CbtDefinition avoid(std::string name, std::string query, Event move) {
  auto q = query;
  return {std::move(name), std::move(query), nullptr, 0,
          sequence({[q, move](const QueryResult& seed, const ContextStore&) {
            return wait_for(EventSet::ended(q, seed.key), EventSet::of(move));
          }})};
}

void check_start(const GridWorld& world, const ContextStore& ctx) {
  if (!ctx.find("robot", kRobotId)) return;
  const Pose p = robot_pose(ctx);
  if (world.wall(p.row, p.col)) {
    throw ConfigError("robot starts in an occupied cell " + cell_key({p.row, p.col}));
  }
}

}  // namespace

bool GridWorld::wall(int row, int col) const {
  if (row < 0 || col < 0 || row >= static_cast<int>(map.size())) return true;
  const auto& line = map[static_cast<std::size_t>(row)];
  return col >= static_cast<int>(line.size()) || line[static_cast<std::size_t>(col)] == '#';
}

int GridWorld::distance(int row, int col, int heading) const {
  int d = 0;
  int r = row + kDr[static_cast<std::size_t>(heading)];
  int c = col + kDc[static_cast<std::size_t>(heading)];
  while (!wall(r, c)) {
    ++d;
    r += kDr[static_cast<std::size_t>(heading)];
    c += kDc[static_cast<std::size_t>(heading)];
  }
  return d;
}

Event move_forward() { return Event("move", Value::array({0.3, 0})); }
Event turn_left() { return Event("move", Value::array({0, -1.5})); }
Event turn_right() { return Event("move", Value::array({0, 1.5})); }
Event scan_event(int ahead, int left, int right) { return Event("scan", Value::array({ahead, left, right})); }
Event new_target(Cell c) { return Event("newTarget", Value::array({c.first, c.second})); }
Event target_reached(Cell c) { return Event("targetReached", Value::array({c.first, c.second})); }

Pose robot_pose(const ContextStore& ctx) {
  const Record* r = ctx.find("robot", kRobotId);
  if (!r) throw ConfigError("no robot record");
  return {r->at("row").get<int>(), r->at("col").get<int>(), r->at("heading").get<int>()};
}

std::optional<std::vector<Event>> calc_path(const GridWorld& world, Pose from, Cell to) {
  using Key = std::array<int, 3>;
  std::map<Key, std::pair<Key, int>> parent;  // state -> (previous, action)
  std::deque<Key> queue;
  const Key start{from.row, from.col, from.heading};
  parent.emplace(start, std::make_pair(start, -1));
  queue.push_back(start);
  const std::array<Event, 3> actions = {move_forward(), turn_left(), turn_right()};
  while (!queue.empty()) {
    const Key k = queue.front();
    queue.pop_front();
    if (k[0] == to.first && k[1] == to.second) {
      std::vector<Event> path;
      for (Key cur = k; cur != start; cur = parent.at(cur).first) {
        path.push_back(actions[static_cast<std::size_t>(parent.at(cur).second)]);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    const auto [r, c, h] = k;
    const std::array<std::pair<int, Key>, 3> next = {{
        {world.distance(r, c, h), Key{r + kDr[static_cast<std::size_t>(h)], c + kDc[static_cast<std::size_t>(h)], h}},
        {world.distance(r, c, left_of(h)), Key{r, c, left_of(h)}},
        {world.distance(r, c, right_of(h)), Key{r, c, right_of(h)}},
    }};
    for (int a = 0; a < 3; ++a) {
      const auto& [free, nk] = next[static_cast<std::size_t>(a)];
      if (free < 1 || parent.contains(nk)) continue;
      parent.emplace(nk, std::make_pair(k, a));
      queue.push_back(nk);
    }
  }
  return std::nullopt;
}

GridWorld walled_world() {
  return {{
      "##########",
      "#........#",
      "#........#",
      "#..#.....#",
      "#........#",
      "#.....#..#",
      "#........#",
      "#..#.....#",
      "#........#",
      "##########",
  }};
}

GridWorld corner_world() {
  return {{
      "######",
      "#....#",
      "####.#",
      "####.#",
      "######",
  }};
}

GridWorld corridor_world() {
  return {{
      "#######",
      "#.....#",
      "#######",
  }};
}

ExampleProgram build_grid_robot(const RobotOptions& options) {
  const GridWorld world = options.world;
  const Pose s = options.start;
  if (world.wall(s.row, s.col)) throw ConfigError("robot starts in an occupied cell " + cell_key({s.row, s.col}));
  if (s.heading < 0 || s.heading > 3) throw ConfigError("heading must be 0..3");
  const bool battery = options.socket.has_value();
  const int full = options.battery;

  auto p = std::make_shared<Program>();
  auto& repo = p->repo;
  repo.add_query("Robot", table_query("robot"));
  repo.add_query("ObstacleAhead", table_query("robot", field_below("oAhead", 1)));
  repo.add_query("ObstacleLeft", table_query("robot", field_below("oLeft", 1)));
  repo.add_query("ObstacleRight", table_query("robot", field_below("oRight", 1)));

  repo.add_update("Move", [battery](ContextStore& ctx, const Value& a) {
    Pose pose = robot_pose(ctx);
    const double linear = a.at("l").get<double>();
    const double angular = a.at("a").get<double>();
    if (linear > 0) {
      pose.row += kDr[static_cast<std::size_t>(pose.heading)];
      pose.col += kDc[static_cast<std::size_t>(pose.heading)];
    } else if (angular < 0) {
      pose.heading = left_of(pose.heading);
    } else if (angular > 0) {
      pose.heading = right_of(pose.heading);
    }
    ctx.set_field("robot", kRobotId, "row", pose.row);
    ctx.set_field("robot", kRobotId, "col", pose.col);
    ctx.set_field("robot", kRobotId, "heading", pose.heading);
    if (battery) {
      const int level = ctx.find("robot", kRobotId)->at("battery").get<int>();
      ctx.set_field("robot", kRobotId, "battery", level - 1);
    }
  });
  repo.add_update("SetObstacles", [](ContextStore& ctx, const Value& a) {
    ctx.set_field("robot", kRobotId, "oAhead", a.at("a"));
    ctx.set_field("robot", kRobotId, "oLeft", a.at("l"));
    ctx.set_field("robot", kRobotId, "oRight", a.at("r"));
  });
  repo.add_effect("move", [](const Event& e) {
    return std::vector<UpdateCall>{{"Move", {{"l", e.payload().at(0)}, {"a", e.payload().at(1)}}}};
  });
  repo.add_effect("scan", [](const Event& e) {
    const auto& d = e.payload();
    return std::vector<UpdateCall>{{"SetObstacles", {{"a", d.at(0)}, {"l", d.at(1)}, {"r", d.at(2)}}}};
  });

  p->add({"Movement", "Robot", nullptr, 0,
          sequence({fixed(request({move_forward(), turn_left(), turn_right()}))}, true)});
  p->add(avoid("Avoid obstacles: ahead", "ObstacleAhead", move_forward()));
  p->add(avoid("Avoid obstacles: left", "ObstacleLeft", turn_left()));
  p->add(avoid("Avoid obstacles: right", "ObstacleRight", turn_right()));

  const bool targets = options.delivery.has_value() || battery;
  if (targets) {
    repo.add_query("Target", table_query("target"));
    repo.add_update("AddTarget", [](ContextStore& ctx, const Value& a) {
      ctx.upsert("target", target_record({a.at("row").get<int>(), a.at("col").get<int>()}));
    });
    repo.add_update("RemoveTarget", [](ContextStore& ctx, const Value& a) {
      ctx.erase("target", cell_key({a.at("row").get<int>(), a.at("col").get<int>()}));
    });
    repo.add_effect("newTarget", [](const Event& e) {
      const Cell c = payload_cell(e.payload());
      return std::vector<UpdateCall>{{"AddTarget", {{"row", c.first}, {"col", c.second}}}};
    });
    const std::optional<Cell> socket = options.socket;
    repo.add_update("Recharge", [full](ContextStore& ctx, const Value&) {
      ctx.set_field("robot", kRobotId, "battery", full);
    });
    repo.add_effect("targetReached", [socket](const Event& e) {
      const Cell c = payload_cell(e.payload());
      std::vector<UpdateCall> calls{{"RemoveTarget", {{"row", c.first}, {"col", c.second}}}};
      if (socket && *socket == c) calls.push_back({"Recharge", nullptr});
      return calls;
    });

    // State 0 steers towards the target; state 1 has announced arrival.
    p->add({"GoToTarget", "Target", nullptr, 0,
            [world](StateId st, const QueryResult& seed, const ContextStore& ctx, const Event* last) {
              if (last && st == 1) return StepOutcome::done();
              const Cell t = seed_target(seed);
              const auto path = calc_path(world, robot_pose(ctx), t);
              if (!path) return StepOutcome::sync(wait_for(EventSet::none(), all_moves()), 0);
              if (path->empty()) return StepOutcome::sync(request({target_reached(t)}, all_moves()), 1);
              const Event next = path->front();
              return StepOutcome::sync(wait_for(EventSet::of(next), moves_except(next)), 0);
            }});
  }

  if (options.delivery) {
    repo.add_query("Delivery", table_query("delivery"));
    p->add({"Deliver", "Delivery", nullptr, 0,
            sequence({
                [](const QueryResult& d, const ContextStore&) {
                  return request({new_target(payload_cell(d.value.at("source")))});
                },
                [](const QueryResult& d, const ContextStore&) {
                  return wait_for(EventSet::ended("Target", cell_key(payload_cell(d.value.at("source")))));
                },
                [](const QueryResult& d, const ContextStore&) {
                  return request({new_target(payload_cell(d.value.at("target")))});
                },
                [](const QueryResult& d, const ContextStore&) {
                  return wait_for(EventSet::ended("Target", cell_key(payload_cell(d.value.at("target")))));
                },
            })});
  }

  if (battery) {
    const Cell socket = *options.socket;
    repo.add_query("LowBattery", table_query("robot", field_below("battery", options.low_battery)));
    p->add({"GoToPowerSocket", "LowBattery", nullptr, 0,
            sequence({[socket](const QueryResult&, const ContextStore&) { return request({new_target(socket)}); }})});
  }

  // Environment: the range sensor reports after every move, holding further
  // moves until the scan is in.
  auto sensor = std::make_shared<const CbtDefinition>(CbtDefinition{
      "Sensor", "Robot", nullptr, 0,
      [world](StateId st, const QueryResult&, const ContextStore& ctx, const Event* last) {
        const StateId next = last ? 1 - st : st;
        if (next == 1) return StepOutcome::sync(wait_for(all_moves()), 1);
        const Pose pose = robot_pose(ctx);
        const Event scan = scan_event(world.distance(pose.row, pose.col, pose.heading),
                                      world.distance(pose.row, pose.col, left_of(pose.heading)),
                                      world.distance(pose.row, pose.col, right_of(pose.heading)));
        return StepOutcome::sync(request({scan}, all_moves()), 0);
      }});

  Value robot = {{"id", kRobotId},
                 {"row", s.row},
                 {"col", s.col},
                 {"heading", s.heading},
                 {"oAhead", world.distance(s.row, s.col, s.heading)},
                 {"oLeft", world.distance(s.row, s.col, left_of(s.heading))},
                 {"oRight", world.distance(s.row, s.col, right_of(s.heading))},
                 {"battery", full}};
  Value doc = {{"robot", {{"keyField", "id"}, {"rows", Value::array({robot})}}}};
  if (targets) doc["target"] = {{"keyField", "id"}, {"rows", Value::array()}};
  if (options.delivery) {
    const auto& [src, dst] = *options.delivery;
    doc["delivery"] = {{"keyField", "id"},
                       {"rows", Value::array({{{"id", "d1"},
                                               {"source", Value::array({src.first, src.second})},
                                               {"target", Value::array({dst.first, dst.second})}}})}};
  }

  ExampleProgram ex;
  ex.name = "robot";
  ex.description = "grid robot wandering without hitting walls";
  ex.program = std::move(p);
  ex.env_model.push_back(std::move(sensor));
  ex.ctx_init = register_tables_from_init(doc);
  ex.parse_ctx = [world](const Value& d) {
    ContextStore ctx = register_tables_from_init(d);
    check_start(world, ctx);
    return ctx;
  };
  ex.priority_ranks = {{"scan", 0}, {"targetReached", 1}, {"newTarget", 2}, {"move", 3}};
  ex.assertions.push_back({"robot-not-in-wall", [world](const EngineState& st, const Event*) {
                             const Pose pose = robot_pose(st.ctx);
                             return !world.wall(pose.row, pose.col);
                           }});
  return ex;
}

}  // namespace cobp::examples
