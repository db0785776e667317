#include "cobp/examples/smart_building.hpp"

#include <algorithm>
#include <set>

namespace cobp::examples {

namespace {

constexpr int kTickSeconds = 60;

Event device(const char* label, const std::string& room, const char* what) {
  return Event(label, Value::array({room, what}));
}

std::string seed_id(const QueryResult& seed) { return seed.value.at("id").get<std::string>(); }

int now(const ContextStore& ctx) { return ctx.find("clock", "clock")->at("now").get<int>(); }

RowPredicate empty_is(int flag, const char* type = nullptr) {
  return [flag, type](const Record& r, const ContextStore&, const Value&) {
    return r.at("isEmpty").get<int>() == flag && (!type || r.at("type").get<std::string>() == type);
  };
}

void check_rooms(const ContextStore& ctx) {
  static const std::set<std::string> kTypes = {"office", "kitchen", "restroom"};
  for (const auto& [key, row] : ctx.rows("room")) {
    const auto type = row.value("type", std::string());
    if (!kTypes.contains(type)) throw ConfigError("room " + key + " has unknown type '" + type + "'");
  }
}

/// A CBT that requests one event derived from its seed and finishes.
CbtDefinition once(std::string name, std::string query, Event (*make)(const std::string&), bool interruptible,
                   Value params = nullptr) {
  CbtDefinition d{std::move(name), std::move(query), std::move(params), 0,
                  sequence({[make](const QueryResult& seed, const ContextStore&) {
                    return request({make(seed_id(seed))});
                  }})};
  d.interruptible = interruptible;
  return d;
}

}  // namespace

Event light_on(const std::string& room) { return device("on", room, "light"); }
Event light_off(const std::string& room) { return device("off", room, "light"); }
Event ac_on(const std::string& room) { return device("on", room, "ac"); }
Event ac_off(const std::string& room) { return device("off", room, "ac"); }
Event motion_detected(const std::string& room) { return Event("motionDetected", room); }
Event room_is_empty(const std::string& room) { return Event("roomIsEmpty", room); }
Event room_is_nonempty(const std::string& room) { return Event("roomIsNonempty", room); }
Event clock_tick() { return Event("clockTick"); }
Event emergency_start(const std::string& id) { return Event("emergencyStart", id); }
Event emergency_end(const std::string& id) { return Event("emergencyEnd", id); }
Event enter(const std::string& worker, const std::string& room) {
  return Event("enter", Value::array({worker, room}));
}
Event leave(const std::string& worker) { return Event("leave", worker); }
Event announce(const std::string& name) { return Event("announce", name); }

bool room_empty(const ContextStore& ctx, const std::string& room) {
  const Record* r = ctx.find("room", room);
  if (!r) throw ConfigError("no room " + room);
  return r->at("isEmpty").get<int>() == 1;
}

ExampleProgram build_smart_building(const BuildingOptions& options) {
  if (options.minutes < 0 || options.motions < 0) throw ConfigError("minutes and motions must be non-negative");

  Value rooms = Value::array();
  for (const auto& r : options.rooms) {
    rooms.push_back({{"id", r.id}, {"type", r.type}, {"isEmpty", 1}, {"lastMovement", 0}});
  }
  Value workers = Value::array();
  for (const auto& w : options.workers) workers.push_back({{"id", w.id}, {"name", w.name}, {"room", nullptr}});
  const Value doc = {
      {"room", {{"keyField", "id"}, {"rows", rooms}}},
      {"emergency", {{"keyField", "id"}, {"rows", Value::array()}}},
      {"worker", {{"keyField", "id"}, {"rows", workers}}},
      {"clock", {{"keyField", "id"}, {"rows", Value::array({{{"id", "clock"}, {"now", 0}}})}}},
  };
  ContextStore ctx = register_tables_from_init(doc);
  check_rooms(ctx);

  auto p = std::make_shared<Program>();
  auto& repo = p->repo;
  repo.add_query("One", constant_query());
  repo.add_query("Room", table_query("room"));
  repo.add_query("Office", table_query("room", [](const Record& r, const ContextStore&, const Value&) {
                   return r.at("type").get<std::string>() == "office";
                 }));
  repo.add_query("Emergency", table_query("emergency"));
  repo.add_query("EmptyRoom", table_query("room", empty_is(1)));
  repo.add_query("NonemptyRoom", table_query("room", empty_is(0)));
  repo.add_query("EmptyOffice", table_query("room", empty_is(1, "office")));
  repo.add_query("NonemptyOffice", table_query("room", empty_is(0, "office")));
  repo.add_query("NoMovement", table_query("room", [](const Record& r, const ContextStore& c, const Value& params) {
                   return now(c) - r.at("lastMovement").get<int>() > params.at("seconds").get<int>();
                 }));
  repo.add_query("EmergencyInRoom", [](const ContextStore& c, const Value&) {
    std::vector<QueryResult> out;
    for (const auto& [rid, room] : c.rows("room")) {
      for (const auto& [eid, e] : c.rows("emergency")) {
        out.push_back({rid + "|" + eid, {{"id", rid}, {"room", rid}, {"emergency", eid}}});
      }
    }
    return out;
  });
  repo.add_query("WorkerInARoom", table_query("worker", [](const Record& r, const ContextStore&, const Value&) {
                   return !r.at("room").is_null();
                 }));

  auto set_empty = [](int flag) {
    return [flag](ContextStore& c, const Value& a) {
      c.set_field("room", a.at("rId").get<std::string>(), "isEmpty", flag);
    };
  };
  repo.add_update("RoomIsNonempty", set_empty(0));
  repo.add_update("RoomIsEmpty", set_empty(1));
  repo.add_update("UpdateMovement", [](ContextStore& c, const Value& a) {
    c.set_field("room", a.at("rId").get<std::string>(), "lastMovement", now(c));
  });
  repo.add_update("AdvanceClock", [](ContextStore& c, const Value& a) {
    c.set_field("clock", "clock", "now", now(c) + a.at("seconds").get<int>());
  });
  repo.add_update("StartEmergency", [](ContextStore& c, const Value& a) { c.upsert("emergency", {{"id", a.at("id")}}); });
  repo.add_update("EndEmergency", [](ContextStore& c, const Value& a) {
    c.erase("emergency", a.at("id").get<std::string>());
  });
  repo.add_update("WorkerEnter", [](ContextStore& c, const Value& a) {
    c.set_field("worker", a.at("wId").get<std::string>(), "room", a.at("rId"));
  });
  repo.add_update("WorkerLeave", [](ContextStore& c, const Value& a) {
    c.set_field("worker", a.at("wId").get<std::string>(), "room", nullptr);
  });

  auto room_cmd = [](const char* cmd) {
    return [cmd](const Event& e) { return std::vector<UpdateCall>{{cmd, {{"rId", e.payload()}}}}; };
  };
  repo.add_effect("motionDetected", room_cmd("UpdateMovement"));
  repo.add_effect("roomIsEmpty", room_cmd("RoomIsEmpty"));
  repo.add_effect("roomIsNonempty", room_cmd("RoomIsNonempty"));
  repo.add_effect("clockTick", [](const Event&) {
    return std::vector<UpdateCall>{{"AdvanceClock", {{"seconds", kTickSeconds}}}};
  });
  repo.add_effect("emergencyStart",
                  [](const Event& e) { return std::vector<UpdateCall>{{"StartEmergency", {{"id", e.payload()}}}}; });
  repo.add_effect("emergencyEnd",
                  [](const Event& e) { return std::vector<UpdateCall>{{"EndEmergency", {{"id", e.payload()}}}}; });
  repo.add_effect("enter", [](const Event& e) {
    return std::vector<UpdateCall>{{"WorkerEnter", {{"wId", e.payload().at(0)}, {"rId", e.payload().at(1)}}}};
  });
  repo.add_effect("leave",
                  [](const Event& e) { return std::vector<UpdateCall>{{"WorkerLeave", {{"wId", e.payload()}}}}; });

  // Switching copies drop out when their room flips occupancy before the
  // switch happens.
  p->add(once("Light: On", "NonemptyRoom", light_on, true));
  p->add(once("Light: Off", "EmptyRoom", light_off, true));
  p->add(once("Air-conditioner: On", "NonemptyOffice", ac_on, true));
  p->add(once("Air-conditioner: Off", "EmptyOffice", ac_off, true));

  p->add({"Emergency: Lights", "EmergencyInRoom", nullptr, 0,
          sequence({[](const QueryResult& seed, const ContextStore&) {
            return wait_for(EventSet::ended("EmergencyInRoom", seed.key),
                            EventSet::of(light_off(seed.value.at("room").get<std::string>())));
          }})});
  if (options.emergency_lights) {
    p->add(once("Emergency: All lights on", "EmergencyInRoom", light_on, true));
  }

  p->add({"Mark room as nonempty", "EmptyRoom", nullptr, 0,
          sequence({[](const QueryResult& seed, const ContextStore&) {
                      return wait_for(EventSet::of(motion_detected(seed_id(seed))));
                    },
                    [](const QueryResult& seed, const ContextStore&) {
                      return request({room_is_nonempty(seed_id(seed))});
                    }})});
  p->add({"Mark room as empty", "NoMovement", Value{{"seconds", options.no_movement_seconds}}, 0,
          sequence({[](const QueryResult& seed, const ContextStore&) {
            const auto id = seed_id(seed);
            return SyncStatement({room_is_empty(id)}, EventSet::of(motion_detected(id)), EventSet::none());
          }})});
  p->add({"AnnounceWorkerName", "WorkerInARoom", nullptr, 0,
          sequence({[](const QueryResult& seed, const ContextStore&) {
            return request({announce(seed.value.at("name").get<std::string>())});
          }})});

  ExampleProgram ex;
  ex.name = "smart-building";
  ex.description = "lights and air-conditioning following room occupancy, with emergencies and workers";
  ex.program = std::move(p);

  // Environment: the clock, one motion sensor per room and the scripted events.
  std::vector<StatementFn> ticks(static_cast<std::size_t>(options.minutes), fixed(request({clock_tick()})));
  ex.env_model.push_back(std::make_shared<const CbtDefinition>(CbtDefinition{"Clock", "One", nullptr, 0, sequence(ticks)}));
  std::vector<StatementFn> motions(static_cast<std::size_t>(options.motions),
                                   [](const QueryResult& seed, const ContextStore&) {
                                     return request({motion_detected(seed_id(seed))});
                                   });
  ex.env_model.push_back(
      std::make_shared<const CbtDefinition>(CbtDefinition{"MotionSensor", "Room", nullptr, 0, sequence(motions)}));
  if (!options.script.empty()) {
    auto script = options.script;
    std::stable_sort(script.begin(), script.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
    // State 2*i waits for the clock to reach entry i; 2*i + 1 is issuing it
    // and holds the clock meanwhile.
    ex.env_model.push_back(std::make_shared<const CbtDefinition>(CbtDefinition{
        "Script", "One", nullptr, 0,
        [script](StateId st, const QueryResult&, const ContextStore& c, const Event* last) {
          auto i = static_cast<std::size_t>(st / 2);
          if (last && st % 2 == 1) ++i;
          if (i >= script.size()) return StepOutcome::done();
          const auto s = static_cast<StateId>(2 * i);
          if (now(c) >= script[i].at) return StepOutcome::sync(request({script[i].event}, EventSet::of(clock_tick())), s + 1);
          return StepOutcome::sync(wait_for(EventSet::of(clock_tick())), s);
        }}));
  }

  ex.ctx_init = std::move(ctx);
  ex.parse_ctx = [](const Value& d) {
    ContextStore c = register_tables_from_init(d);
    check_rooms(c);
    return c;
  };
  ex.priority_ranks = {{"roomIsNonempty", 0}, {"roomIsEmpty", 0}, {"on", 1},           {"off", 1},
                       {"announce", 1},       {"emergencyStart", 2}, {"emergencyEnd", 2}, {"enter", 2},
                       {"leave", 2},          {"motionDetected", 3}, {"clockTick", 4}};

  auto device_room = [](const Event* e, const char* label) -> std::optional<std::string> {
    if (!e || e->label() != label || !e->payload().is_array() || e->payload().at(1) != "light") return std::nullopt;
    return e->payload().at(0).get<std::string>();
  };
  const bool r12 = options.emergency_lights;
  ex.assertions.push_back({"light-on-when-nonempty", [device_room, r12](const EngineState& st, const Event* e) {
                             const auto r = device_room(e, "on");
                             if (!r) return true;
                             return !room_empty(st.ctx, *r) || (r12 && !st.ctx.rows("emergency").empty());
                           }});
  ex.assertions.push_back({"light-off-when-empty", [device_room](const EngineState& st, const Event* e) {
                             const auto r = device_room(e, "off");
                             return !r || room_empty(st.ctx, *r);
                           }});
  ex.assertions.push_back({"no-light-off-in-emergency", [device_room](const EngineState& st, const Event* e) {
                             return !device_room(e, "off") || st.ctx.rows("emergency").empty();
                           }});
  return ex;
}

}  // namespace cobp::examples
