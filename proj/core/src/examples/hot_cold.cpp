#include "cobp/examples/hot_cold.hpp"

#include <set>

namespace cobp::examples {

StepFn alternation(Event a, Event b) {
  const SyncStatement first = wait_for(EventSet::of(a), EventSet::of(b));
  const SyncStatement second = wait_for(EventSet::of(b), EventSet::of(a));
  return [first, second](StateId s, const QueryResult&, const ContextStore&, const Event* last) {
    const StateId next = last ? 1 - s : s;
    return StepOutcome::sync(next == 0 ? first : second, next);
  };
}

ExampleProgram build_hot_cold(bool with_interleave, bool cold_first) {
  auto p = std::make_shared<Program>();
  p->repo.add_query("Tap", constant_query());

  const Event cold("Cold");
  const Event hot("Hot");
  p->add({"Cold", "Tap", nullptr, 0, sequence({fixed(request({cold})), fixed(request({cold})), fixed(request({cold}))})});
  p->add({"Hot", "Tap", nullptr, 0, sequence({fixed(request({hot})), fixed(request({hot})), fixed(request({hot}))})});
  if (with_interleave) p->add({"Interleave", "Tap", nullptr, cold_first ? 0 : 1, alternation(cold, hot)});

  ExampleProgram ex;
  ex.name = with_interleave ? "hot-cold-interleave" : "hot-cold";
  ex.description = with_interleave ? "pour Cold and Hot three times each, strictly alternating"
                                   : "pour Cold and Hot three times each, in any order";
  ex.program = std::move(p);
  ex.priority_ranks = {{"Hot", 0}, {"Cold", 1}};
  return ex;
}

Event push_event(int room) { return Event("Push", room); }
Event cold_event(int room) { return Event("Cold", room); }
Event hot_event(int room) { return Event("Hot", room); }

namespace {

bool has_taps(const Record& r) {
  const auto t = r.value("type", std::string());
  return t == "kitchen" || t == "bathroom";
}

/// Wait for Push(i), then request `pour(i)` three times, then start over.
StepFn pour_after_push(Event (*pour)(int)) {
  auto room = [](const QueryResult& seed) { return static_cast<int>(seed_int(seed, "id")); };
  auto pour_stmt = [pour, room](const QueryResult& seed, const ContextStore&) { return request({pour(room(seed))}); };
  return sequence({[room](const QueryResult& seed, const ContextStore&) {
                     return wait_for(EventSet::of(push_event(room(seed))));
                   },
                   pour_stmt, pour_stmt, pour_stmt},
                  true);
}

}  // namespace

ExampleProgram build_ext_hot_cold(const std::vector<Room>& rooms) {
  Value rows = Value::array();
  std::set<int> ids;
  for (const auto& r : rooms) {
    if (!ids.insert(r.id).second) throw ConfigError("duplicate room id " + std::to_string(r.id));
    if (r.type.empty()) throw ConfigError("room " + std::to_string(r.id) + " has no type");
    rows.push_back({{"id", r.id}, {"type", r.type}});
  }

  auto p = std::make_shared<Program>();
  p->repo.add_query("RoomWithTaps", table_query("rooms", [](const Record& r, const ContextStore&, const Value&) {
                      return has_taps(r);
                    }));
  p->repo.add_query("Kitchen", table_query("rooms", [](const Record& r, const ContextStore&, const Value&) {
                      return r.value("type", std::string()) == "kitchen";
                    }));

  p->add({"Cold", "RoomWithTaps", nullptr, 0, pour_after_push(cold_event)});
  p->add({"Hot", "RoomWithTaps", nullptr, 0, pour_after_push(hot_event)});
  p->add({"Int", "Kitchen", nullptr, 0,
          [](StateId s, const QueryResult& seed, const ContextStore& ctx, const Event* last) {
            const int i = static_cast<int>(seed_int(seed, "id"));
            return alternation(cold_event(i), hot_event(i))(s, seed, ctx, last);
          }});

  ExampleProgram ex;
  ex.name = "ext-hot-cold";
  ex.description = "per-room hot/cold taps gated by a push button; kitchens alternate";
  ex.program = std::move(p);
  ex.env_model.push_back(std::make_shared<const CbtDefinition>(CbtDefinition{
      "Pusher", "RoomWithTaps", nullptr, 0,
      sequence({[](const QueryResult& seed, const ContextStore&) {
        return request({push_event(static_cast<int>(seed_int(seed, "id")))});
      }})}));
  ex.ctx_init = register_tables_from_init({{"rooms", {{"keyField", "id"}, {"rows", rows}}}});
  ex.priority_ranks = {{"Push", 0}, {"Cold", 1}, {"Hot", 2}};
  return ex;
}

}  // namespace cobp::examples
