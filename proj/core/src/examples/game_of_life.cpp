#include "cobp/examples/game_of_life.hpp"

#include <algorithm>

namespace cobp::examples {

namespace {

// Clockwise ring around a centre, with rows growing downwards.
constexpr std::array<Cell, 8> kRing = {{{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}};

Cell cell_of(const Value& payload) { return {payload.at(0).get<int>(), payload.at(1).get<int>()}; }

Cell seed_cell(const QueryResult& seed) {
  return {static_cast<int>(seed_int(seed, "row")), static_cast<int>(seed_int(seed, "col"))};
}

int live_neighbours(const std::set<Cell>& pop, Cell c) {
  int n = 0;
  for (const auto& x : ngb(c)) n += pop.contains(x) ? 1 : 0;
  return n;
}

/// Unpopulated cells next to the population. Every cell with three live
/// neighbours is among them, so births need no other candidates.
std::set<Cell> birth_candidates(const std::set<Cell>& pop) {
  std::set<Cell> out;
  for (const auto& c : pop) {
    for (const auto& x : ngb(c)) {
      if (!pop.contains(x)) out.insert(x);
    }
  }
  return out;
}

QueryResult result_for(Cell c) { return {cell_key(c), Value{{"row", c.first}, {"col", c.second}}}; }

enum class Rule { underpopulation = 1, survival = 2, overpopulation = 3, birth = 4 };

bool rule_holds(Rule r, const std::set<Cell>& pop, Cell c) {
  const int n = live_neighbours(pop, c);
  switch (r) {
    case Rule::underpopulation: return pop.contains(c) && n < 2;
    case Rule::survival: return pop.contains(c) && n >= 2 && n <= 3;
    case Rule::overpopulation: return pop.contains(c) && n > 3;
    case Rule::birth: return !pop.contains(c) && n == 3;
  }
  return false;
}

/// Rule query, open only while Tick = 1. The evolved variant leaves out dance
/// centres and their neighbours.
QueryFn rule_query(Rule r, bool evolved, bool lonely_check) {
  return [=](const ContextStore& ctx, const Value&) {
    std::vector<QueryResult> out;
    if (tick_value(ctx) != 1) return out;
    const auto pop = population(ctx);
    std::set<Cell> excluded;
    if (evolved) {
      for (const auto& centre : dance_centres(pop, lonely_check)) {
        excluded.insert(centre);
        for (const auto& x : ngb(centre)) excluded.insert(x);
      }
    }
    const auto candidates = r == Rule::birth ? birth_candidates(pop) : pop;
    for (const auto& c : candidates) {
      if (!excluded.contains(c) && rule_holds(r, pop, c)) out.push_back(result_for(c));
    }
    return out;
  };
}

QueryFn dance_query(bool lonely_check) {
  return [=](const ContextStore& ctx, const Value&) {
    std::vector<QueryResult> out;
    if (tick_value(ctx) != 1) return out;
    for (const auto& c : dance_centres(population(ctx), lonely_check)) out.push_back(result_for(c));
    return out;
  };
}

Value cell_args(const Event& e) {
  const Cell c = cell_of(e.payload());
  return {{"row", c.first}, {"col", c.second}};
}

Cell args_cell(const Value& args) { return {args.at("row").get<int>(), args.at("col").get<int>()}; }

void add_cell(ContextStore& ctx, Cell c) {
  ctx.upsert("pop", {{"cell", cell_key(c)}, {"row", c.first}, {"col", c.second}});
}

StepFn single_request(Event (*make)(Cell)) {
  return sequence({[make](const QueryResult& seed, const ContextStore&) {
    return request({make(seed_cell(seed))}, EventSet::of(Event("tick")));
  }});
}

}  // namespace

std::array<Cell, 8> ngb(Cell c) {
  const auto [r, k] = c;
  return {{{r + 1, k}, {r + 1, k + 1}, {r, k + 1}, {r - 1, k + 1}, {r - 1, k}, {r - 1, k - 1}, {r, k - 1}, {r + 1, k - 1}}};
}

Cell dance_next(Cell centre, Cell dancer) {
  const Cell off{dancer.first - centre.first, dancer.second - centre.second};
  auto it = std::find(kRing.begin(), kRing.end(), off);
  if (it == kRing.end()) throw EngineError("cell " + cell_key(dancer) + " is not next to " + cell_key(centre));
  const Cell n = kRing[static_cast<std::size_t>((it - kRing.begin() + 1) % 8)];
  return {centre.first + n.first, centre.second + n.second};
}

std::string cell_key(Cell c) { return std::to_string(c.first) + "," + std::to_string(c.second); }
Event die_event(Cell c) { return Event("die", Value::array({c.first, c.second})); }
Event reproduce_event(Cell c) { return Event("reproduce", Value::array({c.first, c.second})); }
Event step_event(Cell c) { return Event("step", Value::array({c.first, c.second})); }

std::set<Cell> dance_centres(const std::set<Cell>& pop, bool lonely_check) {
  std::set<Cell> out;
  for (const auto& c : birth_candidates(pop)) {
    if (live_neighbours(pop, c) != 3) continue;
    bool ok = true;
    if (lonely_check) {
      for (const auto& x : ngb(c)) {
        if (pop.contains(x) && live_neighbours(pop, x) != 0) ok = false;
      }
    }
    if (ok) out.insert(c);
  }
  return out;
}

std::set<Cell> population(const ContextStore& ctx) {
  std::set<Cell> out;
  for (const auto& [key, row] : ctx.rows("pop")) out.insert({row.at("row").get<int>(), row.at("col").get<int>()});
  return out;
}

int tick_value(const ContextStore& ctx) {
  const Record* r = ctx.find("tick", "tick");
  return r ? r->at("value").get<int>() : 0;
}

ContextStore life_context(const std::vector<Cell>& pop, int tick) {
  ContextStore ctx;
  ctx.create_table("pop", "cell");
  ctx.create_table("tick", "id");
  for (const auto& c : pop) {
    if (ctx.find("pop", cell_key(c))) throw ConfigError("duplicate cell " + cell_key(c));
    add_cell(ctx, c);
  }
  ctx.upsert("tick", {{"id", "tick"}, {"value", tick}});
  return ctx;
}

ContextStore life_context_from_json(const Value& doc) {
  if (doc.is_object() && doc.contains("pop") && doc["pop"].is_array()) {
    std::vector<Cell> cells;
    for (const auto& c : doc["pop"]) {
      if (!c.is_array() || c.size() != 2) throw ConfigError("population entries must be [row, col]");
      cells.push_back(cell_of(c));
    }
    return life_context(cells, doc.value("tick", 0));
  }
  return register_tables_from_init(doc);
}

ExampleProgram build_game_of_life(const std::vector<Cell>& seed, const LifeOptions& options) {
  if (options.generations < 0) throw ConfigError("generations must be non-negative");
  auto p = std::make_shared<Program>();
  auto& repo = p->repo;
  const bool evo = options.evolved;

  repo.add_query("One", constant_query());
  const char* names[] = {"", "Q1", "Q2", "Q3", "Q4"};
  const char* evo_names[] = {"", "QB1", "QB2", "QB3", "QB4"};
  for (int i = 1; i <= 4; ++i) {
    repo.add_query(evo ? evo_names[i] : names[i], rule_query(static_cast<Rule>(i), evo, options.lonely_check));
  }
  if (evo) repo.add_query("QA", dance_query(options.lonely_check));

  repo.add_update("RemoveCell", [](ContextStore& ctx, const Value& a) { ctx.erase("pop", cell_key(args_cell(a))); });
  repo.add_update("AddCell", [](ContextStore& ctx, const Value& a) { add_cell(ctx, args_cell(a)); });
  repo.add_update("FlipTick", [](ContextStore& ctx, const Value&) {
    ctx.set_field("tick", "tick", "value", 1 - tick_value(ctx));
  });
  repo.add_effect("die", [](const Event& e) { return std::vector<UpdateCall>{{"RemoveCell", cell_args(e)}}; });
  repo.add_effect("reproduce", [](const Event& e) { return std::vector<UpdateCall>{{"AddCell", cell_args(e)}}; });
  repo.add_effect("tick", [](const Event&) { return std::vector<UpdateCall>{{"FlipTick", nullptr}}; });
  repo.add_effect("tock", [](const Event&) { return std::vector<UpdateCall>{{"FlipTick", nullptr}}; });
  if (evo) {
    repo.add_update("Dance", [](ContextStore& ctx, const Value& a) {
      const Cell centre = args_cell(a);
      const auto pop = population(ctx);
      std::vector<Cell> moved;
      for (const auto& x : ngb(centre)) {
        if (pop.contains(x)) {
          ctx.erase("pop", cell_key(x));
          moved.push_back(dance_next(centre, x));
        }
      }
      for (const auto& x : moved) add_cell(ctx, x);
    });
    repo.add_effect("step", [](const Event& e) { return std::vector<UpdateCall>{{"Dance", cell_args(e)}}; });
  }

  // Generation clock: state = 2 * generation + phase.
  const int gens = options.generations;
  const Event tick("tick");
  const Event tock("tock");
  p->add({"CBT_tick", "One", nullptr, 0,
          [gens, tick, tock](StateId s, const QueryResult&, const ContextStore&, const Event* last) {
            if (last) ++s;
            const StateId gen = s / 2;
            if (s % 2 == 0) {
              if (gen >= gens) return StepOutcome::done();
              return StepOutcome::sync(request({tick}), s);
            }
            return StepOutcome::sync(request({tock}, EventSet::complement(EventSet::of(tock))), s);
          }});

  const std::string prefix = evo ? "CBT_B" : "CBT_";
  const auto q = [&](int i) { return std::string(evo ? evo_names[i] : names[i]); };
  p->add({prefix + "1", q(1), nullptr, 0, single_request(die_event)});
  p->add({prefix + "2", q(2), nullptr, 0, sequence({})});
  p->add({prefix + "3", q(3), nullptr, 0, single_request(die_event)});
  p->add({prefix + "4", q(4), nullptr, 0, single_request(reproduce_event)});
  if (evo) {
    std::vector<StatementFn> dance;
    for (int i = 0; i < 8; ++i) {
      dance.push_back([](const QueryResult& seed, const ContextStore&) {
        return request({step_event(seed_cell(seed))}, EventSet::of(Event("tick")));
      });
    }
    dance.push_back([](const QueryResult& seed, const ContextStore&) {
      return request({reproduce_event(seed_cell(seed))}, EventSet::of(Event("tick")));
    });
    p->add({"CBT_A", "QA", nullptr, 0, sequence(std::move(dance))});
  }

  ExampleProgram ex;
  ex.name = evo ? (options.lonely_check ? "gol-dance" : "gol-dance-buggy") : "gol";
  ex.description = evo ? "Game of Life with the mating-dance rule" : "Conway's Game of Life with a tick/tock barrier";
  ex.program = std::move(p);
  ex.ctx_init = life_context(seed);
  ex.parse_ctx = life_context_from_json;
  ex.priority_ranks = {{"tick", 0}, {"tock", 0}};

  ex.assertions.push_back({"generation-barrier", [](const EngineState& st, const Event* last) {
                             if (!last) return true;
                             const auto& l = last->label();
                             return !(l == "die" || l == "reproduce" || l == "step") || tick_value(st.ctx) == 0;
                           }});
  if (evo) {
    ex.assertions.push_back({"no-duplication", [](const EngineState& st, const Event* last) {
                               if (!last || last->label() != "step") return true;
                               const Cell centre = cell_of(last->payload());
                               const auto pop = population(st.ctx);
                               std::set<Cell> dancers;
                               for (const auto& x : ngb(centre)) {
                                 if (pop.contains(x)) dancers.insert(x);
                               }
                               if (dancers.size() != 3) return false;
                               for (const auto& [id, copy] : st.copies) {
                                 if (copy.cbt->name != "CBT_A") continue;
                                 const Cell other = seed_cell(copy.seed);
                                 if (other == centre) continue;
                                 for (const auto& x : ngb(other)) {
                                   if (dancers.contains(x)) return false;
                                 }
                               }
                               return true;
                             }});
  }
  if (evo && !options.lonely_check) ex.expected = Outcome::violation;
  return ex;
}

}  // namespace cobp::examples
