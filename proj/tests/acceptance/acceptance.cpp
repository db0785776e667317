// Acceptance criteria: one PASS/FAIL line each, with a pinned time budget.

#include "cobp/examples/game_of_life.hpp"
#include "cobp/examples/grid_robot.hpp"
#include "cobp/examples/hot_cold.hpp"
#include "cobp/examples/registry.hpp"
#include "cobp/examples/smart_building.hpp"

#include "../oracles/bp_oracle.hpp"
#include "../oracles/conway.hpp"
#include "../support/bp_program.hpp"
#include "../support/checks.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace cobp;
using namespace cobp::examples;
using namespace testing_support;

namespace {

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

template <typename A, typename B>
void require_eq(const A& got, const B& want, const std::string& what) {
  if (!(got == want)) {
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want;
    throw Failure{os.str()};
  }
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void()> body;
};

std::set<std::string> cell_ids(const std::string& cbt, const std::vector<Cell>& cells) {
  std::set<std::string> out;
  for (const auto& c : cells) out.insert(cbt + "#" + cell_key(c));
  return out;
}

std::set<std::string> merged(std::initializer_list<std::set<std::string>> parts) {
  std::set<std::string> out{"CBT_tick#1"};
  for (const auto& p : parts) out.insert(p.begin(), p.end());
  return out;
}

std::size_t live_copies(const ExampleProgram& ex) {
  const Engine engine(ex.program);
  return engine.initialize(ex.ctx_init).copies.size();
}

// 1 ------------------------------------------------------------------------
void hot_cold_requirements() {
  const auto base = build_hot_cold(false);
  const auto traces = enumerate_maximal_traces(*base.program, base.ctx_init);
  require_eq(traces.size(), 20u, "base trace count");
  for (const auto& t : traces) {
    require_eq(std::count(t.begin(), t.end(), "Hot"), 3, "Hot per trace");
    require_eq(std::count(t.begin(), t.end(), "Cold"), 3, "Cold per trace");
  }
  const auto inter = build_hot_cold(true);
  const auto one = enumerate_maximal_traces(*inter.program, inter.ctx_init);
  require_eq(one.size(), 1u, "interleaved trace count");
  require(*one.begin() == Labels{"Cold", "Hot", "Cold", "Hot", "Cold", "Hot"}, "interleaved trace must alternate from Cold");
}

// 2 ------------------------------------------------------------------------
void bp_reduction() {
  using oracle::BThread;
  const BThread cold = oracle::repeat("Cold", 3);
  const BThread hot = oracle::repeat("Hot", 3);
  const std::vector<std::vector<BThread>> programs = {{cold, hot}, {cold, hot, oracle::alternate("Cold", "Hot")}};
  const std::vector<ExampleProgram> cobp = {build_hot_cold(false), build_hot_cold(true)};
  for (std::size_t i = 0; i < programs.size(); ++i) {
    const auto want = oracle::maximal_traces(programs[i]);
    require(enumerate_maximal_traces(*cobp[i].program, cobp[i].ctx_init) == want,
            "trace set differs from plain BP oracle for program " + std::to_string(i));
    // The same oracle automata run through the engine as CBTs.
    require(enumerate_maximal_traces(*bp_program(programs[i]), {}) == want, "translated automata differ");
  }
}

// 3 ------------------------------------------------------------------------
void extended_hot_cold() {
  for (int baths = 0; baths <= 10; ++baths) {
    for (int kitchens = 0; kitchens <= 10; ++kitchens) {
      std::vector<Room> rooms;
      int id = 1;
      for (int i = 0; i < kitchens; ++i) rooms.push_back({id++, "kitchen"});
      for (int i = 0; i < baths; ++i) rooms.push_back({id++, "bathroom"});
      rooms.push_back({id++, "bedroom"});
      const auto ex = build_ext_hot_cold(rooms);
      require_eq(ex.cbt_count(), 3u, "CBT definitions");
      require_eq(live_copies(ex), static_cast<std::size_t>(2 * baths + 3 * kitchens),
                 "live copies for " + std::to_string(baths) + " bathrooms and " + std::to_string(kitchens) + " kitchens");
    }
  }
  const auto ex = build_ext_hot_cold({{1, "kitchen"}, {2, "bathroom"}});
  const auto traces = enumerate_maximal_traces(*ex.program, ex.ctx_init, ex.env_model);
  const Labels sample = {"Push(1)", "Cold(1)", "Push(2)", "Hot(2)",  "Hot(1)", "Hot(2)",
                         "Cold(1)", "Hot(1)",  "Cold(2)", "Cold(1)", "Hot(2)"};
  require(std::any_of(traces.begin(), traces.end(), [&](const Labels& t) { return is_prefix(sample, t); }),
          "sample cross-room ordering not among the enumerated traces");
  bool bathroom_free = false;
  for (const auto& t : traces) {
    require(alternating_from_cold(pours(t, 1)), "kitchen events must alternate in every trace");
    bathroom_free = bathroom_free || !alternating_from_cold(pours(t, 2));
  }
  require(bathroom_free, "bathroom events alternate in every trace");
}

// 4 ------------------------------------------------------------------------
void game_of_life() {
  // Two lonely cells.
  const auto lonely = build_game_of_life({{5, 5}, {10, 10}}, {.generations = 2});
  const auto gens = generations(lonely);
  require(gens.size() >= 2 && gens[1].empty(), "lonely population not empty after generation 1");
  const auto lonely_lcs = lc_sets(lonely);
  require_eq(lonely_lcs.size(), 2u, "ticks in lonely run");
  require(lonely_lcs[0] == merged({cell_ids("CBT_1", {{5, 5}, {10, 10}})}), "LC_0 of the lonely seed");
  require(lonely_lcs[1] == merged({}), "live copies besides CBT_tick after generation 1");

  // Blinker: population period 2 and the listed live-copy sets.
  const std::vector<Cell> horizontal = {{5, 4}, {5, 5}, {5, 6}};
  const std::vector<Cell> vertical = {{4, 5}, {5, 5}, {6, 5}};
  const auto blinker = build_game_of_life(horizontal, {.generations = 6});
  const auto pops = generations(blinker);
  for (std::size_t i = 0; i < pops.size(); ++i) {
    const auto& want = i % 2 == 0 ? horizontal : vertical;
    require(pops[i] == std::set<Cell>(want.begin(), want.end()), "blinker generation " + std::to_string(i));
  }
  const auto even = merged({cell_ids("CBT_1", {{5, 4}, {5, 6}}), cell_ids("CBT_2", {{5, 5}}),
                            cell_ids("CBT_4", {{4, 5}, {6, 5}})});
  const auto odd = merged({cell_ids("CBT_1", {{4, 5}, {6, 5}}), cell_ids("CBT_2", {{5, 5}}),
                           cell_ids("CBT_4", {{5, 4}, {5, 6}})});
  const auto lcs = lc_sets(blinker);
  require_eq(lcs.size(), 6u, "blinker ticks");
  for (std::size_t i = 0; i < lcs.size(); ++i) {
    require(lcs[i] == (i % 2 == 0 ? even : odd), "blinker live copies at generation " + std::to_string(i));
  }

  // Direct synchronous oracle.
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<Cell> seed;
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        if (rng() % 100 < 35) seed.insert({r, c});
      }
    }
    const auto got = generations(build_game_of_life({seed.begin(), seed.end()}, {.generations = 6}), trial);
    auto want = seed;
    std::size_t g = 0;
    for (; g < got.size(); ++g) {
      require(got[g] == want, "oracle mismatch in trial " + std::to_string(trial) + " generation " + std::to_string(g));
      want = oracle::conway_step(want);
    }
    require_eq(g, 7u, "generations observed");
  }
}

// 5 ------------------------------------------------------------------------
void evolved_game_of_life() {
  const std::vector<Cell> block = {{5, 0}, {5, 1}, {6, 0}, {6, 1}};
  std::vector<Cell> seed = {{0, 1}, {2, 0}, {2, 2}};
  seed.insert(seed.end(), block.begin(), block.end());
  const auto pops = generations(build_game_of_life(seed, {.generations = 2, .evolved = true}));
  std::set<Cell> ctx1 = {{0, 1}, {1, 1}, {2, 0}, {2, 2}};
  std::set<Cell> ctx2 = {{1, 0}, {1, 1}, {1, 2}, {2, 1}};
  ctx1.insert(block.begin(), block.end());
  ctx2.insert(block.begin(), block.end());
  require_eq(pops.size(), 3u, "generations observed");
  require(pops[1] == ctx1, "ctx_1 population");
  require(pops[2] == ctx2, "ctx_2 population");

  const auto buggy = make_example("gol-dance-buggy");
  const auto v = verify(*buggy.program, buggy.ctx_init, buggy.env_model, buggy.assertions);
  require(v.outcome == Outcome::violation && v.violated == "no-duplication", "buggy dance must violate no-duplication");
  require(!v.counterexample.empty() && v.trace.has_value(), "violation needs a counterexample trace");

  const auto fixed_ex = make_example("gol-dance-row");
  require(fixed_ex.ctx_init == buggy.ctx_init, "fixed and buggy variants must share the seed");
  VerifyOptions o;
  o.limits.max_states = 100'000;
  const auto ok = verify(*fixed_ex.program, fixed_ex.ctx_init, fixed_ex.env_model, fixed_ex.assertions, o);
  require(ok.outcome == Outcome::ok, "corrected dance must verify: " + to_string(ok.outcome));
}

// 6 ------------------------------------------------------------------------
void grid_robot() {
  const auto ex = make_example("robot");
  const GridWorld world = walled_world();
  const Engine engine(ex.runnable());
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EngineState st = engine.initialize(ex.ctx_init, seed);
    for (int i = 0; i < 1000; ++i) {
      require(engine.step_in_place(st).event.has_value(), "robot run stalled");
      const Pose p = robot_pose(st.ctx);
      require(!world.wall(p.row, p.col), "robot entered a wall (seed " + std::to_string(seed) + ")");
    }
  }

  const auto corner = make_example("robot-corner");
  const auto v = verify(*corner.program, corner.ctx_init, corner.env_model, corner.assertions);
  require(v.outcome == Outcome::deadlock, "dead-end corner must deadlock, got " + to_string(v.outcome));
  require(!v.counterexample.empty() && v.trace && v.trace->status == RunStatus::deadlock, "deadlock needs a path");

  const auto delivery = make_example("robot-delivery");
  const auto traces = enumerate_maximal_traces(*delivery.program, delivery.ctx_init, delivery.env_model);
  bool delivered = false;
  for (const auto& t : traces) {
    const auto src = index_of(t, "targetReached(1,3)");
    const auto dst = index_of(t, "targetReached(1,5)");
    if (dst < 0) continue;
    delivered = true;
    require(src >= 0 && src < dst, "destination reached before source");
  }
  require(delivered, "no enumerated trace reaches the destination");
}

// 7 ------------------------------------------------------------------------
std::uint64_t building_states(int rooms, int motions) {
  BuildingOptions o;
  for (int i = 1; i <= rooms; ++i) o.rooms.push_back({"r" + std::to_string(i), "office"});
  o.motions = motions;
  const auto ex = build_smart_building(o);
  return count_states(*ex.program, ex.ctx_init, ex.env_model);
}

void smart_building() {
  BuildingOptions o;
  o.rooms = {{"r1", "office"}};
  o.minutes = 6;
  const auto one = build_smart_building(o);
  const auto traces = enumerate_maximal_traces(*one.program, one.ctx_init, one.env_model);
  require(!traces.empty(), "no traces");
  for (const auto& t : traces) require(light_follows_occupancy(t, "r1"), "light switched against occupancy");

  o.script = {{0, emergency_start("e1")}, {300, emergency_end("e1")}};
  const auto emergency = build_smart_building(o);
  const auto et = enumerate_maximal_traces(*emergency.program, emergency.ctx_init, emergency.env_model);
  bool switched_off_after = false;
  for (const auto& t : et) {
    require(no_off_during_emergency(t), "light switched off during an emergency");
    switched_off_after = switched_off_after || last_index_of(t, "off(r1,light)") > index_of(t, "emergencyEnd(e1)");
  }
  require(switched_off_after, "light never switched off once the emergency ended");

  const auto r1m1 = building_states(1, 1);
  const auto r2m1 = building_states(2, 1);
  const auto r1m2 = building_states(1, 2);
  std::printf("  states: 1 room/1 move %llu, 2 rooms/1 move %llu, 1 room/2 moves %llu\n",
              static_cast<unsigned long long>(r1m1), static_cast<unsigned long long>(r2m1),
              static_cast<unsigned long long>(r1m2));
  require(r2m1 > r1m1, "state count must grow with rooms");
  require(r1m2 > r1m1, "state count must grow with moves");
}

// 8 ------------------------------------------------------------------------
void determinism() {
  for (const auto& entry : registry()) {
    std::string first;
    for (int round = 0; round < 2; ++round) {
      const auto ex = entry.build();
      const Engine engine(ex.runnable());
      EngineState st = engine.initialize(ex.ctx_init, 12345);
      std::ostringstream os;
      engine.run(st, 300, nullptr, true).write_jsonl(os);
      if (round == 0) first = os.str();
      else require(first == os.str(), "trace differs between runs of " + entry.name);
    }
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hot-cold requirements", 1, hot_cold_requirements},
      {2, "BP reduction on hot-cold", 5, bp_reduction},
      {3, "extended hot-cold", 30, extended_hot_cold},
      {4, "game of life", 30, game_of_life},
      {5, "evolved game of life", 60, evolved_game_of_life},
      {6, "grid robot", 60, grid_robot},
      {7, "smart building", 120, smart_building},
      {8, "determinism", 10, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      c.body();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && secs > c.budget_s) why = "exceeded the " + std::to_string(c.budget_s) + " s budget";
    std::printf("%s [%d] %s (%.2f s, budget %.0f s)%s%s\n", why.empty() ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_s, why.empty() ? "" : ": ", why.c_str());
    std::fflush(stdout);
    if (!why.empty()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
