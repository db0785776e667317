#pragma once

#include "cobp/examples/program.hpp"

#include <array>
#include <set>
#include <utility>
#include <vector>

namespace cobp::examples {

using Cell = std::pair<int, int>;  // (row, col)

struct LifeOptions {
  /// Number of tick/tock cycles before the clock CBT finishes.
  int generations = 2;
  /// Adds the mating-dance rule and swaps the rule queries for their
  /// dance-excluding variants.
  bool evolved = false;
  /// Require the three dancers to be lonely. Turning it off reproduces the
  /// duplication bug.
  bool lonely_check = true;
};

ExampleProgram build_game_of_life(const std::vector<Cell>& seed, const LifeOptions& options = {});

/// Tables `pop` (key "r,c") and `tick` (single row "tick").
ContextStore life_context(const std::vector<Cell>& pop, int tick = 0);
/// Accepts {pop: [[r,c]...], tick} or a generic table document.
ContextStore life_context_from_json(const Value& doc);

std::set<Cell> population(const ContextStore& ctx);
int tick_value(const ContextStore& ctx);

/// The eight neighbours, starting south and going counter-clockwise as in the
/// usual (row down, col right) drawing.
std::array<Cell, 8> ngb(Cell c);
/// Next position of a dancer at `dancer` circling `centre` clockwise.
Cell dance_next(Cell centre, Cell dancer);

std::string cell_key(Cell c);
Event die_event(Cell c);
Event reproduce_event(Cell c);
Event step_event(Cell c);

/// Centres of the unpopulated cells whose dancers qualify for the mating dance.
std::set<Cell> dance_centres(const std::set<Cell>& pop, bool lonely_check);

}  // namespace cobp::examples
