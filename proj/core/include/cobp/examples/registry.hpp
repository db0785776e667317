#pragma once

#include "cobp/examples/program.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cobp::examples {

struct RegistryEntry {
  std::string name;
  std::string description;
  std::function<ExampleProgram()> build;
};

/// All named examples, in listing order.
const std::vector<RegistryEntry>& registry();

/// Builds the example called `name` (aliases accepted). Throws ConfigError
/// for unknown names.
ExampleProgram make_example(const std::string& name);

std::vector<std::string> example_names();

}  // namespace cobp::examples
