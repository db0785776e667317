#pragma once

#include "cobp/engine.hpp"
#include "cobp/verifier.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cobp::examples {

/// A runnable, verifiable example: program, initial context, environment
/// simulation and the safety properties it is expected to satisfy.
struct ExampleProgram {
  std::string name;
  std::string description;
  std::shared_ptr<const Program> program;
  /// CBTs simulating the environment; appended to the program for runs and
  /// verification but not counted as part of the specification.
  std::vector<CbtPtr> env_model;
  ContextStore ctx_init;
  std::vector<Assertion> assertions;
  /// Label ranks for the priority arbiter.
  std::map<std::string, int> priority_ranks;
  /// Verdict the verifier is expected to return.
  Outcome expected = Outcome::ok;
  /// Parses a context-init override. Defaults to the generic table document.
  std::function<ContextStore(const Value&)> parse_ctx;

  std::shared_ptr<const Program> runnable() const { return with_env(*program, env_model); }
  std::size_t cbt_count() const { return program->cbts.size(); }
  ContextStore ctx_from_json(const Value& doc) const {
    return parse_ctx ? parse_ctx(doc) : register_tables_from_init(doc);
  }
};

// Statement shorthands -------------------------------------------------------

inline SyncStatement request(std::vector<Event> events, EventSet block = EventSet::none()) {
  return SyncStatement(std::move(events), EventSet::none(), std::move(block));
}

inline SyncStatement wait_for(EventSet waited, EventSet block = EventSet::none()) {
  return SyncStatement({}, std::move(waited), std::move(block));
}

// Query shorthands -----------------------------------------------------------

using RowPredicate = std::function<bool(const Record& row, const ContextStore& ctx, const Value& params)>;

/// One result per row of `table` accepted by `keep`, keyed by the row key.
QueryFn table_query(std::string table, RowPredicate keep = nullptr);

/// A query with exactly one result, key "1", whatever the context.
QueryFn constant_query();

/// Integer field of a seed record.
inline long long seed_int(const QueryResult& seed, const std::string& field) {
  return seed.value.at(field).get<long long>();
}

}  // namespace cobp::examples
