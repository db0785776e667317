#pragma once

#include "cobp/events.hpp"
#include "cobp/value.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cobp {

/// A JSON object mapping field names to scalars or lists.
using Record = Value;

struct Table {
  std::string key_field;
  std::map<std::string, Record> rows;
  /// Canonical serialization, kept current by ContextStore.
  std::string text;
};

/// Named tables of keyed records. Tables are shared copy-on-write, so copying
/// a store is cheap and a copy never observes later writes to the original.
class ContextStore {
 public:
  /// Creates an empty table. Re-creating an existing table with the same key
  /// field is a no-op; a different key field is a ConfigError.
  void create_table(const std::string& name, const std::string& key_field);
  bool has_table(const std::string& name) const { return tables_.contains(name); }
  /// Throws ConfigError for an unknown table.
  const Table& table(const std::string& name) const;
  /// Rows of `name`, or an empty map if the table does not exist.
  const std::map<std::string, Record>& rows(const std::string& name) const;

  /// Inserts or replaces a record; returns its key. The key is the value of the
  /// table's key field (strings verbatim, other scalars as their JSON text).
  std::string upsert(const std::string& table, Record record);
  bool erase(const std::string& table, const std::string& key);
  /// Sets one field of an existing record. Throws ConfigError if absent.
  void set_field(const std::string& table, const std::string& key, const std::string& field, Value v);
  const Record* find(const std::string& table, const std::string& key) const;

  /// {table: {keyField, rows: [records in key order]}}
  Value to_json() const;
  /// Compact canonical serialization: equal stores give equal text.
  std::string canonical_text() const;
  /// SHA-256 of canonical_text().
  std::string digest() const;

  bool operator==(const ContextStore& other) const;

  static std::string key_text(const Value& key_value);

 private:
  Table& mutable_table(const std::string& name);
  std::map<std::string, std::shared_ptr<const Table>> tables_;
};

/// Builds a store from {table: {keyField: string, rows: [record...]}}.
/// A null or empty document yields an empty store.
ContextStore register_tables_from_init(const Value& doc);

struct QueryResult {
  std::string key;
  Value value;
  bool operator==(const QueryResult&) const = default;
};

using QueryFn = std::function<std::vector<QueryResult>(const ContextStore&, const Value& params)>;
using UpdateFn = std::function<void(ContextStore&, const Value& args)>;

struct UpdateCall {
  std::string command;
  Value args;
};

using EffectRule = std::function<std::vector<UpdateCall>(const Event&)>;

/// A query name together with bound parameters.
struct QueryBinding {
  std::string query;
  Value params;
  /// `query` alone when params are empty, else `query` followed by the params JSON.
  std::string id() const;
  bool operator==(const QueryBinding& o) const { return id() == o.id(); }
};

/// Queries, update commands and the effect map of one program.
class Repository {
 public:
  void add_query(const std::string& name, QueryFn fn);
  void add_update(const std::string& name, UpdateFn fn);
  /// Effect rule for events with `label`. Events without a rule leave the store unchanged.
  void add_effect(const std::string& label, EffectRule rule);

  bool has_query(const std::string& name) const { return queries_.contains(name); }
  bool has_update(const std::string& name) const { return updates_.contains(name); }

  /// Results sorted by key. Throws ConfigError for an unknown query and
  /// EngineError if the query yields two results with one key.
  std::vector<QueryResult> run_query(const ContextStore& store, const QueryBinding& q) const;

  /// Applies the update commands of e's rule in order on a copy of `store`.
  /// `changed` (optional) reports whether any command ran.
  ContextStore apply_effect(const ContextStore& store, const Event& e, bool* changed = nullptr) const;
  void apply_update(ContextStore& store, const UpdateCall& call) const;

 private:
  std::map<std::string, QueryFn> queries_;
  std::map<std::string, UpdateFn> updates_;
  std::map<std::string, EffectRule> effects_;
};

inline std::vector<QueryResult> run_query(const ContextStore& store, const Repository& repo, const QueryBinding& q) {
  return repo.run_query(store, q);
}

inline ContextStore apply_effect(const ContextStore& store, const Repository& repo, const Event& e) {
  return repo.apply_effect(store, e);
}

struct QueryDelta {
  std::vector<QueryResult> added;
  std::vector<QueryResult> removed;
  bool empty() const { return added.empty() && removed.empty(); }
};

/// Binding id -> delta. Bindings with no change still get an (empty) entry.
using QueryDiff = std::map<std::string, QueryDelta>;

/// Key-based difference of two sorted result lists.
QueryDelta diff_results(const std::vector<QueryResult>& before, const std::vector<QueryResult>& after);

QueryDiff diff_queries(const ContextStore& before, const ContextStore& after, const Repository& repo,
                       const std::vector<QueryBinding>& bindings);

}  // namespace cobp
