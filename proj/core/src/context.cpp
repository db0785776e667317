#include "cobp/context.hpp"

#include <algorithm>

namespace cobp {

namespace {

void refresh(Table& t) {
  t.text = t.key_field;
  for (const auto& [k, r] : t.rows) {
    t.text += '\x1e';
    t.text += r.dump();
  }
}

}  // namespace

void ContextStore::create_table(const std::string& name, const std::string& key_field) {
  if (name.empty() || key_field.empty()) throw ConfigError("table name and key field must be non-empty");
  auto it = tables_.find(name);
  if (it != tables_.end()) {
    if (it->second->key_field != key_field) {
      throw ConfigError("table '" + name + "' already exists with key field '" + it->second->key_field + "'");
    }
    return;
  }
  auto t = std::make_shared<Table>();
  t->key_field = key_field;
  refresh(*t);
  tables_.emplace(name, std::move(t));
}

const Table& ContextStore::table(const std::string& name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw ConfigError("unknown table '" + name + "'");
  return *it->second;
}

const std::map<std::string, Record>& ContextStore::rows(const std::string& name) const {
  static const std::map<std::string, Record> kEmpty;
  auto it = tables_.find(name);
  return it == tables_.end() ? kEmpty : it->second->rows;
}

Table& ContextStore::mutable_table(const std::string& name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw ConfigError("unknown table '" + name + "'");
  if (it->second.use_count() > 1) it->second = std::make_shared<Table>(*it->second);
  // The only owner now; casting away const is safe.
  return const_cast<Table&>(*it->second);
}

std::string ContextStore::key_text(const Value& key_value) {
  if (key_value.is_string()) return key_value.get<std::string>();
  if (key_value.is_number() || key_value.is_boolean()) return key_value.dump();
  throw ConfigError("record key must be a scalar, got " + key_value.dump());
}

std::string ContextStore::upsert(const std::string& table_name, Record record) {
  if (!record.is_object()) throw ConfigError("record must be an object: " + record.dump());
  const std::string& kf = table(table_name).key_field;
  auto kit = record.find(kf);
  if (kit == record.end()) {
    throw ConfigError("record in '" + table_name + "' lacks key field '" + kf + "': " + record.dump());
  }
  std::string key = key_text(*kit);
  Table& t = mutable_table(table_name);
  t.rows[key] = std::move(record);
  refresh(t);
  return key;
}

bool ContextStore::erase(const std::string& table_name, const std::string& key) {
  if (!find(table_name, key)) return false;
  Table& t = mutable_table(table_name);
  t.rows.erase(key);
  refresh(t);
  return true;
}

void ContextStore::set_field(const std::string& table_name, const std::string& key, const std::string& field,
                             Value v) {
  if (!find(table_name, key)) throw ConfigError("no record '" + key + "' in table '" + table_name + "'");
  Table& t = mutable_table(table_name);
  if (field == t.key_field) throw ConfigError("cannot rewrite key field '" + field + "'");
  t.rows.at(key)[field] = std::move(v);
  refresh(t);
}

const Record* ContextStore::find(const std::string& table_name, const std::string& key) const {
  auto it = tables_.find(table_name);
  if (it == tables_.end()) return nullptr;
  auto rit = it->second->rows.find(key);
  return rit == it->second->rows.end() ? nullptr : &rit->second;
}

Value ContextStore::to_json() const {
  Value out = Value::object();
  for (const auto& [name, t] : tables_) {
    Value rows = Value::array();
    for (const auto& [k, r] : t->rows) rows.push_back(r);
    out[name] = Value{{"keyField", t->key_field}, {"rows", std::move(rows)}};
  }
  return out;
}

std::string ContextStore::canonical_text() const {
  std::string out;
  for (const auto& [name, t] : tables_) {
    out += name;
    out += '\x1d';
    out += t->text;
    out += '\x1c';
  }
  return out;
}

std::string ContextStore::digest() const { return sha256_hex(canonical_text()); }

bool ContextStore::operator==(const ContextStore& other) const {
  if (tables_.size() != other.tables_.size()) return false;
  for (auto a = tables_.begin(), b = other.tables_.begin(); a != tables_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second == b->second) continue;
    if (a->second->key_field != b->second->key_field || a->second->rows != b->second->rows) return false;
  }
  return true;
}

ContextStore register_tables_from_init(const Value& doc) {
  ContextStore store;
  if (doc.is_null()) return store;
  if (!doc.is_object()) throw ConfigError("context-init document must be an object");
  for (const auto& [name, spec] : doc.items()) {
    if (!spec.is_object() || !spec.contains("keyField") || !spec["keyField"].is_string()) {
      throw ConfigError("table '" + name + "' needs a string 'keyField'");
    }
    store.create_table(name, spec["keyField"].get<std::string>());
    const Value rows = spec.value("rows", Value::array());
    if (!rows.is_array()) throw ConfigError("table '" + name + "': 'rows' must be an array");
    for (const auto& row : rows) {
      const std::string kf = spec["keyField"].get<std::string>();
      if (!row.is_object() || !row.contains(kf)) {
        throw ConfigError("table '" + name + "': row lacks key field '" + kf + "': " + row.dump());
      }
      if (store.find(name, ContextStore::key_text(row[kf]))) {
        throw ConfigError("table '" + name + "': duplicate key " + row[kf].dump());
      }
      store.upsert(name, row);
    }
  }
  return store;
}

std::string QueryBinding::id() const {
  if (params.is_null() || params.empty()) return query;
  return query + params.dump();
}

void Repository::add_query(const std::string& name, QueryFn fn) {
  if (!queries_.emplace(name, std::move(fn)).second) throw ConfigError("duplicate query '" + name + "'");
}

void Repository::add_update(const std::string& name, UpdateFn fn) {
  if (!updates_.emplace(name, std::move(fn)).second) throw ConfigError("duplicate update '" + name + "'");
}

void Repository::add_effect(const std::string& label, EffectRule rule) {
  if (!effects_.emplace(label, std::move(rule)).second) throw ConfigError("duplicate effect for '" + label + "'");
}

std::vector<QueryResult> Repository::run_query(const ContextStore& store, const QueryBinding& q) const {
  auto it = queries_.find(q.query);
  if (it == queries_.end()) throw ConfigError("unknown query '" + q.query + "'");
  auto results = it->second(store, q.params);
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].key == results[i - 1].key) {
      throw EngineError("query '" + q.id() + "' returned duplicate key '" + results[i].key + "'");
    }
  }
  return results;
}

void Repository::apply_update(ContextStore& store, const UpdateCall& call) const {
  auto it = updates_.find(call.command);
  if (it == updates_.end()) throw ConfigError("unknown update command '" + call.command + "'");
  it->second(store, call.args);
}

ContextStore Repository::apply_effect(const ContextStore& store, const Event& e, bool* changed) const {
  if (changed) *changed = false;
  auto it = effects_.find(e.label());
  if (it == effects_.end() || e.is_context()) return store;
  ContextStore next = store;
  for (const auto& call : it->second(e)) {
    if (!updates_.contains(call.command)) throw ConfigError("unknown update command '" + call.command + "'");
    try {
      apply_update(next, call);
    } catch (const std::exception& ex) {
      throw EngineError("effect of " + e.display() + ": command '" + call.command + "' with args " +
                        call.args.dump() + " failed: " + ex.what());
    }
    if (changed) *changed = true;
  }
  return next;
}

QueryDelta diff_results(const std::vector<QueryResult>& before, const std::vector<QueryResult>& after) {
  QueryDelta d;
  auto b = before.begin();
  auto a = after.begin();
  while (b != before.end() || a != after.end()) {
    if (a == after.end() || (b != before.end() && b->key < a->key)) {
      d.removed.push_back(*b++);
    } else if (b == before.end() || a->key < b->key) {
      d.added.push_back(*a++);
    } else {
      ++a;
      ++b;
    }
  }
  return d;
}

QueryDiff diff_queries(const ContextStore& before, const ContextStore& after, const Repository& repo,
                       const std::vector<QueryBinding>& bindings) {
  QueryDiff diff;
  for (const auto& q : bindings) {
    diff[q.id()] = diff_results(repo.run_query(before, q), repo.run_query(after, q));
  }
  return diff;
}

}  // namespace cobp
