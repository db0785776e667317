#pragma once

#include "cobp/value.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cobp {

enum class EventNamespace { program, context };

/// A named occurrence with a structured payload. Equality and ordering are
/// structural over (namespace, label, payload).
///
/// The public constructor always yields a program-namespace event. The only
/// context-namespace event is the engine's `CTX.Ended` notice, built by
/// `Event::ended`; the engine refuses such events when they are requested by a
/// live copy or pushed as external input.
class Event {
 public:
  static constexpr std::string_view kEndedLabel = "CTX.Ended";

  explicit Event(std::string label, Value payload = nullptr);

  /// Notice that `key` no longer answers `query` (with `params`, if any).
  static Event ended(std::string_view query, std::string_view key, const Value& params = nullptr);

  EventNamespace ns() const noexcept { return ns_; }
  const std::string& label() const noexcept { return label_; }
  const Value& payload() const noexcept { return payload_; }
  bool is_context() const noexcept { return ns_ == EventNamespace::context; }

  /// Compact human form used in trace sets: `label`, `label(a,b)` for array
  /// payloads, `label(v1,v2)` (values in key order) for objects, and
  /// `CTX.Ended(query,key)` for notices.
  std::string display() const;

  friend bool operator==(const Event& a, const Event& b) noexcept {
    return a.ns_ == b.ns_ && a.label_ == b.label_ && a.payload_text_ == b.payload_text_;
  }
  friend std::strong_ordering operator<=>(const Event& a, const Event& b) noexcept;

 private:
  Event(EventNamespace ns, std::string label, Value payload);

  EventNamespace ns_ = EventNamespace::program;
  std::string label_;
  Value payload_;
  std::string payload_text_;  // cached canonical dump of payload_
};

void to_json(Value& j, const Event& e);
/// Accepts program events and well-formed `CTX.Ended` notices only.
Event event_from_json(const Value& j);

/// Payload predicates referenced by id from label matchers. Keeping the
/// predicate out of the matcher keeps EventSet serializable.
class PredicateRegistry {
 public:
  using Predicate = std::function<bool(const Value& payload, const Value& arg)>;

  /// Registry preloaded with the built-in predicates:
  ///   "prefix": payload is an array starting with the elements of `arg`;
  ///   "fields": payload is an object containing every key/value of `arg`.
  PredicateRegistry();

  void add(std::string id, Predicate predicate);
  bool contains(const std::string& id) const { return predicates_.contains(id); }
  /// Throws ConfigError for an unknown id.
  const Predicate& get(const std::string& id) const;

  static const PredicateRegistry& builtin();

 private:
  std::map<std::string, Predicate> predicates_;
};

/// Declarative event matcher used for waited-for and blocked sets.
class EventSet {
 public:
  enum class Kind { explicit_set, all, none, complement, union_of, label_match };

  /// Defaults to the empty matcher.
  EventSet();

  static EventSet none();
  static EventSet all();
  static EventSet of(std::vector<Event> events);
  static EventSet of(Event event);
  static EventSet complement(EventSet inner);
  static EventSet any_of(std::vector<EventSet> members);
  /// Matches events with `label`; when `predicate_id` is non-empty the payload
  /// must also satisfy the registered predicate applied with `arg`.
  static EventSet label(std::string label, std::string predicate_id = {}, Value arg = nullptr);
  /// Matches the `CTX.Ended` notice for (query, key, params).
  static EventSet ended(std::string_view query, std::string_view key, const Value& params = nullptr);

  Kind kind() const noexcept;
  /// The sorted members of an explicit set, nullptr for any other kind.
  const std::vector<Event>* explicit_events() const noexcept;

  /// Total membership test. Throws ConfigError for an unknown predicate id.
  bool matches(const Event& e, const PredicateRegistry& predicates = PredicateRegistry::builtin()) const;

  /// Stable structural encoding (used for state hashing).
  Value to_json() const;

  EventSet operator|(const EventSet& other) const { return any_of({*this, other}); }
  EventSet operator~() const { return complement(*this); }

 private:
  struct Node;
  explicit EventSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline bool matches(const EventSet& set, const Event& e,
                    const PredicateRegistry& predicates = PredicateRegistry::builtin()) {
  return set.matches(e, predicates);
}

/// One live copy's bid at a synchronization point.
class SyncStatement {
 public:
  SyncStatement();
  /// Duplicate requests are dropped, keeping first occurrences in order.
  SyncStatement(std::vector<Event> requested, EventSet waited_for, EventSet blocked);

  const std::vector<Event>& requested() const noexcept { return requested_; }
  const EventSet& waited_for() const noexcept { return waited_for_; }
  const EventSet& blocked() const noexcept { return blocked_; }

  SyncStatement requesting(std::vector<Event> events) const;
  SyncStatement waiting_for(EventSet set) const;
  SyncStatement blocking(EventSet set) const;

  /// True iff a live copy paused on this statement resumes on `e`.
  bool resumes_on(const Event& e, const PredicateRegistry& predicates = PredicateRegistry::builtin()) const;
  bool blocks(const Event& e, const PredicateRegistry& predicates = PredicateRegistry::builtin()) const {
    return blocked_.matches(e, predicates);
  }

  Value to_json() const;
  /// Serialized to_json(), computed once at construction.
  const std::string& canonical_text() const noexcept { return *text_; }

 private:
  std::vector<Event> requested_;
  EventSet waited_for_;
  EventSet blocked_;
  std::shared_ptr<const std::string> text_;
};

/// Union of the blocked sets of a group of statements. Explicit sets are
/// merged into one sorted list; the rest are tested one by one.
class BlockIndex {
 public:
  explicit BlockIndex(const std::vector<SyncStatement>& statements);
  bool blocks(const Event& e, const PredicateRegistry& predicates = PredicateRegistry::builtin()) const;

 private:
  std::vector<Event> events_;
  std::vector<EventSet> others_;
};

/// Requested events not blocked by any statement, sorted and deduplicated.
std::vector<Event> selectable(const std::vector<SyncStatement>& statements,
                              const PredicateRegistry& predicates = PredicateRegistry::builtin());

}  // namespace cobp
