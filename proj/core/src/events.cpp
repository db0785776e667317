#include "cobp/events.hpp"

#include <algorithm>
#include <variant>

namespace cobp {

namespace {

std::string scalar_text(const Value& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

Event::Event(std::string label, Value payload)
    : Event(EventNamespace::program, std::move(label), std::move(payload)) {}

Event::Event(EventNamespace ns, std::string label, Value payload)
    : ns_(ns), label_(std::move(label)), payload_(std::move(payload)), payload_text_(payload_.dump()) {
  if (label_.empty()) throw ConfigError("event label must not be empty");
}

Event Event::ended(std::string_view query, std::string_view key, const Value& params) {
  Value payload = {{"query", std::string(query)}, {"key", std::string(key)}};
  if (!params.is_null() && !params.empty()) payload["params"] = params;
  return Event(EventNamespace::context, std::string(kEndedLabel), std::move(payload));
}

std::string Event::display() const {
  if (payload_.is_null()) return label_;
  std::string out = label_ + "(";
  if (is_context() && payload_.is_object()) {
    out += scalar_text(payload_.at("query")) + "," + scalar_text(payload_.at("key"));
    if (payload_.contains("params")) out += "," + payload_.at("params").dump();
  } else if (payload_.is_array() || payload_.is_object()) {
    bool first = true;
    for (const auto& item : payload_) {
      if (!first) out += ",";
      first = false;
      out += scalar_text(item);
    }
  } else {
    out += scalar_text(payload_);
  }
  return out + ")";
}

std::strong_ordering operator<=>(const Event& a, const Event& b) noexcept {
  if (auto c = a.label_ <=> b.label_; c != 0) return c;
  if (auto c = a.payload_text_ <=> b.payload_text_; c != 0) return c;
  return a.ns_ <=> b.ns_;
}

void to_json(Value& j, const Event& e) {
  j = Value{{"ns", e.is_context() ? "context" : "program"}, {"label", e.label()}, {"payload", e.payload()}};
}

Event event_from_json(const Value& j) {
  if (!j.is_object() || !j.contains("label") || !j["label"].is_string()) {
    throw ConfigError("event JSON needs a string 'label': " + j.dump());
  }
  const std::string ns = j.value("ns", std::string("program"));
  Value payload = j.value("payload", Value());
  if (ns == "program") return Event(j["label"].get<std::string>(), std::move(payload));
  if (ns == "context" && j["label"] == Event::kEndedLabel && payload.is_object() &&
      payload.contains("query") && payload.contains("key")) {
    return Event::ended(payload["query"].get<std::string>(), payload["key"].get<std::string>(),
                        payload.value("params", Value()));
  }
  throw ConfigError("unsupported event JSON: " + j.dump());
}

// ---------------------------------------------------------------------------
// PredicateRegistry

PredicateRegistry::PredicateRegistry() {
  add("prefix", [](const Value& payload, const Value& arg) {
    if (!payload.is_array() || !arg.is_array() || arg.size() > payload.size()) return false;
    return std::equal(arg.begin(), arg.end(), payload.begin());
  });
  add("fields", [](const Value& payload, const Value& arg) {
    if (!payload.is_object() || !arg.is_object()) return false;
    for (const auto& [k, v] : arg.items()) {
      auto it = payload.find(k);
      if (it == payload.end() || *it != v) return false;
    }
    return true;
  });
}

void PredicateRegistry::add(std::string id, Predicate predicate) {
  if (id.empty()) throw ConfigError("predicate id must not be empty");
  if (!predicates_.emplace(id, std::move(predicate)).second) {
    throw ConfigError("duplicate payload predicate '" + id + "'");
  }
}

const PredicateRegistry::Predicate& PredicateRegistry::get(const std::string& id) const {
  auto it = predicates_.find(id);
  if (it == predicates_.end()) throw ConfigError("unknown payload predicate '" + id + "'");
  return it->second;
}

const PredicateRegistry& PredicateRegistry::builtin() {
  static const PredicateRegistry registry;
  return registry;
}

// ---------------------------------------------------------------------------
// EventSet

struct EventSet::Node {
  struct Explicit {
    std::vector<Event> events;  // sorted, unique
  };
  struct All {};
  struct None {};
  struct Complement {
    EventSet inner;
  };
  struct Union {
    std::vector<EventSet> members;
  };
  struct LabelMatch {
    std::string label;
    std::string predicate;
    Value arg;
  };
  std::variant<Explicit, All, None, Complement, Union, LabelMatch> v;
};

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

EventSet::EventSet() : EventSet(none()) {}

EventSet EventSet::none() {
  static const auto node = std::make_shared<const Node>(Node{Node::None{}});
  return EventSet(node);
}

EventSet EventSet::all() {
  static const auto node = std::make_shared<const Node>(Node{Node::All{}});
  return EventSet(node);
}

EventSet EventSet::of(std::vector<Event> events) {
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  return EventSet(std::make_shared<const Node>(Node{Node::Explicit{std::move(events)}}));
}

EventSet EventSet::of(Event event) { return of(std::vector<Event>{std::move(event)}); }

EventSet EventSet::complement(EventSet inner) {
  return EventSet(std::make_shared<const Node>(Node{Node::Complement{std::move(inner)}}));
}

EventSet EventSet::any_of(std::vector<EventSet> members) {
  return EventSet(std::make_shared<const Node>(Node{Node::Union{std::move(members)}}));
}

EventSet EventSet::label(std::string label, std::string predicate_id, Value arg) {
  return EventSet(std::make_shared<const Node>(
      Node{Node::LabelMatch{std::move(label), std::move(predicate_id), std::move(arg)}}));
}

EventSet EventSet::ended(std::string_view query, std::string_view key, const Value& params) {
  return of(Event::ended(query, key, params));
}

EventSet::Kind EventSet::kind() const noexcept {
  return static_cast<Kind>(node_->v.index());
}

const std::vector<Event>* EventSet::explicit_events() const noexcept {
  const auto* x = std::get_if<Node::Explicit>(&node_->v);
  return x ? &x->events : nullptr;
}

bool EventSet::matches(const Event& e, const PredicateRegistry& predicates) const {
  return std::visit(
      overloaded{
          [&](const Node::Explicit& x) { return std::binary_search(x.events.begin(), x.events.end(), e); },
          [](const Node::All&) { return true; },
          [](const Node::None&) { return false; },
          [&](const Node::Complement& x) { return !x.inner.matches(e, predicates); },
          [&](const Node::Union& x) {
            return std::any_of(x.members.begin(), x.members.end(),
                               [&](const EventSet& m) { return m.matches(e, predicates); });
          },
          [&](const Node::LabelMatch& x) {
            if (x.predicate.empty()) return e.label() == x.label;
            // Resolve first so an unknown id is reported even on a label miss.
            const auto& pred = predicates.get(x.predicate);
            return e.label() == x.label && pred(e.payload(), x.arg);
          },
      },
      node_->v);
}

Value EventSet::to_json() const {
  return std::visit(overloaded{
                        [](const Node::Explicit& x) {
                          Value events = Value::array();
                          for (const auto& e : x.events) events.push_back(e);
                          return Value{{"explicit", std::move(events)}};
                        },
                        [](const Node::All&) { return Value("all"); },
                        [](const Node::None&) { return Value("none"); },
                        [](const Node::Complement& x) { return Value{{"not", x.inner.to_json()}}; },
                        [](const Node::Union& x) {
                          Value members = Value::array();
                          for (const auto& m : x.members) members.push_back(m.to_json());
                          return Value{{"union", std::move(members)}};
                        },
                        [](const Node::LabelMatch& x) {
                          return Value{{"label", x.label}, {"predicate", x.predicate}, {"arg", x.arg}};
                        },
                    },
                    node_->v);
}

// ---------------------------------------------------------------------------
// SyncStatement

namespace {

std::vector<Event> dedupe_keep_order(std::vector<Event> events) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (auto& e : events) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

SyncStatement::SyncStatement() : SyncStatement({}, EventSet::none(), EventSet::none()) {}

SyncStatement::SyncStatement(std::vector<Event> requested, EventSet waited_for, EventSet blocked)
    : requested_(dedupe_keep_order(std::move(requested))),
      waited_for_(std::move(waited_for)),
      blocked_(std::move(blocked)),
      text_(std::make_shared<const std::string>(to_json().dump())) {}

SyncStatement SyncStatement::requesting(std::vector<Event> events) const {
  return SyncStatement(std::move(events), waited_for_, blocked_);
}

SyncStatement SyncStatement::waiting_for(EventSet set) const {
  return SyncStatement(requested_, std::move(set), blocked_);
}

SyncStatement SyncStatement::blocking(EventSet set) const {
  return SyncStatement(requested_, waited_for_, std::move(set));
}

bool SyncStatement::resumes_on(const Event& e, const PredicateRegistry& predicates) const {
  return std::find(requested_.begin(), requested_.end(), e) != requested_.end() ||
         waited_for_.matches(e, predicates);
}

Value SyncStatement::to_json() const {
  Value req = Value::array();
  for (const auto& e : requested_) req.push_back(e);
  return Value{{"request", std::move(req)}, {"waitFor", waited_for_.to_json()}, {"block", blocked_.to_json()}};
}

BlockIndex::BlockIndex(const std::vector<SyncStatement>& statements) {
  for (const auto& s : statements) {
    const auto& b = s.blocked();
    if (const auto* events = b.explicit_events()) {
      events_.insert(events_.end(), events->begin(), events->end());
    } else if (b.kind() != EventSet::Kind::none) {
      others_.push_back(b);
    }
  }
  std::sort(events_.begin(), events_.end());
  events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
}

bool BlockIndex::blocks(const Event& e, const PredicateRegistry& predicates) const {
  if (std::binary_search(events_.begin(), events_.end(), e)) return true;
  return std::any_of(others_.begin(), others_.end(), [&](const EventSet& s) { return s.matches(e, predicates); });
}

std::vector<Event> selectable(const std::vector<SyncStatement>& statements, const PredicateRegistry& predicates) {
  std::vector<Event> candidates;
  for (const auto& s : statements) {
    candidates.insert(candidates.end(), s.requested().begin(), s.requested().end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const BlockIndex index(statements);
  std::erase_if(candidates, [&](const Event& e) { return index.blocks(e, predicates); });
  return candidates;
}

}  // namespace cobp
