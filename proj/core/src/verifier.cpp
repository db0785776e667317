#include "cobp/verifier.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace cobp {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::int64_t parent;
  std::optional<Event> event;
};

struct Frame {
  EngineState st;
  std::size_t node;
  std::uint64_t depth;
};

std::vector<Event> path_to(const std::vector<Node>& nodes, std::int64_t node) {
  std::vector<Event> out;
  for (; node >= 0; node = nodes[static_cast<std::size_t>(node)].parent) {
    const auto& n = nodes[static_cast<std::size_t>(node)];
    if (n.event) out.push_back(*n.event);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

const Assertion* first_failed(const std::vector<Assertion>& assertions, const EngineState& st, const Event* last) {
  for (const auto& a : assertions) {
    if (!a.holds(st, last)) return &a;
  }
  return nullptr;
}

}  // namespace

void Limits::validate() const {
  if (max_states == 0 || max_depth == 0 || max_traces == 0) throw ConfigError("verifier limits must be positive");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::deadlock: return "deadlock";
    case Outcome::violation: return "violation";
    case Outcome::bound_exceeded: return "boundExceeded";
  }
  return "unknown";
}

Value Verdict::to_json() const {
  Value cex = Value::array();
  for (const auto& e : counterexample) cex.push_back(e);
  Value j = {{"outcome", to_string(outcome)},
             {"statesVisited", states_visited},
             {"elapsedMs", elapsed.count()},
             {"counterexample", std::move(cex)}};
  if (outcome == Outcome::violation) j["violated"] = violated;
  return j;
}

std::string state_key(const EngineState& st) {
  // Unit and record separators keep the fields unambiguous.
  std::string text = st.ctx.canonical_text();
  for (const auto& [id, c] : st.copies) {
    text += '\x1d';
    text += c.cbt->name;
    text += '\x1f';
    text += std::to_string(c.state);
    text += '\x1f';
    text += c.seed.key;
    text += '\x1f';
    text += c.seed_text.empty() ? c.seed.value.dump() : c.seed_text;
    text += '\x1f';
    if (c.pending) text += c.pending->canonical_text();
  }
  text += '\x1c';
  for (const auto& e : st.pending_notices) text += Value(e).dump() + '\x1e';
  text += '\x1c';
  for (const auto& e : st.external_queue) text += Value(e).dump() + '\x1e';
  return sha256_hex(text);
}

std::shared_ptr<const Program> with_env(const Program& program, const std::vector<CbtPtr>& env_model) {
  auto p = std::make_shared<Program>(program);
  p->cbts.insert(p->cbts.end(), env_model.begin(), env_model.end());
  return p;
}

Verifier::Verifier(std::shared_ptr<const Program> program, ContextStore ctx_init)
    : engine_(std::move(program), Arbiter::first_lexicographic()), ctx_init_(std::move(ctx_init)) {}

void Verifier::finish(Verdict& v) const {
  if (v.outcome == Outcome::deadlock || v.outcome == Outcome::violation) {
    EngineState st = engine_.initialize(ctx_init_);
    v.trace = engine_.replay(st, v.counterexample);
  }
}

Verdict Verifier::dfs(const std::vector<Assertion>& assertions, const Limits& limits, bool stop_on_deadlock,
                      std::set<std::string>* keys) const {
  limits.validate();
  Verdict v;
  std::vector<Node> nodes;
  std::unordered_set<std::string> visited;

  EngineState init = engine_.initialize(ctx_init_);
  visited.insert(state_key(init));
  nodes.push_back({-1, std::nullopt});
  if (const auto* failed = first_failed(assertions, init, nullptr)) {
    v.outcome = Outcome::violation;
    v.violated = failed->name;
    v.states_visited = 1;
    return v;
  }

  std::vector<Frame> stack;
  stack.push_back({std::move(init), 0, 0});
  bool depth_cut = false;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    Choices ch = engine_.choices(f.st);
    if (ch.status == StepStatus::deadlock && stop_on_deadlock) {
      v.outcome = Outcome::deadlock;
      v.counterexample = path_to(nodes, static_cast<std::int64_t>(f.node));
      v.states_visited = visited.size();
      return v;
    }
    if (ch.options.empty()) continue;
    if (f.depth >= limits.max_depth) {
      depth_cut = true;
      continue;
    }
    std::vector<Frame> kids;
    for (const auto& opt : ch.options) {
      EngineState child = f.st;
      engine_.fire(child, opt);
      if (const auto* failed = first_failed(assertions, child, &opt.event)) {
        v.outcome = Outcome::violation;
        v.violated = failed->name;
        v.counterexample = path_to(nodes, static_cast<std::int64_t>(f.node));
        v.counterexample.push_back(opt.event);
        v.states_visited = visited.size();
        return v;
      }
      std::string key = state_key(child);
      if (!visited.insert(key).second) continue;
      if (visited.size() > limits.max_states) {
        v.outcome = Outcome::bound_exceeded;
        v.states_visited = visited.size();
        return v;
      }
      if (keys) keys->insert(std::move(key));
      nodes.push_back({static_cast<std::int64_t>(f.node), opt.event});
      kids.push_back({std::move(child), nodes.size() - 1, f.depth + 1});
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }
  v.outcome = depth_cut ? Outcome::bound_exceeded : Outcome::ok;
  v.states_visited = visited.size();
  return v;
}

Verdict Verifier::bfs(const std::vector<Assertion>& assertions, const Limits& limits, unsigned workers) const {
  limits.validate();
  workers = std::max(1u, workers);
  Verdict v;
  std::vector<Node> nodes;
  std::unordered_set<std::string> visited;

  EngineState init = engine_.initialize(ctx_init_);
  visited.insert(state_key(init));
  nodes.push_back({-1, std::nullopt});
  if (const auto* failed = first_failed(assertions, init, nullptr)) {
    v.outcome = Outcome::violation;
    v.violated = failed->name;
    v.states_visited = 1;
    return v;
  }

  struct Kid {
    EngineState st;
    Event event;
    std::string key;
    const Assertion* failed;
  };
  struct Expansion {
    bool deadlock = false;
    std::vector<Kid> kids;
    std::exception_ptr error;
  };

  std::vector<Frame> frontier;
  frontier.push_back({std::move(init), 0, 0});
  bool depth_cut = false;
  while (!frontier.empty()) {
    std::vector<Expansion> ex(frontier.size());
    auto expand = [&](std::size_t i) {
      try {
        const Frame& f = frontier[i];
        Choices ch = engine_.choices(f.st);
        if (ch.status == StepStatus::deadlock) {
          ex[i].deadlock = true;
          return;
        }
        if (f.depth >= limits.max_depth) return;
        for (const auto& opt : ch.options) {
          EngineState child = f.st;
          engine_.fire(child, opt);
          const Assertion* failed = first_failed(assertions, child, &opt.event);
          std::string key = state_key(child);
          ex[i].kids.push_back({std::move(child), opt.event, std::move(key), failed});
        }
      } catch (...) {
        ex[i].error = std::current_exception();
      }
    };
    const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(frontier.size()));
    if (n <= 1) {
      for (std::size_t i = 0; i < frontier.size(); ++i) expand(i);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < frontier.size(); i += n) expand(i);
        });
      }
      for (auto& t : pool) t.join();
    }

    // Merge in frontier order so the verdict does not depend on worker count.
    std::vector<Frame> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (ex[i].error) std::rethrow_exception(ex[i].error);
      const Frame& f = frontier[i];
      if (ex[i].deadlock) {
        v.outcome = Outcome::deadlock;
        v.counterexample = path_to(nodes, static_cast<std::int64_t>(f.node));
        v.states_visited = visited.size();
        return v;
      }
      if (f.depth >= limits.max_depth && ex[i].kids.empty() && !engine_.choices(f.st).options.empty()) {
        depth_cut = true;
      }
      for (auto& kid : ex[i].kids) {
        if (kid.failed) {
          v.outcome = Outcome::violation;
          v.violated = kid.failed->name;
          v.counterexample = path_to(nodes, static_cast<std::int64_t>(f.node));
          v.counterexample.push_back(kid.event);
          v.states_visited = visited.size();
          return v;
        }
        if (!visited.insert(kid.key).second) continue;
        if (visited.size() > limits.max_states) {
          v.outcome = Outcome::bound_exceeded;
          v.states_visited = visited.size();
          return v;
        }
        nodes.push_back({static_cast<std::int64_t>(f.node), kid.event});
        next.push_back({std::move(kid.st), nodes.size() - 1, f.depth + 1});
      }
    }
    frontier = std::move(next);
  }
  v.outcome = depth_cut ? Outcome::bound_exceeded : Outcome::ok;
  v.states_visited = visited.size();
  return v;
}

Verdict Verifier::verify(const std::vector<Assertion>& assertions, const VerifyOptions& options) const {
  const auto t0 = Clock::now();
  Verdict v = options.order == SearchOrder::bfs ? bfs(assertions, options.limits, options.workers)
                                                : dfs(assertions, options.limits, true, nullptr);
  finish(v);
  v.elapsed = Clock::now() - t0;
  return v;
}

std::uint64_t Verifier::count_states(const Limits& limits) const {
  Verdict v = dfs({}, limits, false, nullptr);
  if (v.outcome == Outcome::bound_exceeded) {
    throw BoundExceeded("state count exceeds limits (" + std::to_string(v.states_visited) + " states seen)");
  }
  return v.states_visited;
}

std::set<std::string> Verifier::reachable_keys(const Limits& limits) const {
  std::set<std::string> keys;
  keys.insert(state_key(engine_.initialize(ctx_init_)));
  Verdict v = dfs({}, limits, false, &keys);
  if (v.outcome == Outcome::bound_exceeded) throw BoundExceeded("reachable state set exceeds limits");
  return keys;
}

std::set<std::vector<std::string>> Verifier::enumerate_maximal_traces(const Limits& limits) const {
  limits.validate();
  // Build the pruned state graph first, then enumerate its paths without
  // touching the engine again.
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> label_ids;
  std::vector<std::vector<std::pair<int, int>>> edges;  // (label, target)
  std::unordered_map<std::string, int> ids;

  auto intern = [&](const std::string& s) {
    auto [it, fresh] = label_ids.emplace(s, static_cast<int>(labels.size()));
    if (fresh) labels.push_back(s);
    return it->second;
  };

  std::vector<std::pair<EngineState, int>> work;
  EngineState init = engine_.initialize(ctx_init_);
  ids.emplace(state_key(init), 0);
  edges.emplace_back();
  work.emplace_back(std::move(init), 0);
  while (!work.empty()) {
    auto [st, id] = std::move(work.back());
    work.pop_back();
    for (const auto& opt : engine_.choices(st).options) {
      EngineState child = st;
      engine_.fire(child, opt);
      auto [it, fresh] = ids.emplace(state_key(child), static_cast<int>(edges.size()));
      if (fresh) {
        if (edges.size() >= limits.max_states) throw BoundExceeded("trace enumeration exceeds max states");
        edges.emplace_back();
        work.emplace_back(std::move(child), it->second);
      }
      edges[static_cast<std::size_t>(id)].emplace_back(intern(opt.event.display()), it->second);
    }
  }

  std::set<std::vector<std::string>> traces;
  std::vector<int> path;
  struct Cursor {
    int node;
    std::size_t next_edge;
  };
  std::vector<Cursor> stack{{0, 0}};
  while (!stack.empty()) {
    Cursor& c = stack.back();
    const auto& out = edges[static_cast<std::size_t>(c.node)];
    if (out.empty()) {
      std::vector<std::string> t;
      t.reserve(path.size());
      for (int l : path) t.push_back(labels[static_cast<std::size_t>(l)]);
      traces.insert(std::move(t));
      if (traces.size() > limits.max_traces) throw BoundExceeded("too many maximal traces");
    }
    if (c.next_edge >= out.size()) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const auto [label, target] = out[c.next_edge++];
    if (path.size() >= limits.max_depth) throw BoundExceeded("trace longer than max depth (cycle?)");
    path.push_back(label);
    stack.push_back({target, 0});
  }
  return traces;
}

Verdict verify(const Program& program, const ContextStore& ctx_init, const std::vector<CbtPtr>& env_model,
               const std::vector<Assertion>& assertions, const VerifyOptions& options) {
  return Verifier(with_env(program, env_model), ctx_init).verify(assertions, options);
}

std::uint64_t count_states(const Program& program, const ContextStore& ctx_init, const std::vector<CbtPtr>& env_model,
                           const Limits& limits) {
  return Verifier(with_env(program, env_model), ctx_init).count_states(limits);
}

std::set<std::vector<std::string>> enumerate_maximal_traces(const Program& program, const ContextStore& ctx_init,
                                                            const std::vector<CbtPtr>& env_model,
                                                            const Limits& limits) {
  return Verifier(with_env(program, env_model), ctx_init).enumerate_maximal_traces(limits);
}

}  // namespace cobp
