#include "cobp/engine.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace cobp {

std::vector<QueryBinding> Program::bindings() const {
  std::vector<QueryBinding> out;
  std::set<std::string> seen;
  for (const auto& cbt : cbts) {
    auto b = cbt->binding();
    if (seen.insert(b.id()).second) out.push_back(std::move(b));
  }
  return out;
}

std::size_t Arbiter::pick(const std::vector<Event>& options, Rng& rng) const {
  if (options.empty()) throw EngineError("arbiter called with no selectable events");
  switch (kind_) {
    case Kind::seeded_random:
      return static_cast<std::size_t>(rng() % options.size());
    case Kind::first_lexicographic:
      return 0;
    case Kind::priority: {
      std::size_t best = 0;
      int best_rank = std::numeric_limits<int>::max();
      for (std::size_t i = 0; i < options.size(); ++i) {
        auto it = ranks_.find(options[i].label());
        int rank = it == ranks_.end() ? std::numeric_limits<int>::max() : it->second;
        if (rank < best_rank) {
          best = i;
          best_rank = rank;
        }
      }
      return best;
    }
  }
  return 0;
}

void ExternalInbox::post(Event e) {
  if (e.is_context()) throw ConfigError("context-namespace events cannot be posted externally: " + e.display());
  std::lock_guard lock(mu_);
  events_.push_back(std::move(e));
}

std::vector<Event> ExternalInbox::drain() {
  std::lock_guard lock(mu_);
  return std::exchange(events_, {});
}

Engine::Engine(std::shared_ptr<const Program> program, Arbiter arbiter)
    : program_(std::move(program)), arbiter_(std::move(arbiter)) {
  if (!program_) throw ConfigError("engine needs a program");
  std::set<std::string> names;
  for (const auto& cbt : program_->cbts) {
    if (!cbt || !cbt->step) throw ConfigError("CBT without a step function");
    if (!names.insert(cbt->name).second) throw ConfigError("duplicate CBT name '" + cbt->name + "'");
    if (!program_->repo.has_query(cbt->query)) {
      throw ConfigError("CBT '" + cbt->name + "' is bound to unknown query '" + cbt->query + "'");
    }
  }
  bindings_ = program_->bindings();
}

EngineState Engine::initialize(const ContextStore& ctx_init, std::uint64_t seed) const {
  EngineState st;
  st.ctx = ctx_init;
  st.rng.seed(static_cast<Rng::result_type>(seed % Rng::modulus));
  QueryDiff diff;
  for (const auto& b : bindings_) {
    auto r = program_->repo.run_query(st.ctx, b);
    diff[b.id()].added = r;
    st.results[b.id()] = std::move(r);
  }
  for (auto& c : spawn_live_copies(program_->cbts, diff)) {
    if (st.copies.contains(c.id)) throw EngineError("duplicate live copy id '" + c.id + "'");
    st.init_spawned.push_back(c.id);
    if (auto started = start(std::move(c), st.ctx)) {
      std::string id = started->id;
      st.copies.emplace(std::move(id), std::move(*started));
    }
  }
  return st;
}

std::vector<SyncStatement> Engine::statements(const EngineState& st) const {
  std::vector<SyncStatement> out;
  out.reserve(st.copies.size());
  for (const auto& [id, c] : st.copies) {
    if (c.pending) out.push_back(*c.pending);
  }
  return out;
}

Choices Engine::choices(const EngineState& st) const {
  if (!st.pending_notices.empty()) {
    return {StepStatus::progressed, {Choice{Choice::Kind::notice, st.pending_notices.front()}}};
  }
  const auto stmts = statements(st);
  const auto& preds = program_->predicates;
  auto sel = selectable(stmts, preds);
  if (!sel.empty()) {
    Choices out{StepStatus::progressed, {}};
    out.options.reserve(sel.size());
    for (auto& e : sel) out.options.push_back(Choice{Choice::Kind::internal, std::move(e)});
    return out;
  }
  bool any_request = std::any_of(stmts.begin(), stmts.end(), [](const auto& s) { return !s.requested().empty(); });
  if (any_request) return {StepStatus::deadlock, {}};
  for (const auto& e : st.external_queue) {
    bool blocked = std::any_of(stmts.begin(), stmts.end(), [&](const auto& s) { return s.blocks(e, preds); });
    if (!blocked) return {StepStatus::super_step, {Choice{Choice::Kind::external, e}}};
  }
  return {StepStatus::quiescent, {}};
}

Transition Engine::fire(EngineState& st, const Choice& choice) const {
  const auto& preds = program_->predicates;
  const Event& e = choice.event;
  const std::string where = "at step " + std::to_string(st.step_count + 1) + " (" + e.display() + "): ";
  Transition t{e, choice.kind, {}, {}};

  switch (choice.kind) {
    case Choice::Kind::notice:
      if (st.pending_notices.empty() || st.pending_notices.front() != e) {
        throw EngineError(where + "notice is not at the head of the queue");
      }
      st.pending_notices.pop_front();
      break;
    case Choice::Kind::external: {
      auto it = std::find(st.external_queue.begin(), st.external_queue.end(), e);
      if (it == st.external_queue.end()) throw EngineError(where + "external event is not queued");
      st.external_queue.erase(it);
      break;
    }
    case Choice::Kind::internal: {
      bool requested = false;
      for (const auto& [id, c] : st.copies) {
        if (!c.pending) continue;
        const auto& req = c.pending->requested();
        requested = requested || std::find(req.begin(), req.end(), e) != req.end();
        if (c.pending->blocks(e, preds)) throw EngineError(where + "selected event is blocked by '" + id + "'");
      }
      if (!requested) throw EngineError(where + "selected event is not requested");
      break;
    }
  }

  try {
    bool changed = false;
    ContextStore next = choice.kind == Choice::Kind::notice ? st.ctx : program_->repo.apply_effect(st.ctx, e, &changed);

    QueryDiff diff;
    if (changed) {
      for (const auto& b : bindings_) {
        const std::string id = b.id();
        auto now = program_->repo.run_query(next, b);
        auto d = diff_results(st.results[id], now);
        for (const auto& r : d.removed) {
          st.pending_notices.push_back(Event::ended(b.query, r.key, b.params));
          t.ended_keys.push_back(id + ":" + r.key);
        }
        diff[id] = std::move(d);
        st.results[id] = std::move(now);
      }
    }
    st.ctx = std::move(next);

    for (auto it = st.copies.begin(); it != st.copies.end();) {
      if (!resumes_on(it->second, e, preds)) {
        ++it;
        continue;
      }
      if (auto moved = advance(it->second, e, st.ctx, preds)) {
        it->second = std::move(*moved);
        ++it;
      } else {
        it = st.copies.erase(it);
      }
    }

    if (changed) {
      for (auto& c : spawn_live_copies(program_->cbts, diff)) {
        if (st.copies.contains(c.id)) throw EngineError("duplicate live copy id '" + c.id + "'");
        t.spawned_ids.push_back(c.id);
        if (auto started = start(std::move(c), st.ctx)) {
          std::string id = started->id;
          st.copies.emplace(std::move(id), std::move(*started));
        }
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw EngineError(where + ex.what());
  }
  ++st.step_count;
  return t;
}

TraceEntry Engine::make_entry(const EngineState& before, const std::vector<SyncStatement>& stmts) const {
  TraceEntry entry;
  std::set<Event> req;
  for (const auto& s : stmts) req.insert(s.requested().begin(), s.requested().end());
  const BlockIndex index(stmts);
  std::set<std::string> blocked;
  for (const auto& e : req) {
    if (!blocked.contains(e.label()) && index.blocks(e, program_->predicates)) blocked.insert(e.label());
  }
  entry.requested.assign(req.begin(), req.end());
  entry.blocked_labels.assign(blocked.begin(), blocked.end());
  entry.step = before.step_count;
  entry.ctx_digest = before.ctx.digest();
  return entry;
}

TraceEntry Engine::fire_entry(EngineState& st, const Choice& choice, StepStatus status) const {
  TraceEntry entry = make_entry(st, statements(st));
  Transition t = fire(st, choice);
  entry.step = st.step_count;
  entry.kind = t.kind == Choice::Kind::notice ? "notice" : t.kind == Choice::Kind::internal ? "internal" : "external";
  entry.event = std::move(t.event);
  entry.spawned_ids = std::move(t.spawned_ids);
  entry.ended_keys = std::move(t.ended_keys);
  entry.ctx_digest = st.ctx.digest();
  entry.status = to_string(status);
  return entry;
}

TraceEntry Engine::init_entry(const EngineState& st) const {
  TraceEntry init = make_entry(st, statements(st));
  init.kind = "init";
  init.spawned_ids = st.init_spawned;
  init.status = "init";
  return init;
}

TraceEntry Engine::end_entry(const EngineState& st, RunStatus status) const {
  TraceEntry end = make_entry(st, statements(st));
  end.step = st.step_count + 1;
  end.kind = "end";
  end.status = to_string(status);
  return end;
}

StepResult Engine::step_in_place(EngineState& st) const {
  Choices ch = choices(st);
  if (ch.options.empty()) {
    TraceEntry entry = make_entry(st, statements(st));
    entry.kind = "end";
    entry.status = to_string(ch.status);
    return {std::nullopt, ch.status, std::move(entry)};
  }
  std::size_t idx = 0;
  if (ch.options.front().kind == Choice::Kind::internal) {
    std::vector<Event> events;
    events.reserve(ch.options.size());
    for (const auto& c : ch.options) events.push_back(c.event);
    idx = arbiter_.pick(events, st.rng);
  }
  TraceEntry entry = fire_entry(st, ch.options[idx], ch.status);
  std::optional<Event> e = entry.event;
  return {std::move(e), ch.status, std::move(entry)};
}

std::pair<StepResult, EngineState> Engine::step(const EngineState& st) const {
  EngineState next = st;
  StepResult r = step_in_place(next);
  return {std::move(r), std::move(next)};
}

Trace Engine::run(EngineState& st, std::uint64_t max_steps, ExternalInbox* inbox, bool snapshots) const {
  Trace trace;
  if (st.step_count == 0) {
    trace.entries.push_back(init_entry(st));
    if (snapshots) trace.entries.back().ctx = st.ctx.to_json();
  }
  std::uint64_t taken = 0;
  while (true) {
    if (inbox) {
      for (auto& e : inbox->drain()) enqueue_external(st, std::move(e));
    }
    Choices ch = choices(st);
    if (ch.options.empty()) {
      trace.status = ch.status == StepStatus::deadlock ? RunStatus::deadlock : RunStatus::quiescent;
      break;
    }
    if (taken >= max_steps) {
      trace.status = RunStatus::max_steps;
      break;
    }
    StepResult r = step_in_place(st);
    if (snapshots) r.entry.ctx = st.ctx.to_json();
    trace.entries.push_back(std::move(r.entry));
    ++taken;
  }
  trace.entries.push_back(end_entry(st, trace.status));
  return trace;
}

Trace Engine::replay(EngineState& st, const std::vector<Event>& events) const {
  Trace trace;
  if (st.step_count == 0) trace.entries.push_back(init_entry(st));
  for (const auto& e : events) {
    Choices ch = choices(st);
    auto it = std::find_if(ch.options.begin(), ch.options.end(), [&](const Choice& c) { return c.event == e; });
    if (it == ch.options.end()) throw EngineError("replay: " + e.display() + " is not available");
    trace.entries.push_back(fire_entry(st, *it, ch.status));
  }
  Choices ch = choices(st);
  trace.status = !ch.options.empty()                 ? RunStatus::stopped
                 : ch.status == StepStatus::deadlock ? RunStatus::deadlock
                                                     : RunStatus::quiescent;
  trace.entries.push_back(end_entry(st, trace.status));
  return trace;
}

void Engine::enqueue_external(EngineState& st, Event e) {
  if (e.is_context()) throw ConfigError("context-namespace events cannot be enqueued externally: " + e.display());
  st.external_queue.push_back(std::move(e));
}

}  // namespace cobp
