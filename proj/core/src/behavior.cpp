#include "cobp/behavior.hpp"

#include <algorithm>

namespace cobp {

namespace {

void check_statement(const LiveCopy& copy, const SyncStatement& s) {
  for (const auto& e : s.requested()) {
    if (e.is_context()) {
      throw EngineError("live copy '" + copy.id + "' requested reserved context event " + e.display());
    }
  }
}

std::optional<LiveCopy> run_step(LiveCopy copy, const ContextStore& ctx, const Event* last) {
  StepOutcome out;
  try {
    out = copy.cbt->step(copy.state, copy.seed, ctx, last);
  } catch (const EngineError&) {
    throw;
  } catch (const std::exception& ex) {
    throw EngineError("live copy '" + copy.id + "' failed in state " + std::to_string(copy.state) + ": " + ex.what());
  }
  if (out.is_done()) return std::nullopt;
  check_statement(copy, *out.statement);
  copy.state = out.next;
  copy.pending = std::move(out.statement);
  return copy;
}

bool is_own_end(const LiveCopy& copy, const Event& e) {
  return copy.cbt->interruptible && e.is_context() &&
         e == Event::ended(copy.cbt->query, copy.seed.key, copy.cbt->params);
}

}  // namespace

std::string live_copy_id(const CbtDefinition& cbt, const QueryResult& seed) { return cbt.name + "#" + seed.key; }

std::vector<LiveCopy> spawn_live_copies(const std::vector<CbtPtr>& cbts, const QueryDiff& diff) {
  std::vector<LiveCopy> out;
  for (const auto& cbt : cbts) {
    auto it = diff.find(cbt->binding().id());
    if (it == diff.end()) continue;
    for (const auto& r : it->second.added) {
      out.push_back(LiveCopy{live_copy_id(*cbt, r), cbt, cbt->init_state, r, std::nullopt, r.value.dump()});
    }
  }
  return out;
}

std::optional<LiveCopy> start(LiveCopy copy, const ContextStore& ctx) {
  copy.state = copy.cbt->init_state;
  return run_step(std::move(copy), ctx, nullptr);
}

bool resumes_on(const LiveCopy& copy, const Event& e, const PredicateRegistry& preds) {
  if (!copy.pending) return false;
  return is_own_end(copy, e) || copy.pending->resumes_on(e, preds);
}

std::optional<LiveCopy> advance(const LiveCopy& copy, const Event& e, const ContextStore& ctx_after,
                                const PredicateRegistry& preds) {
  if (!copy.pending) throw EngineError("live copy '" + copy.id + "' is not paused");
  if (is_own_end(copy, e)) return std::nullopt;
  if (!copy.pending->resumes_on(e, preds)) return copy;
  return run_step(copy, ctx_after, &e);
}

std::vector<SyncStatement> collect_statements(const std::vector<LiveCopy>& copies) {
  std::vector<SyncStatement> out;
  out.reserve(copies.size());
  for (const auto& c : copies) {
    if (c.pending) out.push_back(*c.pending);
  }
  return out;
}

StepFn sequence(std::vector<StatementFn> steps, bool loop) {
  auto body = std::make_shared<const std::vector<StatementFn>>(std::move(steps));
  return [body, loop](StateId state, const QueryResult& seed, const ContextStore& ctx, const Event* last) {
    const auto n = static_cast<StateId>(body->size());
    StateId next = last ? state + 1 : state;
    if (next >= n) {
      if (!loop || n == 0) return StepOutcome::done();
      next = 0;
    }
    if (next < 0) throw EngineError("sequence state out of range: " + std::to_string(next));
    return StepOutcome::sync((*body)[static_cast<std::size_t>(next)](seed, ctx), next);
  };
}

StatementFn fixed(SyncStatement s) {
  return [s = std::move(s)](const QueryResult&, const ContextStore&) { return s; };
}

}  // namespace cobp
