#include "cobp/cli/cli.hpp"

#include "cobp/examples/registry.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace cobp::cli {

namespace {

Value read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read context file " + path);
  try {
    return Value::parse(in);
  } catch (const Value::parse_error& e) {
    throw ConfigError("malformed context file " + path + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write " + path);
  return os;
}

Arbiter make_arbiter(const std::string& name, const examples::ExampleProgram& ex) {
  if (name == "random") return Arbiter::seeded_random();
  if (name == "first") return Arbiter::first_lexicographic();
  return Arbiter::priority(ex.priority_ranks);
}

ContextStore initial_context(const examples::ExampleProgram& ex, const std::optional<std::string>& path) {
  if (!path) return ex.ctx_init;
  spdlog::debug("context override from {}", *path);
  return ex.ctx_from_json(read_json(*path));
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::quiescent:
    case RunStatus::stopped: return kOk;
    case RunStatus::deadlock: return kDeadlock;
    case RunStatus::max_steps: return kStepLimit;
  }
  return kError;
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::ok: return kOk;
    case Outcome::deadlock: return kDeadlock;
    case Outcome::violation: return kViolation;
    case Outcome::bound_exceeded: return kBoundExceeded;
  }
  return kError;
}

void RunConfig::validate() const {
  if (max_steps == 0) throw ConfigError("--max-steps must be positive");
  if (arbiter != "random" && arbiter != "first" && arbiter != "priority") {
    throw ConfigError("unknown arbiter '" + arbiter + "' (random, first, priority)");
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto ex = examples::make_example(cfg.example);
    const ContextStore ctx = initial_context(ex, cfg.ctx_path);
    const Engine engine(ex.runnable(), make_arbiter(cfg.arbiter, ex));
    spdlog::info("run {} seed={} arbiter={} max-steps={}", ex.name, cfg.seed, cfg.arbiter, cfg.max_steps);

    EngineState st = engine.initialize(ctx, cfg.seed);
    const Trace trace = engine.run(st, cfg.max_steps, nullptr, cfg.snapshots);
    if (cfg.trace_path) {
      auto os = open_out(*cfg.trace_path);
      trace.write_jsonl(os);
    }
    out << ex.name << ": " << to_string(trace.status) << " after " << st.step_count << " steps, "
        << trace.events().size() << " events\n";
    out << "initial digest " << ctx.digest() << "\n";
    out << "final digest   " << st.ctx.digest() << "\n";
    return exit_code(trace.status);
  });
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.limits.validate();
    if (cfg.workers == 0) throw ConfigError("--workers must be positive");
    const auto ex = examples::make_example(cfg.example);
    const ContextStore ctx = initial_context(ex, cfg.ctx_path);
    VerifyOptions opts;
    opts.limits = cfg.limits;
    opts.workers = cfg.workers;
    opts.order = cfg.workers > 1 ? SearchOrder::bfs : SearchOrder::dfs;
    spdlog::info("verify {} max-states={} depth={} workers={}", ex.name, cfg.limits.max_states, cfg.limits.max_depth,
                 cfg.workers);

    const Verdict v = verify(*ex.program, ctx, ex.env_model, ex.assertions, opts);
    if (cfg.report_path) {
      auto os = open_out(*cfg.report_path);
      os << v.to_json().dump(2) << "\n";
    }
    if (cfg.trace_path && v.trace) {
      auto os = open_out(*cfg.trace_path);
      v.trace->write_jsonl(os);
    }
    out << ex.name << ": " << to_string(v.outcome);
    if (v.outcome == Outcome::violation) out << " of " << v.violated;
    out << ", " << v.states_visited << " states\n";
    if (!v.counterexample.empty()) {
      out << "counterexample:";
      for (const auto& e : v.counterexample) out << " " << e.display();
      out << "\n";
    }
    return exit_code(v.outcome);
  });
}

int cmd_list(std::ostream& out) {
  for (const auto& e : examples::registry()) out << e.name << "\t" << e.description << "\n";
  return kOk;
}

void init_logging() {
  auto logger = spdlog::stderr_color_mt("cobp");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("COBP_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace cobp::cli
