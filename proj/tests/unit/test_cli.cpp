#include "cobp/cli/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cobp;
using namespace cobp::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cobp-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Value> jsonl(const fs::path& p) {
  std::vector<Value> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) out.push_back(Value::parse(line));
  return out;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = cmd_run(cfg, out, err);
  return {code, out.str(), err.str()};
}

Result check(const VerifyConfig& cfg) {
  std::ostringstream out, err;
  const int code = cmd_verify(cfg, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExitCodesAreDistinct) {
  EXPECT_EQ(exit_code(RunStatus::quiescent), kOk);
  EXPECT_EQ(exit_code(RunStatus::deadlock), kDeadlock);
  EXPECT_EQ(exit_code(RunStatus::max_steps), kStepLimit);
  EXPECT_EQ(exit_code(Outcome::ok), kOk);
  EXPECT_EQ(exit_code(Outcome::deadlock), kDeadlock);
  EXPECT_EQ(exit_code(Outcome::violation), kViolation);
  EXPECT_EQ(exit_code(Outcome::bound_exceeded), kBoundExceeded);
}

TEST(Cli, RunHotColdWritesSixEventTrace) {
  const auto path = scratch("hot-cold.jsonl");
  RunConfig cfg;
  cfg.example = "hot-cold";
  cfg.seed = 7;
  cfg.trace_path = path.string();
  const auto r = run(cfg);
  EXPECT_EQ(r.code, kOk) << r.err;
  int events = 0;
  for (const auto& j : jsonl(path)) {
    if (!j.at("selectedEvent").is_null()) ++events;
  }
  EXPECT_EQ(events, 6);
}

TEST(Cli, RunCornerDeadlocks) {
  RunConfig cfg;
  cfg.example = "robot-corner";
  EXPECT_EQ(run(cfg).code, kDeadlock);
}

TEST(Cli, RunRobotHitsStepLimit) {
  RunConfig cfg;
  cfg.example = "robot";
  cfg.max_steps = 50;
  EXPECT_EQ(run(cfg).code, kStepLimit);
}

TEST(Cli, BlinkerFromFileReturnsToStart) {
  const auto path = scratch("blinker.jsonl");
  RunConfig cfg;
  cfg.example = "gol";
  cfg.ctx_path = std::string(COBP_TEST_DATA_DIR) + "/blinker.json";
  cfg.max_steps = 1000;
  cfg.trace_path = path.string();
  const auto r = run(cfg);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto entries = jsonl(path);
  ASSERT_GE(entries.size(), 2u);
  EXPECT_EQ(entries.front().at("ctxDigest"), entries.back().at("ctxDigest"));
}

TEST(Cli, RunErrors) {
  RunConfig cfg;
  cfg.example = "no-such-example";
  EXPECT_EQ(run(cfg).code, kError);
  cfg.example = "gol";
  cfg.ctx_path = "/nonexistent/ctx.json";
  const auto r = run(cfg);
  EXPECT_EQ(r.code, kError);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
  cfg.ctx_path.reset();
  cfg.arbiter = "coin";
  EXPECT_EQ(run(cfg).code, kError);
  cfg.arbiter = "first";
  cfg.max_steps = 0;
  EXPECT_EQ(run(cfg).code, kError);
}

TEST(Cli, MalformedContextFile) {
  const auto path = scratch("bad.json");
  std::ofstream(path) << "{not json";
  RunConfig cfg;
  cfg.example = "gol";
  cfg.ctx_path = path.string();
  EXPECT_EQ(run(cfg).code, kError);
}

TEST(Cli, IdenticalConfigsGiveIdenticalTraces) {
  for (const char* name : {"hot-cold", "ext-hot-cold", "gol-dance", "robot", "smart-building"}) {
    RunConfig cfg;
    cfg.example = name;
    cfg.seed = 11;
    cfg.max_steps = 400;
    cfg.snapshots = true;
    cfg.trace_path = scratch("a.jsonl").string();
    run(cfg);
    cfg.trace_path = scratch("b.jsonl").string();
    run(cfg);
    EXPECT_EQ(slurp(scratch("a.jsonl")), slurp(scratch("b.jsonl"))) << name;
  }
}

TEST(Cli, VerifyVerdicts) {
  const auto report = scratch("verdict.json");
  VerifyConfig cfg;
  cfg.example = "gol-dance-buggy";
  cfg.report_path = report.string();
  cfg.trace_path = scratch("cex.jsonl").string();
  const auto r = check(cfg);
  EXPECT_EQ(r.code, kViolation);
  const auto j = Value::parse(slurp(report));
  EXPECT_EQ(j.at("outcome"), "violation");
  EXPECT_EQ(j.at("violated"), "no-duplication");
  EXPECT_FALSE(j.at("counterexample").empty());
  EXPECT_FALSE(jsonl(scratch("cex.jsonl")).empty());

  cfg = {};
  cfg.example = "hotcold-interleave";
  EXPECT_EQ(check(cfg).code, kOk);

  cfg.example = "smart-building-1room";
  cfg.report_path = report.string();
  EXPECT_EQ(check(cfg).code, kOk);
  EXPECT_GT(Value::parse(slurp(report)).at("statesVisited").get<int>(), 1);

  cfg.example = "robot-corner";
  EXPECT_EQ(check(cfg).code, kDeadlock);

  cfg.example = "smart-building-2rooms";
  cfg.limits.max_states = 50;
  EXPECT_EQ(check(cfg).code, kBoundExceeded);

  cfg.example = "nope";
  EXPECT_EQ(check(cfg).code, kError);
}

TEST(Cli, ParallelVerifyMatches) {
  VerifyConfig cfg;
  cfg.example = "ext-hot-cold";
  cfg.workers = 3;
  const auto r = check(cfg);
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("136 states"), std::string::npos) << r.out;
}

TEST(Cli, ListNamesEveryExample) {
  std::ostringstream out;
  EXPECT_EQ(cmd_list(out), kOk);
  for (const char* n : {"hot-cold", "gol", "robot-corner", "smart-building-1room"}) {
    EXPECT_NE(out.str().find(n), std::string::npos) << n;
  }
}
