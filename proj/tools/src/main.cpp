#include "cobp/cli/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace cobp::cli;
  init_logging();

  CLI::App app{"Run and verify context-oriented behavioral programs"};
  app.require_subcommand(1);

  RunConfig run;
  auto* run_cmd = app.add_subcommand("run", "run an example and write its trace");
  run_cmd->add_option("name", run.example, "example name (see `list`)")->required();
  run_cmd->add_option("--seed", run.seed, "arbiter RNG seed");
  run_cmd->add_option("--max-steps", run.max_steps, "transition budget")->check(CLI::PositiveNumber);
  run_cmd->add_option("--arbiter", run.arbiter, "event selection")->check(CLI::IsMember({"random", "first", "priority"}));
  run_cmd->add_option("--ctx", run.ctx_path, "context-init JSON override");
  run_cmd->add_option("--trace", run.trace_path, "JSON-lines trace output");
  run_cmd->add_flag("--snapshots", run.snapshots, "include the context in every trace entry");

  VerifyConfig ver;
  auto* verify_cmd = app.add_subcommand("verify", "explore every run of an example and check its assertions");
  verify_cmd->add_option("name", ver.example, "example name (see `list`)")->required();
  verify_cmd->add_option("--max-states", ver.limits.max_states, "state budget")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--depth", ver.limits.max_depth, "depth budget")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--workers", ver.workers, "parallel frontier workers")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--ctx", ver.ctx_path, "context-init JSON override");
  verify_cmd->add_option("--report", ver.report_path, "verdict JSON output");
  verify_cmd->add_option("--trace", ver.trace_path, "counterexample trace output");

  auto* list_cmd = app.add_subcommand("list", "list registered examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*verify_cmd) return cmd_verify(ver, std::cout, std::cerr);
  if (*list_cmd) return cmd_list(std::cout);
  return kError;
}
