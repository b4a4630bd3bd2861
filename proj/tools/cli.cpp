#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "uavinspect/config.hpp"
#include "uavinspect/errors.hpp"
#include "uavinspect/sim.hpp"
#include "uavinspect/version.hpp"

namespace uavinspect::cli {

namespace {

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string log;
  std::string summary;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  TriangleMesh mesh;
  try {
    scenario = load_config(args.config, args.overrides);
    if (!args.log.empty()) scenario.log_path = args.log;
    if (!args.summary.empty()) scenario.summary_path = args.summary;
    if (scenario.log_path.empty()) scenario.log_path = "run.jsonl";
    if (scenario.summary_path.empty()) scenario.summary_path = "summary.json";
    mesh = load_mesh(scenario.mesh_path);
    validate_scenario(scenario, mesh, build_target_set(mesh, scenario.d_proj));
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::ofstream log_file(scenario.log_path);
  if (!log_file) {
    err << "cannot open log file " << scenario.log_path << '\n';
    return kExitConfigError;
  }
  RunOptions options;
  options.workers = args.workers;
  options.log_stream = &log_file;
  options.keep_records = false;

  const SimLog log = run(scenario, mesh, options);
  log_file.close();

  std::ofstream summary_file(scenario.summary_path);
  if (!summary_file) {
    err << "cannot open summary file " << scenario.summary_path << '\n';
    return kExitConfigError;
  }
  write_summary(summary_file, log.summary);
  write_summary(out, log.summary);

  switch (log.summary.outcome) {
    case Outcome::Success:
      return kExitSuccess;
    case Outcome::Timeout:
      err << "timeout: " << log.summary.message << '\n';
      return kExitTimeout;
    case Outcome::SafetyAbort:
      err << "safety abort: " << log.summary.message << '\n';
      return kExitSafetyAbort;
  }
  return kExitSafetyAbort;
}

int cmd_make_paper_scenario(const std::string& dir, std::ostream& out, std::ostream& err) {
  try {
    const auto config = write_paper_scenario(dir);
    out << "wrote " << config.string() << '\n';
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent coverage-control inspection simulator", "uavinspect"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write the round log and summary");
  run_cmd->add_option("--config", run_args.config, "Scenario config file")->required();
  run_cmd->add_option("--set", run_args.overrides, "Override a config key (key=value), repeatable");
  run_cmd->add_option("--log", run_args.log, "Round log output (one JSON object per line)");
  run_cmd->add_option("--summary", run_args.summary, "Summary output (JSON)");
  run_cmd->add_option("--workers", run_args.workers, "Worker threads for quadrature")
      ->check(CLI::PositiveNumber);

  std::string out_dir;
  auto* paper_cmd = app.add_subcommand("make-paper-scenario",
                                       "Write the bundled five-agent scenario (mesh + config)");
  paper_cmd->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  }

  if (*run_cmd) return cmd_run(run_args, out, err);
  return cmd_make_paper_scenario(out_dir, out, err);
}

}  // namespace uavinspect::cli
