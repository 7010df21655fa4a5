// Command line front end: run experiments, summarize results, export
// position/latency traces, and validate scenario files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperdrive/errors.hpp"
#include "hyperdrive/experiment.hpp"
#include "hyperdrive/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitCheckFailure = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLO-aware serverless scheduling simulator for the edge-cloud-space continuum"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string schedulers_arg, sizes_arg, seeds_arg;
  int parallel = 1;
  bool check = false;

  auto* run = app.add_subcommand("run", "Run the experiment matrix");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (default: scenario output_dir)");
  run->add_option("--schedulers", schedulers_arg, "Comma-separated scheduler list");
  run->add_option("--sizes", sizes_arg, "Comma-separated infrastructure sizes");
  run->add_option("--seeds", seeds_arg, "Comma-separated seeds");
  run->add_option("--parallel", parallel, "Worker threads for experiment cells");
  run->add_flag("--check", check, "Evaluate acceptance checks on the results");

  std::string in_dir;
  std::string format = "json";
  auto* summ = app.add_subcommand("summarize", "Summarize a results directory");
  summ->add_option("--in", in_dir, "Results directory containing records.json")
      ->required();
  summ->add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  int trace_size = 0;
  std::uint64_t trace_seed = 0;
  int trace_steps = 60;
  auto* traces = app.add_subcommand(
      "export-traces", "Export per-time-index position and latency tables");
  traces->add_option("--scenario", scenario_path, "Scenario file")->required();
  traces->add_option("--out", out_dir, "Output directory")->required();
  traces->add_option("--size", trace_size, "Infrastructure size (default: first)");
  traces->add_option("--seed", trace_seed, "Seed (default: first)");
  traces->add_option("--steps", trace_steps, "Number of time steps to export");

  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("--scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      hyperdrive::ScenarioConfig cfg = hyperdrive::load_scenario(scenario_path);
      if (!schedulers_arg.empty()) cfg.schedulers = split_list(schedulers_arg);
      if (!sizes_arg.empty()) {
        cfg.sizes.clear();
        for (const auto& s : split_list(sizes_arg)) cfg.sizes.push_back(std::stoi(s));
      }
      if (!seeds_arg.empty()) {
        cfg.seeds.clear();
        for (const auto& s : split_list(seeds_arg)) cfg.seeds.push_back(std::stoull(s));
      }
      if (out_dir.empty()) out_dir = cfg.output_dir;

      auto records = hyperdrive::run_experiment(cfg, parallel);
      hyperdrive::write_results(out_dir, records);
      auto summary = hyperdrive::summarize(records);
      std::ofstream(out_dir + "/summary.json") << summary.to_json();
      std::cout << "wrote " << records.size() << " records to " << out_dir
                << "\n";

      if (check) {
        bool all_pass = true;
        for (const auto& c : hyperdrive::run_checks(records)) {
          std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": "
                    << c.detail << "\n";
          all_pass = all_pass && c.pass;
        }
        if (!all_pass) return kExitCheckFailure;
      }
      return kExitOk;
    }

    if (summ->parsed()) {
      auto records = hyperdrive::read_records(in_dir);
      auto summary = hyperdrive::summarize(records);
      if (format == "csv") {
        std::ofstream(in_dir + "/summary.csv") << summary.to_csv();
        std::cout << summary.to_csv();
      } else {
        std::ofstream(in_dir + "/summary.json") << summary.to_json();
        std::cout << summary.to_json();
      }
      return kExitOk;
    }

    if (traces->parsed()) {
      hyperdrive::ScenarioConfig cfg = hyperdrive::load_scenario(scenario_path);
      int size = trace_size > 0 ? trace_size : cfg.sizes.front();
      std::uint64_t seed = trace_seed > 0 ? trace_seed : cfg.seeds.front();
      hyperdrive::export_traces(cfg, size, seed, trace_steps, out_dir);
      std::cout << "wrote traces for size " << size << ", seed " << seed
                << " to " << out_dir << "\n";
      return kExitOk;
    }

    if (validate->parsed()) {
      hyperdrive::ScenarioConfig cfg = hyperdrive::load_scenario(scenario_path);
      auto report = hyperdrive::validate_workflow(cfg.workflow);
      if (!report.ok()) {
        for (const auto& v : report.violations)
          std::cerr << "violation: " << v.detail << "\n";
        return kExitConfigError;
      }
      std::cout << scenario_path << ": ok (" << cfg.workflow.tasks.size()
                << " tasks, " << cfg.sizes.size() << " sizes, "
                << cfg.seeds.size() << " seeds)\n";
      return kExitOk;
    }
  } catch (const hyperdrive::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
