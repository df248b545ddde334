#include "stentsim/config.hpp"
#include "stentsim/scenarios.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Balloon-driven stent deployment simulator"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run a scenario configuration");
  std::string config_path;
  std::string output_dir = "out";
  int steps = 0;
  int export_every = -1;
  bool check_tangent = false;
  run->add_option("config", config_path, "Scenario configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--output-dir", output_dir,
                  "Directory for metrics.csv, summary.json and fields/")
      ->capture_default_str();
  run->add_option("--steps", steps, "Override the total committed-step budget")
      ->check(CLI::PositiveNumber);
  run->add_option("--export-every", export_every,
                  "Field snapshots every N committed steps (0: phase ends only)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--check-tangent", check_tangent,
                "Per-step finite-difference tangent audit (small models only)");

  CLI11_PARSE(app, argc, argv);

  try {
    const stentsim::ScenarioConfig config = stentsim::parse_config(config_path);
    const std::string base_dir =
        std::filesystem::path(config_path).parent_path().string();
    stentsim::Scenario scenario =
        stentsim::build_scenario(config, base_dir.empty() ? "." : base_dir);

    stentsim::RunOptions options;
    options.output_dir = output_dir;
    options.steps_override = steps;
    options.field_interval = export_every;
    options.check_tangent = check_tangent;
    options.progress = &std::cerr;

    const stentsim::ScenarioResult result =
        stentsim::run_scenario(scenario, {}, options);
    std::cout << stentsim::format_run_summary(scenario, result);
    std::cerr << "wrote " << output_dir << "/" << config.output.metrics_path << ", "
              << config.output.summary_path << ", " << config.output.fields_dir
              << "/\n";
    return result.anomalies.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
