#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "divcurl/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run div-curl verification experiments from a config file."};
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool list = false;
  app.add_option("--config", config_path, "Experiment config (TOML)");
  app.add_option("--out", out_dir, "Output directory (default: run.out, else out/<experiment>)");
  app.add_option("--seed", seed, "Master seed; overrides run.seed");
  app.add_option("--jobs", jobs, "Worker threads for independent cells")->check(CLI::PositiveNumber);
  app.add_flag("--list-experiments", list, "List experiment names and exit");

  auto* report_cmd = app.add_subcommand("report", "Aggregate JSON records into one CSV table");
  std::string report_dir;
  report_cmd->add_option("dir", report_dir, "Directory of records")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list) {
      for (const auto& name : divcurl::experiment_names()) std::cout << name << '\n';
      return 0;
    }
    if (report_cmd->parsed()) {
      std::cout << divcurl::report(report_dir);
      return 0;
    }
    if (config_path.empty()) {
      std::cerr << "error: --config is required\n";
      return 2;
    }
    divcurl::RunConfig config = divcurl::parse_config_file(config_path);
    if (seed) config.seed = *seed;
    const std::string dir = !out_dir.empty() ? out_dir : config.out_dir.value_or("out/" + config.experiment);
    const auto outcome = divcurl::run(config, dir, jobs.value_or(config.jobs));
    std::cout << fmt::format("{} -> {} ({})\n", config.experiment, outcome.directory.string(),
                             outcome.exit_code == 0 ? "PASS" : "FAIL");
    if (outcome.record.error) std::cerr << "experiment error: " << *outcome.record.error << '\n';
    return outcome.exit_code;
  } catch (const divcurl::ConfigError& err) {
    for (const auto& v : err.violations()) std::cerr << "config error: " << v << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
