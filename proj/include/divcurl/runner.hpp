#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "divcurl/config.hpp"
#include "divcurl/record.hpp"

namespace divcurl {

/// Dispatches to the named experiment and applies the config's gates. Throws
/// std::invalid_argument for an unknown experiment; errors raised inside the
/// experiment are captured in record.error.
ExperimentRecord run_experiment(const RunConfig& config, int jobs);

struct RunOutcome {
  int exit_code = 0;
  std::filesystem::path directory;
  ExperimentRecord record;
};

/// Runs and writes record.json, series.csv and summary.txt into out_dir.
/// Exit code 0 iff the experiment finished and every gate passed. Nothing is
/// written when the experiment name is unknown.
RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir, int jobs);

/// Canonical JSON text of a record as written to record.json.
std::string record_json_text(const ExperimentRecord& record);

/// One CSV row per JSON record under dir (recursive), sorted by
/// (experiment, d, n, source). Unreadable records get a flagged row.
std::string report(const std::filesystem::path& dir);

}  // namespace divcurl
