#include "divcurl/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "divcurl/experiments.hpp"

namespace divcurl {

namespace {

std::optional<double> number_at(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) return std::nullopt;
  return it->get<double>();
}

void apply_gates(const RunConfig& config, ExperimentRecord& record) {
  for (const auto& [name, threshold] : config.gates) {
    Gate gate{name, std::nullopt, threshold, true};
    if (name == "max_deviation") {
      gate.value = number_at(record.metrics, "max_identity_deviation");
    } else if (name == "exponent_max" || name == "exponent_min") {
      if (record.fit) gate.value = record.fit->exponent;
      gate.upper = name == "exponent_max";
    } else if (name == "ratio_max") {
      gate.value = record.ratio_max();
    } else if (name == "ratio_spread_max") {
      gate.value = record.ratio_spread();
    } else if (name == "slope_min" || name == "slope_max") {
      gate.value = number_at(record.metrics, name == "slope_min" ? "tail_slope_min" : "tail_slope_max");
      gate.upper = name == "slope_max";
    } else if (name == "partial_sum_violations_max") {
      gate.value = number_at(record.metrics, "partial_sum_violations");
    } else if (name == "final_over_initial_min") {
      const auto a = number_at(record.metrics, "final_objective");
      const auto b = number_at(record.metrics, "initial_objective");
      if (a && b && *b > 0.0) gate.value = *a / *b;
      gate.upper = false;
    }
    record.gates.push_back(gate);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string summary_text(const RunConfig& config, const ExperimentRecord& record,
                         const std::string& record_hash, const std::string& series_hash) {
  std::string s;
  s += fmt::format("experiment      {}\n", record.experiment);
  s += fmt::format("grid            d = {}, n = {}\n", config.d, config.n);
  s += fmt::format("seed            {}\n", config.seed);
  s += fmt::format("status          {}\n", record.error ? "error: " + *record.error : "completed");
  if (record.has_fit) {
    if (record.fit) {
      s += fmt::format("exponent        {:.6f} (log-log rms residual {:.3g}, {} points)\n", record.fit->exponent,
                       record.fit->residual, record.fit->points);
    } else {
      s += "exponent        absent (fewer than 3 usable points)\n";
    }
  }
  if (record.predictor_exponent) s += fmt::format("predictor exp.  {:.6f}\n", *record.predictor_exponent);
  if (const auto spread = record.ratio_spread()) s += fmt::format("ratio spread    {:.6g}\n", *spread);
  if (const auto dev = number_at(record.metrics, "max_identity_deviation"))
    s += fmt::format("max deviation   {:.3e}\n", *dev);
  s += "\nseries (control, measured, predictor, ratio)\n";
  for (const auto& p : record.series) {
    s += fmt::format("  {:>12.6g}  {:>14.8g}  {:>14s}  {:>12s}\n", p.control, p.measured,
                     p.predictor ? fmt::format("{:.8g}", *p.predictor) : "-",
                     p.ratio ? fmt::format("{:.6g}", *p.ratio) : "-");
  }
  s += "\ngates\n";
  if (record.gates.empty()) s += "  (none configured)\n";
  for (const auto& g : record.gates) {
    s += fmt::format("  {:<28s} {:>14s} {} {:<12.6g} {}\n", g.name,
                     g.value ? fmt::format("{:.6g}", *g.value) : "absent", g.upper ? "<=" : ">=", g.threshold,
                     g.passed() ? "PASS" : "FAIL");
  }
  s += fmt::format("\noverall         {}\n", record.passed() ? "PASS" : "FAIL");
  s += fmt::format("wall clock      {:.3f} s\n", record.wall_seconds);
  s += fmt::format("sha256          record.json {}\n", record_hash);
  s += fmt::format("                series.csv  {}\n", series_hash);
  return s;
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

ExperimentRecord run_experiment(const RunConfig& config, int jobs) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), config.experiment) == names.end()) {
    throw std::invalid_argument("unknown experiment '" + config.experiment + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord record;
  try {
    if (config.experiment == "identity_suite") {
      IdentitySuiteConfig c{config.d, config.n, config.band.value(), config.trials, config.seed, jobs};
      record = identity_suite(c);
    } else if (config.experiment == "scaling_study") {
      ScalingConfig c;
      c.variant = scaling_variant_from_string(config.variant.value());
      c.d = config.d;
      c.n = config.n;
      c.family = {config.radius.value(), config.pairing, config.e_mode, config.polarization,
                  config.components.value_or(1)};
      c.n_list = config.n_list;
      c.q = config.q;
      c.weights = config.weights;
      c.certify_steps = config.certify_steps;
      c.certify_step = config.certify_step;
      c.seed = config.seed;
      c.jobs = jobs;
      record = scaling_study(c);
    } else if (config.experiment == "schatten_study") {
      SchattenConfig c;
      c.which = config.which.value() == "cwikel" ? SchattenKind::cwikel : SchattenKind::commutator;
      c.d = config.d;
      c.n = config.n;
      c.band = config.band.value();
      c.p = config.p.value();
      c.u_recipes = config.u_recipes;
      c.seed = config.seed;
      c.jobs = jobs;
      record = schatten_study(c);
    } else {
      ExtremizerConfig c{config.d, config.n, config.pairs.value(), config.pool.value(), config.steps.value(),
                         config.step_size.value(), config.seed};
      record = extremizer_search(c);
    }
  } catch (const std::exception& err) {
    record = ExperimentRecord{};
    record.experiment = config.experiment;
    record.error = err.what();
  }
  record.config = to_json(config);
  apply_gates(config, record);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::string record_json_text(const ExperimentRecord& record) {
  nlohmann::json j = record.to_json();
  j["artifacts"] = {{"series.csv", sha256_hex(record.series_csv())}};
  return j.dump(2) + "\n";
}

RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir, int jobs) {
  RunOutcome outcome;
  outcome.record = run_experiment(config, jobs);
  outcome.directory = out_dir;
  std::filesystem::create_directories(out_dir);
  const std::string json_text = record_json_text(outcome.record);
  const std::string csv_text = outcome.record.series_csv();
  write_file(out_dir / "record.json", json_text);
  write_file(out_dir / "series.csv", csv_text);
  write_file(out_dir / "summary.txt",
             summary_text(config, outcome.record, sha256_hex(json_text), sha256_hex(csv_text)));
  outcome.exit_code = outcome.record.passed() ? 0 : 1;
  return outcome;
}

std::string report(const std::filesystem::path& dir) {
  struct Row {
    std::string experiment;
    long d = 0, n = 0;
    std::string source;
    std::string line;
  };
  std::vector<Row> rows;
  if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    Row row;
    row.source = std::filesystem::relative(entry.path(), dir).generic_string();
    nlohmann::json j;
    bool ok = true;
    try {
      std::ifstream in(entry.path());
      j = nlohmann::json::parse(in);
      ok = j.is_object() && j.contains("experiment") && j["experiment"].is_string();
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) {
      row.line = fmt::format(",,,,,,,malformed,{}", csv_quote(row.source));
      rows.push_back(row);
      continue;
    }
    row.experiment = j["experiment"].get<std::string>();
    row.d = j.value("d", 0L);
    row.n = j.value("n", 0L);
    std::optional<double> exponent;
    std::vector<std::string> flags;
    if (j.contains("fit")) {
      if (j["fit"].is_object()) exponent = number_at(j["fit"], "exponent");
      if (!exponent) flags.push_back("missing_exponent");
    }
    if (j.contains("error")) flags.push_back("error");
    if (j.contains("passed") && j["passed"].is_boolean() && !j["passed"].get<bool>()) flags.push_back("gate_failed");
    std::optional<double> deviation;
    if (j.contains("metrics") && j["metrics"].is_object()) deviation = number_at(j["metrics"], "max_identity_deviation");
    std::string flag;
    for (const auto& f : flags) flag += (flag.empty() ? "" : ";") + f;
    row.line = fmt::format("{},{},{},{},{},{},{},{},{}", csv_quote(row.experiment), row.d, row.n, csv_cell(exponent),
                           csv_cell(number_at(j, "predictor_exponent")), csv_cell(number_at(j, "ratio_spread")),
                           csv_cell(deviation), flag, csv_quote(row.source));
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.experiment, a.d, a.n, a.source) < std::tie(b.experiment, b.d, b.n, b.source);
  });
  std::string out = "experiment,d,n,exponent,predictor_exponent,ratio_spread,max_identity_deviation,flag,source\n";
  for (const auto& r : rows) out += r.line + "\n";
  return out;
}

}  // namespace divcurl
