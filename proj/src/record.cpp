#include "divcurl/record.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divcurl {

bool Gate::passed() const {
  if (!value || !std::isfinite(*value)) return false;
  return upper ? *value <= threshold : *value >= threshold;
}

std::optional<double> ExperimentRecord::ratio_spread() const {
  double lo = INFINITY, hi = 0.0;
  for (const auto& p : series) {
    if (p.ratio && std::isfinite(*p.ratio) && *p.ratio > 0.0) {
      lo = std::min(lo, *p.ratio);
      hi = std::max(hi, *p.ratio);
    }
  }
  if (hi == 0.0) return std::nullopt;
  return hi / lo;
}

std::optional<double> ExperimentRecord::ratio_max() const {
  std::optional<double> best;
  for (const auto& p : series)
    if (p.ratio && std::isfinite(*p.ratio)) best = std::max(best.value_or(*p.ratio), *p.ratio);
  return best;
}

bool ExperimentRecord::passed() const {
  if (error) return false;
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed(); });
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["config"] = config;
  if (config.contains("grid")) {
    j["d"] = config["grid"].value("d", 0);
    j["n"] = config["grid"].value("n", 0);
  }
  nlohmann::json s = nlohmann::json::array();
  for (const auto& p : series) {
    s.push_back({{"control", p.control},
                 {"measured", optional_number(p.measured)},
                 {"predictor", optional_number(p.predictor)},
                 {"ratio", optional_number(p.ratio)}});
  }
  j["series"] = s;
  if (has_fit) {
    if (fit) {
      j["fit"] = {{"exponent", fit->exponent},
                  {"log_prefactor", fit->log_prefactor},
                  {"residual", fit->residual},
                  {"points", fit->points}};
    } else {
      j["fit"] = nullptr;
    }
  }
  j["predictor_exponent"] = optional_number(predictor_exponent);
  j["ratio_spread"] = optional_number(ratio_spread());
  j["ratio_max"] = optional_number(ratio_max());
  j["metrics"] = metrics;
  nlohmann::json g = nlohmann::json::array();
  for (const auto& gate : gates) {
    g.push_back({{"name", gate.name},
                 {"value", optional_number(gate.value)},
                 {"threshold", gate.threshold},
                 {"comparison", gate.upper ? "<=" : ">="},
                 {"passed", gate.passed()}});
  }
  j["gates"] = g;
  j["passed"] = passed();
  if (error) j["error"] = *error;
  return j;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

std::string ExperimentRecord::series_csv() const {
  std::string out = "control,measured,predictor,ratio\n";
  for (const auto& p : series) {
    out += format_number(p.control);
    out += ',';
    out += format_number(p.measured);
    out += ',';
    if (p.predictor) out += format_number(*p.predictor);
    out += ',';
    if (p.ratio) out += format_number(*p.ratio);
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace divcurl
