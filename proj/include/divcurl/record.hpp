#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "divcurl/fitting.hpp"

namespace divcurl {

struct SeriesPoint {
  double control = 0.0;
  double measured = 0.0;
  std::optional<double> predictor;
  std::optional<double> ratio;
};

/// A pass/fail threshold evaluated on a named record quantity.
struct Gate {
  std::string name;
  std::optional<double> value;  // absent when the quantity was not produced
  double threshold = 0.0;
  bool upper = true;            // value <= threshold when true, >= otherwise
  bool passed() const;
};

struct ExperimentRecord {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::vector<SeriesPoint> series;
  /// Present only when at least three usable points exist; records that never
  /// fit anything leave has_fit false.
  bool has_fit = false;
  std::optional<PowerLawFit> fit;
  std::optional<double> predictor_exponent;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Gate> gates;
  std::optional<std::string> error;
  /// Kept out of to_json so records stay byte-stable.
  double wall_seconds = 0.0;

  /// max/min of the finite positive ratios; nullopt if none.
  std::optional<double> ratio_spread() const;
  std::optional<double> ratio_max() const;
  bool passed() const;

  nlohmann::json to_json() const;
  /// control,measured,predictor,ratio with 17 significant digits.
  std::string series_csv() const;
};

/// Formats a double for output files; non-finite values become "nan"/"inf".
std::string format_number(double value);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace divcurl
