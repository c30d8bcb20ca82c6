#pragma once

#include <optional>
#include <span>

namespace divcurl {

/// y ~ C x^exponent fitted by least squares in log-log coordinates.
struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  /// Root-mean-square residual of the log-log fit.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Needs at least three points with positive x and y; nullopt otherwise.
std::optional<PowerLawFit> fit_power_law(std::span<const double> x, std::span<const double> y);

/// Log-log slope of s_n against n (1-based) over the decade [D/40, D/4],
/// where D counts entries above 1e-12 s_1. Below the decade the spectrum is
/// still resolving the multiplier's own frequencies; above it the band edge
/// steepens the decay. nullopt when fewer than three sample indices exist.
std::optional<double> tail_slope(std::span<const double> s);

}  // namespace divcurl
