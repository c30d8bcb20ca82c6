#include "divcurl/fitting.hpp"

#include <cmath>
#include <vector>

namespace divcurl {

std::optional<PowerLawFit> fit_power_law(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t m = lx.size();
  if (m < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  fit.points = m;
  return fit;
}

std::optional<double> tail_slope(std::span<const double> s) {
  if (s.empty() || !(s[0] > 0.0)) return std::nullopt;
  std::size_t count = 0;
  while (count < s.size() && s[count] > 1e-12 * s[0]) ++count;
  const double hi = count / 4.0;
  const double lo = hi / 10.0;
  // Log-spaced sample indices so each part of the decade weighs the same.
  std::vector<double> ns, vs;
  constexpr int samples = 25;
  for (int i = 0; i < samples; ++i) {
    const auto n = static_cast<std::size_t>(std::lround(lo * std::pow(10.0, i / (samples - 1.0))));
    if (n < 1 || n > count || (!ns.empty() && static_cast<double>(n) == ns.back())) continue;
    ns.push_back(static_cast<double>(n));
    vs.push_back(s[n - 1]);
  }
  const auto fit = fit_power_law(ns, vs);
  if (!fit) return std::nullopt;
  return fit->exponent;
}

}  // namespace divcurl
