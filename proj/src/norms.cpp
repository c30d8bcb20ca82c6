#include "divcurl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "divcurl/calculus.hpp"

namespace divcurl {
namespace {

void require_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1, got " + std::to_string(p));
}

double lp_of_magnitudes(std::span<const double> mags, double p) {
  double s = 0.0;
  if (p == 2.0) {
    for (double m : mags) s += m * m;
    return std::sqrt(s / static_cast<double>(mags.size()));
  }
  for (double m : mags) s += std::pow(m, p);
  return std::pow(s / static_cast<double>(mags.size()), 1.0 / p);
}

void require_zero_mean(const ScalarField& g, const char* op) {
  const double mean = std::abs(integrate(g));
  if (mean > 1e-12) {
    throw std::invalid_argument(std::string(op) + ": input must be zero-mean (mean " +
                                std::to_string(mean) + ")");
  }
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  require_p(p);
  std::vector<double> mags(f.grid().size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(f[i]);
  return lp_of_magnitudes(mags, p);
}

double lp_norm(const VectorField& f, double p) {
  require_p(p);
  std::vector<double> mags(f.grid().size(), 0.0);
  for (const auto& c : f.parts()) {
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] += std::norm(c[i]);
  }
  for (auto& m : mags) m = std::sqrt(m);
  return lp_of_magnitudes(mags, p);
}

double sobolev_seminorm(const ScalarField& f, double s, double p) {
  if (!(s > 0.0)) throw std::invalid_argument("Sobolev order must be positive");
  if (s == 1.0) return lp_norm(gradient(f), p);
  return lp_norm(fractional_laplacian(f, s), p);
}

double neg_sobolev_proxy(const ScalarField& g, double s, double q) {
  if (!(s > 0.0)) throw std::invalid_argument("negative Sobolev order must be given as s > 0");
  if (!(q > 1.0)) throw std::invalid_argument("negative Sobolev proxy needs q > 1");
  require_zero_mean(g, "neg_sobolev_proxy");
  return lp_norm(fractional_laplacian(g, -s), q);
}

double dual_norm_h1(const ScalarField& g) {
  require_zero_mean(g, "dual_norm_h1");
  const auto spec = g.spectrum();
  double s = 0.0;
  for_each_frequency(g.grid(), [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 > 0.0) s += std::norm(spec[i]) / r2;
  });
  return std::sqrt(s);
}

namespace {

// |int u g| / ||grad u||_{q'}
struct DualObjective {
  const ScalarField& g;
  double q_dual;

  double gradient_norm(const ScalarField& u) const { return lp_norm(gradient(u), q_dual); }

  double value(const ScalarField& u) const {
    const double qn = gradient_norm(u);
    if (qn == 0.0) return 0.0;
    return std::abs(integrate(u * g)) / qn;
  }

  // Sobolev-preconditioned ascent direction at a u normalized to ||grad u||_{q'} = 1.
  ScalarField direction(const ScalarField& u) const {
    const cplx pairing = integrate(u * g);
    const double a = std::abs(pairing);
    const Grid& grid = u.grid();
    const VectorField du = gradient(u);
    std::vector<double> mag(grid.size(), 0.0);
    for (const auto& c : du.parts()) {
      for (std::size_t i = 0; i < grid.size(); ++i) mag[i] += std::norm(c[i]);
    }
    std::vector<ScalarField> weighted;
    for (const auto& c : du.parts()) {
      std::vector<cplx> v(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double m = std::sqrt(mag[i]);
        v[i] = m > 0.0 ? std::pow(m, q_dual - 2.0) * c[i] : cplx{};
      }
      weighted.emplace_back(grid, std::move(v));
    }
    ScalarField grad = divergence(VectorField(std::move(weighted))) * cplx{a};
    if (a > 0.0) grad += g.conj() * (pairing / a);
    return fractional_laplacian(grad - ScalarField::constant(grid, integrate(grad)), -2.0);
  }
};

}  // namespace

DualCertificate dual_certify(const ScalarField& g, double q, int steps, double step_size) {
  if (!(q > 1.0)) throw std::invalid_argument("dual_certify needs q > 1");
  if (steps <= 0) throw std::invalid_argument("dual_certify needs steps > 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("dual_certify needs step_size > 0");
  require_zero_mean(g, "dual_certify");

  const DualObjective objective{g, q / (q - 1.0)};
  ScalarField u = fractional_laplacian(g, -2.0);
  double norm = objective.gradient_norm(u);
  if (norm == 0.0) return {0.0, u, {0.0}};
  u *= cplx{1.0 / norm};

  DualCertificate cert{objective.value(u), u, {}};
  cert.trace.push_back(cert.lower_bound);
  double eta = step_size;
  for (int step = 0; step < steps; ++step) {
    const ScalarField dir = objective.direction(u);
    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      ScalarField trial = u + dir * cplx{eta};
      norm = objective.gradient_norm(trial);
      if (norm > 0.0) {
        trial *= cplx{1.0 / norm};
        const double value = objective.value(trial);
        if (value > cert.lower_bound) {
          u = std::move(trial);
          cert.lower_bound = value;
          cert.witness = u;
          cert.trace.push_back(value);
          eta *= 1.5;
          accepted = true;
          break;
        }
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at working precision
  }
  return cert;
}

SequenceWeights::SequenceWeights(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("sequence weights must be finite and nonnegative");
    }
  }
}

std::vector<double> SequenceWeights::decreasing() const {
  std::vector<double> out(values_);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double SequenceWeights::lq_norm(double q) const {
  if (!(q > 0.0)) throw std::invalid_argument("l^q norm needs q > 0");
  double s = 0.0;
  for (double v : values_) s += std::pow(v, q);
  return std::pow(s, 1.0 / q);
}

double lorentz_q1_norm(const SequenceWeights& weights, int d) {
  if (d < 2) throw std::invalid_argument("Lorentz norm needs d >= 2");
  const double e = 1.0 - 1.0 / d;
  const auto sorted = weights.decreasing();
  double s = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    s += sorted[i] * (std::pow(n, e) - std::pow(n - 1.0, e));
  }
  return s;
}

double weak_lp_functional(std::span<const double> s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("weak l^p functional needs p > 0");
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) throw std::invalid_argument("singular values must be nonnegative");
    if (i > 0 && s[i] > s[i - 1]) throw std::invalid_argument("sequence must be nonincreasing");
    best = std::max(best, std::pow(static_cast<double>(i + 1), 1.0 / p) * s[i]);
  }
  return best;
}

}  // namespace divcurl
