#include <algorithm>
#include <cmath>

#include "divcurl/experiments.hpp"
#include "divcurl/rng.hpp"

namespace divcurl {

double relative_deviation(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double IdentityDeviations::max() const {
  double m = std::max({commutator_pairing, divergence_form, two_form, hodge_energy,
                       two_form_energy, riesz_representation});
  if (wedge_3d) m = std::max(m, *wedge_3d);
  if (vector_potential_energy) m = std::max(m, *vector_potential_energy);
  return m;
}

nlohmann::json IdentityDeviations::to_json() const {
  nlohmann::json j = {{"commutator_pairing", commutator_pairing},
                      {"divergence_form", divergence_form},
                      {"two_form", two_form},
                      {"hodge_energy", hodge_energy},
                      {"two_form_energy", two_form_energy},
                      {"riesz_representation", riesz_representation}};
  if (wedge_3d) j["wedge_3d"] = *wedge_3d;
  if (vector_potential_energy) j["vector_potential_energy"] = *vector_potential_energy;
  return j;
}

IdentityDeviations evaluate_identities(const ScalarField& u, const VectorField& e,
                                       const VectorField& b, const VectorField& f, double band) {
  const Grid& grid = u.grid();
  require_same_grid(grid, e.grid(), "evaluate_identities");
  require_same_grid(grid, b.grid(), "evaluate_identities");
  require_same_grid(grid, f.grid(), "evaluate_identities");
  if (3.0 * band >= grid.n()) throw std::invalid_argument("triple products alias unless 3 band < n");
  const int d = grid.dim();
  IdentityDeviations out;

  const ScalarField phi = scalar_potential(e);
  const ScalarField lhs_density = u * dot(e, b);
  const cplx lhs = integrate(lhs_density);

  // f = i (-Delta)^{1/2} phi, so that E = R f.
  const ScalarField rf = fractional_laplacian(phi, 1.0) * cplx(0.0, 1.0);
  const double e_norm = l2_norm(e);
  out.riesz_representation = e_norm == 0.0 ? l2_norm(riesz(rf)) : l2_norm(riesz(rf) - e) / e_norm;

  // -sum_j <[R_j, u] f, B_j> by Parseval over the band.
  cplx commutator_side = 0.0;
  for (int j = 0; j < d; ++j) {
    const DenseOperator k = materialize_commutator(u, j, band);
    const BandIndex& idx = *k.index();
    const Eigen::VectorXcd image = k.matrix() * idx.restrict(rf);
    commutator_side -= idx.restrict(b[j]).dot(image);
  }
  out.commutator_pairing = relative_deviation(lhs, commutator_side);

  const VectorField grad_u = gradient(u);
  out.divergence_form = relative_deviation(lhs, -integrate(dot(grad_u, phi * b)));

  const TwoFormField alpha = two_form_potential(b);
  out.two_form = relative_deviation(lhs, integrate(pair_two_forms(wedge(grad_u, e), alpha)));

  if (d == 3) {
    const VectorField a = vector_potential_3d(b);
    out.wedge_3d = relative_deviation(lhs, integrate(dot(grad_u, cross(e, a))));
    const double b2 = l2_norm(b) * l2_norm(b);
    out.vector_potential_energy = relative_deviation(gradient_energy(a), b2);
  }

  const double div_f = l2_norm(divergence(f));
  out.hodge_energy =
      relative_deviation(gradient_energy(f), l2_norm_squared(curl(f)) + div_f * div_f);

  double alpha_energy = 0.0;
  for (const auto& c : alpha.parts()) alpha_energy += gradient_energy(c);
  const double b_norm = l2_norm(b);
  out.two_form_energy = relative_deviation(b_norm * b_norm, alpha_energy);
  return out;
}

ExperimentRecord identity_suite(const IdentitySuiteConfig& config) {
  const Grid grid(config.d, config.n);
  if (config.trials < 1) throw std::invalid_argument("identity_suite needs at least one trial");
  const double band = config.band;
  std::vector<IdentityDeviations> results(static_cast<std::size_t>(config.trials));
  parallel_for(results.size(), config.jobs, [&](std::size_t t) {
    auto seed = [&](std::uint64_t slot) { return derive_seed(config.seed, 8 * t + slot); };
    const ScalarField u = random_real_field(grid, band, seed(0)) + ScalarField::constant(grid, 0.5);
    const VectorField e = gradient(random_real_field(grid, band, seed(1)));
    const VectorField b = leray_project(random_real_vector_field(grid, config.d, band, seed(2)));
    const VectorField f = random_real_vector_field(grid, config.d, band, seed(3));
    results[t] = evaluate_identities(u, e, b, f, band);
  });

  ExperimentRecord record;
  record.experiment = "identity_suite";
  nlohmann::json worst = IdentityDeviations{}.to_json();
  double overall = 0.0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto j = results[t].to_json();
    for (auto it = j.begin(); it != j.end(); ++it) {
      worst[it.key()] = std::max(worst.value(it.key(), 0.0), it.value().get<double>());
    }
    overall = std::max(overall, results[t].max());
    record.series.push_back({static_cast<double>(t), results[t].max(), std::nullopt, std::nullopt});
  }
  record.metrics["identity_max_deviation"] = worst;
  record.metrics["max_identity_deviation"] = overall;
  record.metrics["trials"] = config.trials;
  record.metrics["band"] = band;
  return record;
}

}  // namespace divcurl
