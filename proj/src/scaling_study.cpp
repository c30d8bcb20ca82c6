#include <cmath>

#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"

namespace divcurl {

std::string to_string(ScalingVariant v) {
  switch (v) {
    case ScalingVariant::main: return "main";
    case ScalingVariant::triangle: return "triangle";
    case ScalingVariant::lorentz: return "lorentz";
    case ScalingVariant::interpolated: return "interpolated";
    case ScalingVariant::liebsob: return "liebsob";
  }
  return "?";
}

ScalingVariant scaling_variant_from_string(const std::string& name) {
  for (auto v : {ScalingVariant::main, ScalingVariant::triangle, ScalingVariant::lorentz,
                 ScalingVariant::interpolated, ScalingVariant::liebsob}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown scaling variant '" + name + "'");
}

namespace {

PolarizationRule polarization_rule(const std::string& name) {
  if (name == "first") return PolarizationRule::first();
  if (name == "all") return PolarizationRule::all();
  throw std::invalid_argument("unknown polarization '" + name + "'");
}

// Quarter turn in the (x_1, x_2) plane, mapped back to the half lattice.
Frequency rotate(const Frequency& k) {
  Frequency r = k;
  r[0] = -k[1];
  r[1] = k[0];
  for (int c : r) {
    if (c != 0) {
      if (c < 0)
        for (auto& x : r) x = -x;
      break;
    }
  }
  return r;
}

}  // namespace

PairedFamilies build_paired_families(const Grid& grid, const PairFamilyRecipe& recipe,
                                     std::size_t count) {
  if (recipe.radius < 1.0) throw std::invalid_argument("family radius must be >= 1");
  PairedFamilies out;
  out.descriptor = {{"radius", recipe.radius}, {"pairing", recipe.pairing},
                    {"e_mode", recipe.e_mode}, {"polarization", recipe.polarization}};
  const auto modes = half_lattice_modes(grid, recipe.radius);
  if (recipe.e_mode == "repeated") {
    SemiclassicalOptions options;
    options.polarization = polarization_rule(recipe.polarization);
    const auto b = semiclassical_family(grid, recipe.radius, FamilyKind::div_free, options);
    if (b.size() < count) {
      throw std::invalid_argument("family has " + std::to_string(b.size()) + " members, fewer than N = " +
                                  std::to_string(count));
    }
    const auto e = mode_family_curl_free(grid, {modes.front()});
    out.b.assign(b.members().begin(), b.members().begin() + static_cast<std::ptrdiff_t>(count));
    out.e.assign(count, e[0]);
    return out;
  }
  if (recipe.e_mode != "orthonormal") throw std::invalid_argument("unknown e_mode '" + recipe.e_mode + "'");
  if (recipe.pairing != "rotate") throw std::invalid_argument("unknown pairing '" + recipe.pairing + "'");
  if (2 * modes.size() < count) {
    throw std::invalid_argument("family has " + std::to_string(2 * modes.size()) +
                                " members, fewer than N = " + std::to_string(count));
  }
  const std::size_t used = (count + 1) / 2;
  const std::vector<Frequency> e_modes(modes.begin(), modes.begin() + static_cast<std::ptrdiff_t>(used));
  std::vector<Frequency> b_modes;
  std::vector<std::vector<std::vector<double>>> polarizations;
  for (const auto& k : e_modes) {
    const Frequency r = rotate(k);
    b_modes.push_back(r);
    // Project k/|k| off the rotated mode; fall back to a transverse basis
    // vector when k lies on the rotation axis.
    const double kk = norm_squared(k), rr = norm_squared(r);
    double kr = 0.0;
    for (std::size_t a = 0; a < k.size(); ++a) kr += static_cast<double>(k[a]) * r[a];
    std::vector<double> e(k.size());
    double len2 = 0.0;
    for (std::size_t a = 0; a < k.size(); ++a) {
      e[a] = k[a] - kr / rr * r[a];
      len2 += e[a] * e[a];
    }
    if (len2 < 1e-12 * kk) {
      polarizations.push_back({transverse_basis(r).front()});
    } else {
      for (auto& x : e) x /= std::sqrt(len2);
      polarizations.push_back({e});
    }
  }
  const auto e = mode_family_curl_free(grid, e_modes);
  const auto b = mode_family_div_free(grid, b_modes, PolarizationRule::explicit_list(polarizations));
  out.e.assign(e.members().begin(), e.members().begin() + static_cast<std::ptrdiff_t>(count));
  out.b.assign(b.members().begin(), b.members().begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

ExperimentRecord scaling_study(const ScalingConfig& config) {
  const Grid grid(config.d, config.n);
  const int d = config.d;
  if (config.n_list.empty()) throw std::invalid_argument("N_list is empty");
  for (std::size_t i = 1; i < config.n_list.size(); ++i) {
    if (config.n_list[i] <= config.n_list[i - 1]) throw std::invalid_argument("N_list must be increasing");
  }
  if (config.n_list.front() < 1) throw std::invalid_argument("N_list entries must be >= 1");
  const std::size_t max_n = config.n_list.back();
  const double q_main = static_cast<double>(d) / (d - 1);
  const auto variant = config.variant;

  std::vector<double> weights(max_n, 1.0);
  if (config.weights) {
    if (config.weights->size() < max_n) throw std::invalid_argument("fewer weights than the largest N");
    for (double w : *config.weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
    weights.assign(config.weights->begin(), config.weights->begin() + static_cast<std::ptrdiff_t>(max_n));
  }

  double q = q_main;
  double s = 1.0;
  if (variant == ScalingVariant::main || variant == ScalingVariant::lorentz) {
    if (config.q && std::abs(*config.q - q_main) > 1e-12) {
      throw std::invalid_argument("q must equal d/(d-1) for variant " + to_string(variant));
    }
  } else if (variant == ScalingVariant::interpolated) {
    if (!config.q || !(*config.q > 1.0 && *config.q < q_main)) {
      throw std::invalid_argument("interpolated variant needs 1 < q < d/(d-1)");
    }
    q = *config.q;
    s = d * (q - 1.0) / q;  // d / q'
  } else if (variant == ScalingVariant::liebsob && d < 3) {
    throw std::invalid_argument("liebsob variant needs d >= 3");
  }

  ExperimentRecord record;
  record.experiment = "scaling_study";
  record.has_fit = true;
  std::vector<double> measured(config.n_list.size()), predictor(config.n_list.size());
  std::vector<double> certified(config.n_list.size(), NAN);
  const bool certify = (variant == ScalingVariant::main || variant == ScalingVariant::lorentz) && d >= 3 &&
                       config.certify_steps > 0;

  if (variant == ScalingVariant::liebsob) {
    const int m = config.family.components;
    if (m < 1) throw std::invalid_argument("components M must be >= 1");
    SemiclassicalOptions options;
    options.components = m;
    const auto psi = semiclassical_family(grid, config.family.radius, FamilyKind::scalar_h1, options);
    if (psi.size() < max_n) {
      throw std::invalid_argument("family has " + std::to_string(psi.size()) + " members, fewer than N = " +
                                  std::to_string(max_n));
    }
    record.metrics["family"] = to_json(psi.descriptor());
    const double r = static_cast<double>(d) / (d - 2);
    parallel_for(config.n_list.size(), config.jobs, [&](std::size_t i) {
      ScalarField density(grid);
      for (std::size_t k = 0; k < config.n_list[i]; ++k) density += squared_magnitude(psi[k]);
      measured[i] = lp_norm(density, r);
      predictor[i] = std::pow(m, 2.0 / d) * std::pow(static_cast<double>(config.n_list[i]), 1.0 - 2.0 / d);
    });
  } else {
    const auto fam = build_paired_families(grid, config.family, max_n);
    record.metrics["family"] = fam.descriptor;
    std::vector<ScalarField> products;
    products.reserve(max_n);
    for (std::size_t k = 0; k < max_n; ++k) products.push_back(dot(fam.e[k], fam.b[k]));
    parallel_for(config.n_list.size(), config.jobs, [&](std::size_t i) {
      const std::size_t count = config.n_list[i];
      const double nn = static_cast<double>(count);
      if (variant == ScalingVariant::triangle) {
        double total = 0.0;
        for (std::size_t k = 0; k < count; ++k) total += lp_norm(products[k], 1.0);
        measured[i] = total;
        predictor[i] = nn;
        return;
      }
      ScalarField g(grid);
      for (std::size_t k = 0; k < count; ++k) g += products[k] * cplx(weights[k]);
      measured[i] = (d == 2 && s == 1.0) ? dual_norm_h1(g) : neg_sobolev_proxy(g, s, q);
      const SequenceWeights lambda(std::vector<double>(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(count)));
      switch (variant) {
        case ScalingVariant::main: predictor[i] = std::pow(nn, 1.0 - 1.0 / d); break;
        case ScalingVariant::lorentz: predictor[i] = lorentz_q1_norm(lambda, d); break;
        default: predictor[i] = lambda.lq_norm(q); break;
      }
      if (certify) certified[i] = dual_certify(g, q, config.certify_steps, config.certify_step).lower_bound;
    });
  }

  std::vector<double> controls;
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    const double c = static_cast<double>(config.n_list[i]);
    controls.push_back(c);
    std::optional<double> ratio;
    if (predictor[i] > 0.0) ratio = measured[i] / predictor[i];
    record.series.push_back({c, measured[i], predictor[i], ratio});
  }
  record.fit = fit_power_law(controls, measured);
  if (const auto pf = fit_power_law(controls, predictor)) record.predictor_exponent = pf->exponent;
  if (certify) {
    nlohmann::json lb = nlohmann::json::array(), rel = nlohmann::json::array();
    for (std::size_t i = 0; i < certified.size(); ++i) {
      lb.push_back(certified[i]);
      rel.push_back(certified[i] > 0.0 ? measured[i] / certified[i] : 0.0);
    }
    record.metrics["certified_lower_bound"] = lb;
    record.metrics["proxy_over_certified"] = rel;
    if (const auto cf = fit_power_law(controls, certified)) record.metrics["certified_exponent"] = cf->exponent;
  }
  record.metrics["variant"] = to_string(variant);
  record.metrics["q"] = q;
  record.metrics["s"] = s;
  return record;
}

}  // namespace divcurl
