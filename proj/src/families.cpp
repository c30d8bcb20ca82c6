#include "divcurl/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "divcurl/calculus.hpp"
#include "divcurl/rng.hpp"

namespace divcurl {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::curl_free: return "curl_free";
    case FamilyKind::div_free: return "div_free";
    case FamilyKind::scalar_h1: return "scalar_h1";
    case FamilyKind::scalar_l2: return "scalar_l2";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "curl_free") return FamilyKind::curl_free;
  if (name == "div_free") return FamilyKind::div_free;
  if (name == "scalar_h1") return FamilyKind::scalar_h1;
  if (name == "scalar_l2") return FamilyKind::scalar_l2;
  throw std::invalid_argument("unknown family kind '" + name + "'");
}

nlohmann::json to_json(const FamilyDescriptor& descriptor) {
  return {{"recipe", descriptor.recipe}, {"params", descriptor.params}, {"seed", descriptor.seed}};
}

namespace {

bool is_vector_kind(FamilyKind kind) {
  return kind == FamilyKind::curl_free || kind == FamilyKind::div_free;
}

// Columns hold the (optionally |k|-weighted) spectra of each member, so the
// Gram matrix is one product. Parseval makes this the L^2 / H^1 pairing.
Eigen::MatrixXcd spectral_columns(const Grid& grid, const std::vector<VectorField>& members,
                                  InnerProductKind inner) {
  if (members.empty()) return {};
  const auto comps = static_cast<std::size_t>(members.front().components());
  const auto rows = static_cast<Eigen::Index>(grid.size() * comps);
  Eigen::MatrixXcd cols(rows, static_cast<Eigen::Index>(members.size()));
  std::vector<double> weight(grid.size(), 1.0);
  if (inner == InnerProductKind::h1) {
    for_each_frequency(grid, [&](std::size_t i, std::span<const int> k) {
      weight[i] = std::sqrt(norm_squared(k));
    });
  }
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (members[m].components() != static_cast<int>(comps)) {
      throw GridMismatch("family members differ in component count");
    }
    for (std::size_t c = 0; c < comps; ++c) {
      const auto spec = members[m][static_cast<int>(c)].spectrum();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        cols(static_cast<Eigen::Index>(c * grid.size() + i), static_cast<Eigen::Index>(m)) = weight[i] * spec[i];
      }
    }
  }
  return cols;
}

Eigen::MatrixXcd gram_of(const Grid& grid, const std::vector<VectorField>& members,
                         InnerProductKind inner) {
  if (members.empty()) return Eigen::MatrixXcd(0, 0);
  const Eigen::MatrixXcd cols = spectral_columns(grid, members, inner);
  // G_{ab} = <m_a, m_b> = sum conj(spec_b) spec_a
  return (cols.adjoint() * cols).transpose();
}

void validate_modes(const Grid& grid, const std::vector<Frequency>& modes) {
  std::set<Frequency> seen;
  for (const auto& k : modes) {
    if (!grid.contains(k)) throw std::invalid_argument("mode outside the grid's frequency lattice");
    if (grid.on_nyquist_row(k)) throw std::invalid_argument("Nyquist modes are excluded from families");
    if (norm_squared(k) == 0.0) throw std::invalid_argument("zero mode is excluded from families");
    Frequency neg(k);
    for (auto& c : neg) c = -c;
    if (seen.count(k) || seen.count(neg)) {
      throw std::invalid_argument("modes must be distinct and not related by negation");
    }
    seen.insert(k);
  }
}

// sqrt2 cos(k.x) and sqrt2 sin(k.x) sampled on the grid.
std::pair<std::vector<double>, std::vector<double>> trig_pair(const Grid& grid, std::span<const int> k) {
  std::vector<double> c(grid.size()), s(grid.size());
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point_at(i, x);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase += k[a] * x[a];
    c[i] = std::numbers::sqrt2 * std::cos(phase);
    s[i] = std::numbers::sqrt2 * std::sin(phase);
  }
  return {std::move(c), std::move(s)};
}

VectorField polarized(const Grid& grid, std::span<const double> profile, std::span<const double> e) {
  std::vector<ScalarField> comps;
  for (double ej : e) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = ej * profile[i];
    comps.emplace_back(grid, std::move(v));
  }
  return VectorField(std::move(comps));
}

nlohmann::json modes_json(const std::vector<Frequency>& modes) {
  auto arr = nlohmann::json::array();
  for (const auto& k : modes) arr.push_back(k);
  return arr;
}

}  // namespace

OrthonormalFamily::OrthonormalFamily(FamilyKind kind, Grid grid, std::vector<VectorField> members,
                                     FamilyDescriptor descriptor)
    : kind_(kind), grid_(grid), members_(std::move(members)), descriptor_(std::move(descriptor)) {
  for (const auto& m : members_) require_same_grid(grid_, m.grid(), "orthonormal family");
  gram_ = gram_of(grid_, members_, natural_inner_product());
}

OrthonormalFamily OrthonormalFamily::prefix(std::size_t count) const {
  if (count > members_.size()) throw std::out_of_range("prefix longer than family");
  OrthonormalFamily out = *this;
  out.members_.erase(out.members_.begin() + static_cast<std::ptrdiff_t>(count), out.members_.end());
  const auto c = static_cast<Eigen::Index>(count);
  out.gram_ = gram_.topLeftCorner(c, c);
  out.descriptor_.params["prefix"] = count;
  return out;
}

std::vector<std::vector<double>> transverse_basis(std::span<const int> k) {
  const int d = static_cast<int>(k.size());
  const double r2 = norm_squared(k);
  if (r2 == 0.0) throw std::invalid_argument("transverse basis of the zero mode");
  std::vector<std::vector<double>> basis;
  std::vector<double> khat(k.begin(), k.end());
  for (auto& c : khat) c /= std::sqrt(r2);
  for (int j = 0; j < d && static_cast<int>(basis.size()) < d - 1; ++j) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[j] = 1.0;
    auto remove = [&](const std::vector<double>& u) {
      double p = 0.0;
      for (int a = 0; a < d; ++a) p += u[a] * v[a];
      for (int a = 0; a < d; ++a) v[a] -= p * u[a];
    };
    remove(khat);
    for (const auto& b : basis) remove(b);
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-6) continue;
    for (auto& c : v) c /= nrm;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Frequency> half_lattice_modes(const Grid& grid, double radius) {
  const int d = grid.dim();
  const double r2max = radius * radius * (1.0 + 1e-12);
  std::vector<Frequency> modes;
  for_each_frequency(grid, [&](std::size_t, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 == 0.0 || r2 > r2max || grid.on_nyquist_row(k)) return;
    for (int a = 0; a < d; ++a) {
      if (k[a] != 0) {
        if (k[a] > 0) modes.emplace_back(k.begin(), k.end());
        return;
      }
    }
  });
  std::sort(modes.begin(), modes.end(), [](const Frequency& a, const Frequency& b) {
    const double ra = norm_squared(a), rb = norm_squared(b);
    if (ra != rb) return ra < rb;
    return a > b;
  });
  return modes;
}

namespace {

std::vector<VectorField> curl_free_members(const Grid& grid, const std::vector<Frequency>& modes) {
  validate_modes(grid, modes);
  std::vector<VectorField> members;
  for (const auto& k : modes) {
    const double r = std::sqrt(norm_squared(k));
    std::vector<double> khat(k.begin(), k.end());
    for (auto& c : khat) c /= r;
    const auto [c, s] = trig_pair(grid, k);
    members.push_back(polarized(grid, c, khat));
    members.push_back(polarized(grid, s, khat));
  }
  return members;
}

std::vector<VectorField> div_free_members(const Grid& grid, const std::vector<Frequency>& modes,
                                          const PolarizationRule& rule, nlohmann::json& pols) {
  validate_modes(grid, modes);
  if (rule.choice == PolarizationRule::Choice::explicit_vectors && rule.vectors.size() != modes.size()) {
    throw std::invalid_argument("explicit polarization list must have one entry per mode");
  }
  std::vector<VectorField> members;
  pols = nlohmann::json::array();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto& k = modes[m];
    std::vector<std::vector<double>> es;
    switch (rule.choice) {
      case PolarizationRule::Choice::first: es = {transverse_basis(k).front()}; break;
      case PolarizationRule::Choice::all: es = transverse_basis(k); break;
      case PolarizationRule::Choice::explicit_vectors: es = rule.vectors[m]; break;
    }
    const double r = std::sqrt(norm_squared(k));
    const auto [c, s] = trig_pair(grid, k);
    for (const auto& e : es) {
      if (static_cast<int>(e.size()) != grid.dim()) throw std::invalid_argument("polarization has wrong dimension");
      double dotk = 0.0, nrm = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        dotk += e[a] * k[a];
        nrm += e[a] * e[a];
      }
      if (std::abs(dotk) / r > 1e-12) throw std::invalid_argument("polarization is not orthogonal to its mode");
      if (std::abs(nrm - 1.0) > 1e-12) throw std::invalid_argument("polarization is not a unit vector");
      members.push_back(polarized(grid, c, e));
      members.push_back(polarized(grid, s, e));
    }
    pols.push_back(es);
  }
  return members;
}

std::vector<VectorField> scalar_members(const Grid& grid, const std::vector<Frequency>& modes,
                                        FamilyKind kind, int components) {
  if (is_vector_kind(kind)) throw std::invalid_argument("scalar plane-wave family needs a scalar kind");
  if (components < 1) throw std::invalid_argument("component count must be >= 1");
  validate_modes(grid, modes);
  std::vector<VectorField> members;
  for (const auto& k : modes) {
    const double w = kind == FamilyKind::scalar_h1 ? std::sqrt(norm_squared(k)) : 1.0;
    auto [c, s] = trig_pair(grid, k);
    for (auto& v : c) v /= w;
    for (auto& v : s) v /= w;
    for (int comp = 0; comp < components; ++comp) {
      std::vector<double> e(static_cast<std::size_t>(components), 0.0);
      e[comp] = 1.0;
      members.push_back(polarized(grid, c, e));
      members.push_back(polarized(grid, s, e));
    }
  }
  return members;
}

}  // namespace

OrthonormalFamily mode_family_curl_free(const Grid& grid, const std::vector<Frequency>& modes) {
  return OrthonormalFamily(FamilyKind::curl_free, grid, curl_free_members(grid, modes),
                           {"modes_curl_free", {{"modes", modes_json(modes)}}, 0});
}

OrthonormalFamily mode_family_div_free(const Grid& grid, const std::vector<Frequency>& modes,
                                       const PolarizationRule& rule) {
  nlohmann::json pols;
  auto members = div_free_members(grid, modes, rule, pols);
  return OrthonormalFamily(FamilyKind::div_free, grid, std::move(members),
                           {"modes_div_free", {{"modes", modes_json(modes)}, {"polarizations", pols}}, 0});
}

OrthonormalFamily mode_family_scalar(const Grid& grid, const std::vector<Frequency>& modes,
                                     FamilyKind kind, int components) {
  return OrthonormalFamily(kind, grid, scalar_members(grid, modes, kind, components),
                           {"modes_scalar", {{"modes", modes_json(modes)}, {"components", components}}, 0});
}

OrthonormalFamily semiclassical_family(const Grid& grid, double radius, FamilyKind kind,
                                       const SemiclassicalOptions& options) {
  if (radius < 1.0) throw std::invalid_argument("semiclassical family needs radius >= 1 (empty family)");
  const auto modes = half_lattice_modes(grid, radius);
  std::size_t per_mode = 2;
  if (kind == FamilyKind::div_free && options.polarization.choice == PolarizationRule::Choice::all) {
    per_mode *= static_cast<std::size_t>(grid.dim() - 1);
  }
  if (!is_vector_kind(kind)) per_mode *= static_cast<std::size_t>(options.components);
  if (modes.size() * per_mode > options.cap) {
    throw std::invalid_argument("semiclassical family would have " + std::to_string(modes.size() * per_mode) +
                                " members, above the cap of " + std::to_string(options.cap));
  }
  nlohmann::json pols;
  auto members = [&] {
    switch (kind) {
      case FamilyKind::curl_free: return curl_free_members(grid, modes);
      case FamilyKind::div_free: return div_free_members(grid, modes, options.polarization, pols);
      default: return scalar_members(grid, modes, kind, options.components);
    }
  }();
  FamilyDescriptor desc{"semiclassical",
                        {{"radius", radius},
                         {"kind", to_string(kind)},
                         {"components", options.components},
                         {"polarization", options.polarization.choice == PolarizationRule::Choice::all ? "all" : "first"}},
                        0};
  return OrthonormalFamily(kind, grid, std::move(members), std::move(desc));
}

ScalarField random_real_field(const Grid& grid, double band, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<cplx> values(grid.size());
  for (auto& v : values) v = rng.normal();
  ScalarField raw(grid, std::move(values));
  const double b2 = band * band * (1.0 + 1e-12);
  auto filtered = apply_multiplier(raw, [&](std::span<const int> k) {
    const double r2 = norm_squared(k);
    return (r2 == 0.0 || r2 > b2 || grid.on_nyquist_row(k)) ? cplx{} : cplx{1.0};
  }).real_part();
  const double nrm = l2_norm(filtered);
  if (nrm == 0.0) throw std::invalid_argument("band contains no nonzero modes");
  return filtered * cplx{1.0 / nrm};
}

VectorField random_real_vector_field(const Grid& grid, int components, double band, std::uint64_t seed) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < components; ++c) {
    comps.push_back(random_real_field(grid, band, derive_seed(seed, static_cast<std::uint64_t>(c))));
  }
  return VectorField(std::move(comps));
}

std::size_t constrained_subspace_dimension(const Grid& grid, FamilyKind kind, double band, int components) {
  std::size_t lattice = 0;
  const double b2 = band * band * (1.0 + 1e-12);
  for_each_frequency(grid, [&](std::size_t, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 > 0.0 && r2 <= b2 && !grid.on_nyquist_row(k)) ++lattice;
  });
  switch (kind) {
    case FamilyKind::curl_free: return lattice;
    case FamilyKind::div_free: return lattice * static_cast<std::size_t>(grid.dim() - 1);
    default: return lattice * static_cast<std::size_t>(components);
  }
}

cplx family_inner_product(const VectorField& a, const VectorField& b, InnerProductKind inner) {
  if (inner == InnerProductKind::l2) return inner_product(a, b);
  cplx s{};
  for (int c = 0; c < a.components(); ++c) s += inner_product(gradient(a[c]), gradient(b[c]));
  return s;
}

OrthonormalFamily random_orthonormal_family(const Grid& grid, FamilyKind kind, std::size_t count,
                                            double band, std::uint64_t seed, int components) {
  const std::size_t dim = constrained_subspace_dimension(grid, kind, band, components);
  if (count > dim) {
    throw std::invalid_argument("requested " + std::to_string(count) +
                                " members but the constrained band subspace has dimension " + std::to_string(dim));
  }
  const int comps = is_vector_kind(kind) ? grid.dim() : components;
  const InnerProductKind inner = kind == FamilyKind::scalar_h1 ? InnerProductKind::h1 : InnerProductKind::l2;
  auto norm_of = [&](const VectorField& v) { return std::sqrt(family_inner_product(v, v, inner).real()); };

  std::vector<VectorField> members;
  for (std::size_t m = 0; m < count; ++m) {
    VectorField v = random_real_vector_field(grid, comps, band, derive_seed(seed, m));
    if (kind == FamilyKind::div_free) v = leray_project(v);
    if (kind == FamilyKind::curl_free) v = v - leray_project(v);
    const double initial = norm_of(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : members) {
        v -= prev * family_inner_product(v, prev, inner);
      }
    }
    const double remaining = norm_of(v);
    if (initial == 0.0 || remaining < 1e-8 * initial) {
      throw std::runtime_error("rank deficiency while orthonormalizing member " + std::to_string(m));
    }
    v *= cplx{1.0 / remaining};
    members.push_back(std::move(v));
  }
  FamilyDescriptor desc{"random",
                        {{"kind", to_string(kind)}, {"count", count}, {"band", band}, {"components", components}},
                        seed};
  OrthonormalFamily family(kind, grid, std::move(members), std::move(desc));
  const auto n = static_cast<Eigen::Index>(count);
  const double dev = n == 0 ? 0.0 : (family.gram() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw std::runtime_error("orthonormalization missed the 1e-10 Gram tolerance");
  return family;
}

double constraint_residual(const VectorField& member, FamilyKind kind) {
  switch (kind) {
    case FamilyKind::curl_free: return std::max(curl_residual(member), mean_residual(member));
    case FamilyKind::div_free: return std::max(divergence_residual(member), mean_residual(member));
    default: return mean_residual(member);
  }
}

OrthonormalityReport check_orthonormal(const OrthonormalFamily& family, InnerProductKind inner) {
  OrthonormalityReport report;
  report.gram = gram_of(family.grid(), family.members(), inner);
  const auto n = static_cast<Eigen::Index>(family.size());
  if (n > 0) {
    report.max_deviation = (report.gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  }
  for (const auto& m : family.members()) report.residuals.push_back(constraint_residual(m, family.kind()));
  return report;
}

}  // namespace divcurl
