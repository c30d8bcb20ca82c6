#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divcurl/calculus.hpp"
#include "divcurl/families.hpp"
#include "divcurl/record.hpp"
#include "divcurl/spectral.hpp"

namespace divcurl {

/// Runs body(i) for i in [0, count) on up to jobs threads. Results must be
/// written to preallocated slots so output order never depends on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------- identities

struct IdentityDeviations {
  double commutator_pairing = 0.0;
  double divergence_form = 0.0;
  std::optional<double> wedge_3d;  // d = 3 only
  double two_form = 0.0;
  double hodge_energy = 0.0;       // ||grad F||^2 = ||curl F||^2 + ||div F||^2
  double two_form_energy = 0.0;    // ||B||^2 = sum ||grad alpha_jk||^2
  std::optional<double> vector_potential_energy;  // d = 3: ||grad A||^2 = ||B||^2
  double riesz_representation = 0.0;               // E = R f

  double max() const;
  nlohmann::json to_json() const;
};

/// |a - b| / max(|a|, |b|), and 0 when both vanish.
double relative_deviation(cplx a, cplx b);

/// Evaluates every identity on one (u, E, B, F) tuple. E must be curl-free and
/// B divergence-free; F is an arbitrary field for the Hodge energy identity.
/// All fields must be limited to |k| <= band, with 3 band < n.
IdentityDeviations evaluate_identities(const ScalarField& u, const VectorField& e,
                                       const VectorField& b, const VectorField& f, double band);

struct IdentitySuiteConfig {
  int d = 2;
  int n = 32;
  double band = 4.0;
  int trials = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
};

ExperimentRecord identity_suite(const IdentitySuiteConfig& config);

// ------------------------------------------------------------------- scaling

enum class ScalingVariant { main, triangle, lorentz, interpolated, liebsob };

std::string to_string(ScalingVariant v);
ScalingVariant scaling_variant_from_string(const std::string& name);

/// How the paired families are built from the half-lattice modes of the ball.
struct PairFamilyRecipe {
  double radius = 0.0;
  /// "rotate": E_n longitudinal at k, B_n transverse at k rotated by a quarter
  /// turn in the (x_1, x_2) plane, polarized along k/|k| projected off that mode.
  std::string pairing = "rotate";
  /// "orthonormal": E from the curl-free family; "repeated": E_n = E_1 for all
  /// n and B from the full divergence-free semiclassical family.
  std::string e_mode = "orthonormal";
  std::string polarization = "all";  // B polarizations for e_mode=repeated
  int components = 1;                // M, liebsob only
};

struct PairedFamilies {
  std::vector<VectorField> e;
  std::vector<VectorField> b;
  nlohmann::json descriptor;
};

PairedFamilies build_paired_families(const Grid& grid, const PairFamilyRecipe& recipe,
                                     std::size_t count);

struct ScalingConfig {
  ScalingVariant variant = ScalingVariant::main;
  int d = 2;
  int n = 32;
  PairFamilyRecipe family;
  std::vector<std::size_t> n_list;
  std::optional<double> q;  // main/lorentz: d/(d-1); interpolated: in (1, d/(d-1))
  std::optional<std::vector<double>> weights;
  int certify_steps = 60;
  double certify_step = 1.0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

ExperimentRecord scaling_study(const ScalingConfig& config);

// ------------------------------------------------------------------ schatten

enum class SchattenKind { commutator, cwikel };

/// Recipes:
///   const:<a>                      constant a
///   mode:<a>:<k1>,<k2>,...         a cos(k.x)
///   modes:<a>:<k>;<k>;...          a sum of cos(k.x)
///   random:<a>:<band>:<seed>       a times a unit-L2 random band-limited field
///   bump:<a>:<width>               a exp(-|x - pi|^2 / (2 width^2)), periodic box
ScalarField make_u(const Grid& grid, const std::string& recipe);

/// [R, u] with the d components stacked as row blocks.
DenseOperator materialize_vector_commutator(const ScalarField& u, double band);

struct SchattenConfig {
  SchattenKind which = SchattenKind::commutator;
  int d = 2;
  int n = 48;
  double band = 12.0;
  double p = 2.0;
  std::vector<std::string> u_recipes;
  std::uint64_t seed = 0;
  int jobs = 1;
};

ExperimentRecord schatten_study(const SchattenConfig& config);

// ---------------------------------------------------------------- extremizer

struct ExtremizerConfig {
  int d = 2;
  int n = 16;
  std::size_t pairs = 8;
  std::size_t pool = 16;
  int steps = 100;
  double step_size = 0.1;
  std::uint64_t seed = 0;
};

ExperimentRecord extremizer_search(const ExtremizerConfig& config);

}  // namespace divcurl
