#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include "json.hpp"
#include <string>
#include <vector>

#include "divcurl/fields.hpp"

namespace divcurl {

enum class FamilyKind { curl_free, div_free, scalar_h1, scalar_l2 };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

enum class InnerProductKind { l2, h1 };

/// Named recipe plus parameters and seed; enough to regenerate a family.
struct FamilyDescriptor {
  std::string recipe;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const FamilyDescriptor& descriptor);

/// Ordered orthonormal system with its Gram matrix computed at construction.
/// Members are VectorFields: d components for curl_free / div_free, M
/// components (default 1) for the scalar kinds. scalar_h1 families are
/// orthonormal in the homogeneous H^1 inner product, all others in L^2.
class OrthonormalFamily {
 public:
  OrthonormalFamily(FamilyKind kind, Grid grid, std::vector<VectorField> members,
                    FamilyDescriptor descriptor);

  FamilyKind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const VectorField& operator[](std::size_t n) const { return members_[n]; }
  const std::vector<VectorField>& members() const { return members_; }
  const Eigen::MatrixXcd& gram() const { return gram_; }
  const FamilyDescriptor& descriptor() const { return descriptor_; }
  InnerProductKind natural_inner_product() const {
    return kind_ == FamilyKind::scalar_h1 ? InnerProductKind::h1 : InnerProductKind::l2;
  }

  /// First count members as a new family (Gram is the leading block).
  OrthonormalFamily prefix(std::size_t count) const;

 private:
  FamilyKind kind_;
  Grid grid_;
  std::vector<VectorField> members_;
  Eigen::MatrixXcd gram_;
  FamilyDescriptor descriptor_;
};

/// Polarization choice for transverse plane waves.
struct PolarizationRule {
  enum class Choice { first, all, explicit_vectors };
  Choice choice = Choice::first;
  /// For explicit_vectors: one list of polarization vectors per mode.
  std::vector<std::vector<std::vector<double>>> vectors;

  static PolarizationRule first() { return {}; }
  static PolarizationRule all() { return {Choice::all, {}}; }
  static PolarizationRule explicit_list(std::vector<std::vector<std::vector<double>>> v) {
    return {Choice::explicit_vectors, std::move(v)};
  }
};

/// d - 1 orthonormal vectors orthogonal to k, deterministic in k.
std::vector<std::vector<double>> transverse_basis(std::span<const int> k);

/// Nonzero modes with |k| <= radius, one representative per +-k pair (first
/// nonzero component positive), Nyquist rows excluded, ordered by |k| and then
/// lexicographically descending.
std::vector<Frequency> half_lattice_modes(const Grid& grid, double radius);

/// Members sqrt2 (k/|k|) cos(k.x), sqrt2 (k/|k|) sin(k.x) per mode.
OrthonormalFamily mode_family_curl_free(const Grid& grid, const std::vector<Frequency>& modes);

/// Members sqrt2 e cos(k.x), sqrt2 e sin(k.x) per mode and polarization e.
OrthonormalFamily mode_family_div_free(const Grid& grid, const std::vector<Frequency>& modes,
                                       const PolarizationRule& rule);

/// Scalar plane waves, optionally C^M-valued: sqrt2 e_c cos(k.x) / w(k),
/// sqrt2 e_c sin(k.x) / w(k) per mode and component c, with w = |k| for
/// scalar_h1 and w = 1 for scalar_l2.
OrthonormalFamily mode_family_scalar(const Grid& grid, const std::vector<Frequency>& modes,
                                     FamilyKind kind, int components = 1);

struct SemiclassicalOptions {
  std::size_t cap = 20000;
  int components = 1;  // scalar kinds only
  PolarizationRule polarization = PolarizationRule::first();
};

/// Plane-wave family over all half-lattice modes with 0 < |k| <= radius.
OrthonormalFamily semiclassical_family(const Grid& grid, double radius, FamilyKind kind,
                                       const SemiclassicalOptions& options = {});

/// Random band-limited real fields projected onto the kind's constraint and
/// orthonormalized by modified Gram-Schmidt with one re-orthogonalization pass.
OrthonormalFamily random_orthonormal_family(const Grid& grid, FamilyKind kind, std::size_t count,
                                            double band, std::uint64_t seed, int components = 1);

/// Real dimension of the band-limited constraint subspace for a kind.
std::size_t constrained_subspace_dimension(const Grid& grid, FamilyKind kind, double band,
                                           int components = 1);

/// Random real band-limited zero-mean scalar field with unit L2 norm.
ScalarField random_real_field(const Grid& grid, double band, std::uint64_t seed);
/// As above, componentwise.
VectorField random_real_vector_field(const Grid& grid, int components, double band, std::uint64_t seed);

struct OrthonormalityReport {
  double max_deviation = 0.0;
  std::vector<double> residuals;  // per member, for the family's constraint
  Eigen::MatrixXcd gram;
};

cplx family_inner_product(const VectorField& a, const VectorField& b, InnerProductKind inner);

OrthonormalityReport check_orthonormal(const OrthonormalFamily& family, InnerProductKind inner);

/// Constraint residual of one member under a kind.
double constraint_residual(const VectorField& member, FamilyKind kind);

}  // namespace divcurl
