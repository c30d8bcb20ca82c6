#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "divcurl/grid.hpp"

namespace divcurl {

/// Complex grid function. Space values are the stored representation; the
/// spectrum is recomputed on request so a field never mutates after
/// construction and can be shared freely across threads.
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  ScalarField(Grid grid, std::vector<cplx> values);

  static ScalarField constant(const Grid& grid, cplx value);
  static ScalarField from_spectrum(const Grid& grid, std::vector<cplx> spectrum);
  static ScalarField from_function(const Grid& grid,
                                   const std::function<cplx(std::span<const double>)>& fn);
  /// e^{i k.x}
  static ScalarField plane_wave(const Grid& grid, std::span<const int> k);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }

  std::vector<cplx> spectrum() const;

  ScalarField real_part() const;
  ScalarField conj() const;
  double max_imag() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(cplx c);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, cplx c) { return a *= c; }
  friend ScalarField operator*(cplx c, ScalarField a) { return a *= c; }
  /// Pointwise product.
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// Field with an arbitrary number of scalar components on one grid. Ordinary
/// vector fields carry d components; C^M-valued functions carry M.
class VectorField {
 public:
  VectorField(Grid grid, int components);
  explicit VectorField(std::vector<ScalarField> components);

  static VectorField constant(const Grid& grid, std::span<const cplx> value);

  const Grid& grid() const { return grid_; }
  int components() const { return static_cast<int>(comps_.size()); }
  const ScalarField& operator[](int j) const { return comps_[static_cast<std::size_t>(j)]; }
  ScalarField& operator[](int j) { return comps_[static_cast<std::size_t>(j)]; }
  const std::vector<ScalarField>& parts() const { return comps_; }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(cplx c);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, cplx c) { return a *= c; }
  friend VectorField operator*(cplx c, VectorField a) { return a *= c; }
  /// Scalar times vector, pointwise.
  friend VectorField operator*(const ScalarField& s, const VectorField& v);

 private:
  Grid grid_;
  std::vector<ScalarField> comps_;
};

/// 2-form with components alpha^{(j,k)}, j < k, stored in lexicographic pair
/// order: (0,1), (0,2), ..., (0,d-1), (1,2), ...
class TwoFormField {
 public:
  explicit TwoFormField(Grid grid);
  TwoFormField(Grid grid, std::vector<ScalarField> components);

  static int component_count(int dim) { return dim * (dim - 1) / 2; }
  static int pair_index(int dim, int j, int k);

  const Grid& grid() const { return grid_; }
  int components() const { return static_cast<int>(comps_.size()); }
  /// Component (j, k); for j > k returns the negated (k, j) component.
  ScalarField at(int j, int k) const;
  const ScalarField& operator[](int index) const { return comps_[static_cast<std::size_t>(index)]; }
  ScalarField& operator[](int index) { return comps_[static_cast<std::size_t>(index)]; }
  const std::vector<ScalarField>& parts() const { return comps_; }

 private:
  Grid grid_;
  std::vector<ScalarField> comps_;
};

using Multiplier = std::function<cplx(std::span<const int>)>;

std::vector<cplx> to_spectrum(const ScalarField& f);

/// Applies the Fourier multiplier m. Throws std::domain_error if m is not
/// finite at some lattice point (the k = 0 value must be supplied by m).
ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m);
VectorField apply_multiplier(const VectorField& f, const Multiplier& m);

/// Normalized quadrature of f conj(g).
cplx inner_product(const ScalarField& f, const ScalarField& g);
cplx inner_product(const VectorField& f, const VectorField& g);
/// Same pairing evaluated on the spectral side (Parseval).
cplx spectral_inner_product(const ScalarField& f, const ScalarField& g);

/// Grid average of f.
cplx integrate(const ScalarField& f);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

/// Pointwise sum_j a_j b_j, no conjugation.
ScalarField dot(const VectorField& a, const VectorField& b);
/// Pointwise sum_n E_n . B_n.
ScalarField pointwise_dot_sum(std::span<const VectorField> e_list,
                              std::span<const VectorField> b_list);
/// Pointwise sum_j |a_j|^2.
ScalarField squared_magnitude(const VectorField& a);

/// Keeps spectral content with |k| <= band and drops everything else.
ScalarField band_limit(const ScalarField& f, double band);
VectorField band_limit(const VectorField& f, double band);

/// Relative L2 mass of f outside |k| <= band.
double out_of_band_fraction(const ScalarField& f, double band);

// Text dump format (version 1):
//   divcurl-field 1
//   <d> <n> <component count>
//   one "<re> <im>" line per value, component-major, row-major within a component
// Values are written with 17 significant digits so reads are exact.
void write_components(std::ostream& out, const Grid& grid, std::span<const ScalarField> comps);
std::vector<ScalarField> read_components(std::istream& in);

}  // namespace divcurl
