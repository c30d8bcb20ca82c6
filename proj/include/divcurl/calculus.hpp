#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "divcurl/fields.hpp"

namespace divcurl {

inline constexpr double kConstraintTolerance = 1e-10;

/// A field failed a constraint gate (curl-free, divergence-free, zero mean).
/// The measured residual is kept so callers can report it.
class ConstraintViolation : public std::invalid_argument {
 public:
  ConstraintViolation(const std::string& what, double residual)
      : std::invalid_argument(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// All homogeneous operators send the k = 0 mode to zero. Derivative symbols
// are applied literally on Nyquist rows, so algebraic identities hold exactly
// there too (at the cost of reality of outputs on those rows).

/// Component j has spectrum i k_j phi(k).
VectorField gradient(const ScalarField& phi);
/// Spectrum sum_j i k_j F_j(k).
ScalarField divergence(const VectorField& field);
/// (curl F)_{jk} = d_j F_k - d_k F_j for j < k.
TwoFormField curl(const VectorField& field);

/// Exterior derivative of a 2-form; returns 3-form components for j < k < l in
/// lexicographic order (empty when d = 2).
std::vector<ScalarField> exterior_derivative(const TwoFormField& alpha);
/// Formal adjoint of d on 2-forms: (d* alpha)_k = -sum_j d_j alpha_{jk}.
VectorField codifferential(const TwoFormField& alpha);

/// Riesz transform with symbol k/|k| and value 0 at k = 0.
VectorField riesz(const ScalarField& f);
/// Single component of the Riesz transform.
ScalarField riesz_component(const ScalarField& f, int j);

VectorField leray_project(const VectorField& field);

/// Multiplier |k|^s with the zero mode sent to 0. For s < 0 the input must be
/// zero-mean; otherwise std::invalid_argument.
ScalarField fractional_laplacian(const ScalarField& f, double s);
VectorField fractional_laplacian(const VectorField& f, double s);

/// ||curl F|| / ||grad F||, zero when grad F vanishes.
double curl_residual(const VectorField& field);
/// ||div F|| / ||grad F||, zero when grad F vanishes.
double divergence_residual(const VectorField& field);
/// Largest |mean| over components.
double mean_residual(const VectorField& field);
double mean_residual(const ScalarField& field);

/// Zero-mean phi with gradient(phi) = E.
ScalarField scalar_potential(const VectorField& e, double tol = kConstraintTolerance);
/// alpha with d* alpha = B and d alpha = 0, the per-frequency solution
/// orthogonal to the kernel.
TwoFormField two_form_potential(const VectorField& b, double tol = kConstraintTolerance);
/// d = 3 only: A with curl A = B and div A = 0.
VectorField vector_potential_3d(const VectorField& b, double tol = kConstraintTolerance);

/// d = 3 identification of a 2-form with a vector: alpha_{jk} = eps_{jkl} A_l.
VectorField two_form_to_vector_3d(const TwoFormField& alpha);
/// d = 3 curl as a vector field.
VectorField classical_curl_3d(const VectorField& field);
/// Pointwise cross product in d = 3.
VectorField cross(const VectorField& a, const VectorField& b);

/// Pointwise (a ^ b)_{jk} = a_j b_k - a_k b_j.
TwoFormField wedge(const VectorField& a, const VectorField& b);
/// Pointwise sum_{j<k} beta_{jk} gamma_{jk}, no conjugation. This is the
/// coefficient of beta ^ *gamma against the volume form.
ScalarField pair_two_forms(const TwoFormField& beta, const TwoFormField& gamma);

double l2_norm_squared(const TwoFormField& alpha);
/// sum_j ||grad F_j||^2
double gradient_energy(const VectorField& field);
double gradient_energy(const ScalarField& field);

}  // namespace divcurl
