#pragma once

#include <span>
#include <vector>

#include "divcurl/fields.hpp"

namespace divcurl {

/// (grid average of |f|^p)^{1/p}; |f| is the pointwise Euclidean magnitude
/// for multi-component fields. Requires p >= 1.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);

/// Homogeneous seminorm: ||grad f||_p for s = 1, ||(-Delta)^{s/2} f||_p
/// otherwise. The mean of f is ignored (seminorm modulo constants).
double sobolev_seminorm(const ScalarField& f, double s, double p);

/// ||(-Delta)^{-s/2} g||_q, equal to the dual Sobolev norm when q = 2.
double neg_sobolev_proxy(const ScalarField& g, double s, double q);

/// Exact dual norm sup |<u, g>| over ||grad u||_2 = 1, evaluated spectrally.
double dual_norm_h1(const ScalarField& g);

struct DualCertificate {
  double lower_bound = 0.0;
  ScalarField witness;
  /// Objective after each accepted step, starting with the initial witness.
  std::vector<double> trace;
};

/// Certified lower bound for the W^{-1,q} dual norm of g: ascent of
/// |int u g| / ||grad u||_{q'} over test functions u, renormalized every
/// step. The first trace entry is the value at u0 = (-Delta)^{-1} g.
DualCertificate dual_certify(const ScalarField& g, double q, int steps, double step_size);

/// Finite nonnegative weight sequence.
class SequenceWeights {
 public:
  explicit SequenceWeights(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// Decreasing rearrangement.
  std::vector<double> decreasing() const;
  double lq_norm(double q) const;

 private:
  std::vector<double> values_;
};

/// Layer-cake norm int_0^inf #{n : lambda_n > t}^{1-1/d} dt, evaluated as
/// sum_n lambda*_n (n^{1-1/d} - (n-1)^{1-1/d}).
double lorentz_q1_norm(const SequenceWeights& weights, int d);

/// sup_n n^{1/p} s_n for a nonincreasing nonnegative list (1-based n).
double weak_lp_functional(std::span<const double> s, double p);

}  // namespace divcurl
