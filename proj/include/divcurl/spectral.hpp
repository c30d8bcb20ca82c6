#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "divcurl/fields.hpp"

namespace divcurl {

/// Zero-excluded banded lattice {k : 0 < |k| <= band} in a fixed order
/// (|k| ascending, ties lexicographically descending). Rows and columns of
/// materialized operators are indexed by it.
class BandIndex {
 public:
  BandIndex(const Grid& grid, double band);

  const Grid& grid() const { return grid_; }
  double band() const { return band_; }
  std::size_t size() const { return modes_.size(); }
  const Frequency& mode(std::size_t i) const { return modes_[i]; }
  const std::vector<Frequency>& modes() const { return modes_; }
  std::optional<std::size_t> position(const Frequency& k) const;

  /// Spectral coefficients of f at the band modes.
  Eigen::VectorXcd restrict(const ScalarField& f) const;
  /// Field whose spectrum is the given band vector and zero elsewhere.
  ScalarField extend(const Eigen::VectorXcd& coefficients) const;

 private:
  Grid grid_;
  double band_;
  std::vector<Frequency> modes_;
  std::map<Frequency, std::size_t> lookup_;
};

/// Finite matrix of a discretized operator in the Fourier basis, with lazily
/// computed singular values (thread-safe, computed once).
class DenseOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXcd matrix);
  DenseOperator(Eigen::MatrixXcd matrix, std::shared_ptr<const BandIndex> index,
                double truncation = 0.0);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }
  /// Band index of rows and columns, when the operator came from a field.
  const BandIndex* index() const { return index_.get(); }
  /// Relative L2 mass of the multiplier field that fell outside the band.
  double truncation() const { return truncation_; }

  /// Nonincreasing singular values; min(rows, cols) of them.
  const std::vector<double>& singular_values() const;

 private:
  struct Cache {
    std::once_flag once;
    std::vector<double> values;
  };
  Eigen::MatrixXcd matrix_;
  std::shared_ptr<const BandIndex> index_;
  double truncation_ = 0.0;
  std::shared_ptr<Cache> cache_;
};

/// Nonincreasing singular values of a dense matrix. Throws std::runtime_error
/// if the factorization does not converge.
std::vector<double> singular_values(const Eigen::MatrixXcd& matrix);
std::vector<double> singular_values(const DenseOperator& op);

/// [R_j, u] on the band: entry (k, m) = (k_j/|k| - m_j/|m|) u^(k - m).
/// Requires band < n/2; u is truncated to the band and the loss is reported.
DenseOperator materialize_commutator(const ScalarField& u, int j, double band);

/// u (-Delta)^{-1/2} on the band: entry (k, m) = u^(k - m) / |m|.
DenseOperator materialize_cwikel(const ScalarField& u, double band);

struct TracePairing {
  double lhs = 0.0;  // sum_n |<x_n, K y_n>|
  double rhs = 0.0;  // sum_{n <= N} s_n(K)
};

/// x_n are the columns of xs (codomain), y_n the columns of ys (domain).
TracePairing trace_pairing_bound(const DenseOperator& op, const Eigen::MatrixXcd& xs,
                                 const Eigen::MatrixXcd& ys);

struct PartialSum {
  double sum = 0.0;  // sum_{n <= N} s_n
  double cap = 0.0;  // p/(p-1) ||s||_{weak p} N^{1-1/p}
};

PartialSum partial_sum_bound(std::span<const double> s, double p, std::size_t count);

/// Hermitian generators with gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk.
class CliffordAlgebra {
 public:
  CliffordAlgebra(int dim, std::vector<Eigen::MatrixXcd> generators);

  int dim() const { return dim_; }
  Eigen::Index size() const { return generators_.empty() ? 0 : generators_.front().rows(); }
  const Eigen::MatrixXcd& operator[](int j) const { return generators_[static_cast<std::size_t>(j)]; }
  const std::vector<Eigen::MatrixXcd>& generators() const { return generators_; }

  /// Largest entry of |gamma_j gamma_k + gamma_k gamma_j - 2 delta_jk| over all pairs.
  double anticommutation_defect() const;
  double hermiticity_defect() const;

 private:
  int dim_;
  std::vector<Eigen::MatrixXcd> generators_;
};

/// Jordan-Wigner tensor construction, size 2^{floor(d/2)}, 2 <= d <= 8.
CliffordAlgebra clifford_generators(int d);

struct CommutatorRecovery {
  Eigen::MatrixXcd lhs;  // identity (x) [R_j, u]
  Eigen::MatrixXcd rhs;  // (C gamma_j + gamma_j C) / 2, C = [gamma.R, u]
  double deviation = 0.0;
};

/// Rebuilds [R_j, u] from [gamma.R, u] = sum_l gamma_l (x) [R_l, u] on
/// C^N (x) band space.
CommutatorRecovery clifford_commutator_recovery(const ScalarField& u, int j, double band);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace divcurl
