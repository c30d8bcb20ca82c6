#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace divcurl {

using cplx = std::complex<double>;

/// Lattice frequency k in Z^d. Components lie in (-n/2, n/2] on a grid.
using Frequency = std::vector<int>;

/// Raised for grid, shape, and kind mismatches between operands.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic grid on [0, 2pi)^d with normalized measure.
///
/// Values are stored row-major with axis 0 slowest. Frequency index i maps to
/// k = i for i <= n/2 and k = i - n otherwise, so the lattice is (-n/2, n/2]
/// per axis. The row k_j = n/2 is the Nyquist row.
class Grid {
 public:
  Grid(int dim, int points_per_axis);

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }
  int nyquist() const { return n_ / 2; }

  /// Largest band for which products of two band-limited fields stay alias-free.
  double alias_free_band() const { return n_ / 4.0; }

  int frequency_of_index(int i) const { return i <= n_ / 2 ? i : i - n_; }
  int index_of_frequency(int k) const;

  /// True when every component of k lies in (-n/2, n/2].
  bool contains(std::span<const int> k) const;
  bool on_nyquist_row(std::span<const int> k) const;

  std::size_t flat_index_of_frequency(std::span<const int> k) const;
  void frequency_at(std::size_t flat, std::span<int> k) const;
  Frequency frequency_at(std::size_t flat) const;
  void point_at(std::size_t flat, std::span<double> x) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

/// Calls fn(flat_index, k) for every lattice frequency in storage order.
void for_each_frequency(const Grid& grid,
                        const std::function<void(std::size_t, std::span<const int>)>& fn);

double norm_squared(std::span<const int> k);

}  // namespace divcurl
