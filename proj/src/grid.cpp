#include "divcurl/grid.hpp"

#include <numbers>
#include <string>

namespace divcurl {

Grid::Grid(int dim, int points_per_axis) : dim_(dim), n_(points_per_axis), size_(1) {
  if (dim < 2) {
    throw std::invalid_argument("grid dimension must be >= 2, got " + std::to_string(dim));
  }
  if (points_per_axis < 4 || points_per_axis % 2 != 0) {
    throw std::invalid_argument("points per axis must be an even integer >= 4, got " +
                                std::to_string(points_per_axis));
  }
  for (int a = 0; a < dim; ++a) {
    size_ *= static_cast<std::size_t>(points_per_axis);
  }
}

int Grid::index_of_frequency(int k) const {
  if (k <= -n_ / 2 || k > n_ / 2) {
    throw std::out_of_range("frequency " + std::to_string(k) + " outside (-n/2, n/2]");
  }
  return k >= 0 ? k : k + n_;
}

bool Grid::contains(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) return false;
  for (int c : k) {
    if (c <= -n_ / 2 || c > n_ / 2) return false;
  }
  return true;
}

bool Grid::on_nyquist_row(std::span<const int> k) const {
  for (int c : k) {
    if (c == n_ / 2) return true;
  }
  return false;
}

std::size_t Grid::flat_index_of_frequency(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) {
    throw GridMismatch("frequency has wrong dimension");
  }
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(index_of_frequency(k[a]));
  }
  return flat;
}

void Grid::frequency_at(std::size_t flat, std::span<int> k) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = frequency_of_index(static_cast<int>(flat % static_cast<std::size_t>(n_)));
    flat /= static_cast<std::size_t>(n_);
  }
}

Frequency Grid::frequency_at(std::size_t flat) const {
  Frequency k(static_cast<std::size_t>(dim_));
  frequency_at(flat, k);
  return k;
}

void Grid::point_at(std::size_t flat, std::span<double> x) const {
  const double h = 2.0 * std::numbers::pi / n_;
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw GridMismatch(std::string(context) + ": operands live on different grids");
  }
}

void for_each_frequency(const Grid& grid,
                        const std::function<void(std::size_t, std::span<const int>)>& fn) {
  const int d = grid.dim();
  const int n = grid.n();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    for (int a = 0; a < d; ++a) k[a] = grid.frequency_of_index(idx[a]);
    fn(flat, k);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < n) break;
      idx[a] = 0;
    }
  }
}

double norm_squared(std::span<const int> k) {
  double s = 0.0;
  for (int c : k) s += static_cast<double>(c) * c;
  return s;
}

}  // namespace divcurl
