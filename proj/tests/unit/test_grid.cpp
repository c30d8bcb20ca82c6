#include "doctest.h"

#include <set>

#include "divcurl/fft.hpp"
#include "divcurl/grid.hpp"
#include "divcurl/rng.hpp"

using namespace divcurl;

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(Grid(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 7), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 2), std::invalid_argument);
  CHECK_NOTHROW(Grid(3, 4));
}

TEST_CASE("frequency lattice is (-n/2, n/2] with the documented index map") {
  const Grid g(2, 8);
  CHECK(g.frequency_of_index(0) == 0);
  CHECK(g.frequency_of_index(4) == 4);
  CHECK(g.frequency_of_index(5) == -3);
  CHECK(g.frequency_of_index(7) == -1);
  for (int i = 0; i < 8; ++i) CHECK(g.index_of_frequency(g.frequency_of_index(i)) == i);
  std::set<Frequency> seen;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto k = g.frequency_at(f);
    CHECK(g.flat_index_of_frequency(k) == f);
    seen.insert(k);
  }
  CHECK(seen.size() == g.size());
  CHECK(g.on_nyquist_row(Frequency{4, 0}));
  CHECK_FALSE(g.on_nyquist_row(Frequency{3, -3}));
  CHECK_FALSE(g.contains(Frequency{-4, 0}));
}

TEST_CASE("storage is row-major with axis 0 slowest") {
  const Grid g(2, 4);
  std::vector<double> x(2);
  g.point_at(1, x);
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(2 * std::numbers::pi / 4));
  g.point_at(4, x);
  CHECK(x[0] == doctest::Approx(2 * std::numbers::pi / 4));
}

TEST_CASE("fft matches a brute-force DFT on n = 4") {
  const Grid g(2, 4);
  RandomStream rng(3);
  std::vector<cplx> v(g.size());
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  std::vector<cplx> spec(g.size());
  fft::forward(g, v, spec);
  std::vector<double> x(2);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto k = g.frequency_at(f);
    cplx acc = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      g.point_at(p, x);
      acc += v[p] * std::exp(cplx(0, -(k[0] * x[0] + k[1] * x[1])));
    }
    acc /= static_cast<double>(g.size());
    CHECK(std::abs(spec[f] - acc) < 1e-13);
  }
  std::vector<cplx> back(g.size());
  fft::inverse(g, spec, back);
  for (std::size_t p = 0; p < g.size(); ++p) CHECK(std::abs(back[p] - v[p]) < 1e-13);
}

TEST_CASE("seed derivation is deterministic and separates streams") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
  RandomStream a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}
