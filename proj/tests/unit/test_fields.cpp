#include "doctest.h"

#include <sstream>

#include "divcurl/families.hpp"
#include "divcurl/fields.hpp"

using namespace divcurl;

namespace {

ScalarField cos_field(const Grid& g, std::vector<int> k, double amp = 1.0) {
  return ScalarField::from_function(g, [&](std::span<const double> x) {
    double ph = 0;
    for (std::size_t a = 0; a < k.size(); ++a) ph += k[a] * x[a];
    return cplx(amp * std::cos(ph));
  });
}

}  // namespace

TEST_CASE("plane wave has a single unit Fourier coefficient") {
  const Grid g(2, 8);
  const std::vector<int> k{2, -1};
  const auto spec = ScalarField::plane_wave(g, k).spectrum();
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double want = g.frequency_at(f) == Frequency(k) ? 1.0 : 0.0;
    CHECK(std::abs(spec[f] - want) < 1e-14);
  }
}

TEST_CASE("quadrature of trigonometric products is exact below Nyquist") {
  const Grid g(2, 16);
  const auto a = cos_field(g, {3, 1});
  const auto b = cos_field(g, {3, 1});
  const auto c = cos_field(g, {1, 2});
  CHECK(inner_product(a, b).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(inner_product(a, c)) < 1e-15);
  CHECK(std::abs(inner_product(a, c) - spectral_inner_product(a, c)) < 1e-15);
  CHECK(std::abs(inner_product(a, a) - spectral_inner_product(a, a)) < 1e-14);
}

TEST_CASE("multiplier must be finite everywhere") {
  const Grid g(2, 8);
  const auto f = cos_field(g, {1, 0});
  CHECK_THROWS_AS(apply_multiplier(f, [](std::span<const int> k) { return cplx(1.0 / norm_squared(k)); }),
                  std::domain_error);
}

TEST_CASE("mismatched grids are rejected") {
  const ScalarField a(Grid(2, 8)), b(Grid(2, 16));
  CHECK_THROWS_AS(inner_product(a, b), GridMismatch);
  CHECK_THROWS_AS(a + b, GridMismatch);
}

TEST_CASE("band limiting and out-of-band fraction") {
  const Grid g(2, 16);
  const auto f = cos_field(g, {1, 0}) + cos_field(g, {5, 0});
  CHECK(out_of_band_fraction(f, 3.0) == doctest::Approx(std::sqrt(0.5)));
  const auto lim = band_limit(f, 3.0);
  CHECK(l2_norm(lim - cos_field(g, {1, 0})) < 1e-14);
  CHECK(out_of_band_fraction(lim, 3.0) < 1e-15);
}

TEST_CASE("two-form component indexing is antisymmetric and lexicographic") {
  CHECK(TwoFormField::component_count(4) == 6);
  CHECK(TwoFormField::pair_index(4, 0, 1) == 0);
  CHECK(TwoFormField::pair_index(4, 0, 3) == 2);
  CHECK(TwoFormField::pair_index(4, 1, 2) == 3);
  CHECK(TwoFormField::pair_index(4, 2, 3) == 5);
  const Grid g(3, 4);
  TwoFormField w(g);
  w[TwoFormField::pair_index(3, 0, 2)] = ScalarField::constant(g, 2.0);
  CHECK(w.at(2, 0)[0] == cplx(-2.0));
}

TEST_CASE("field dump round-trips exactly") {
  const Grid g(2, 8);
  const auto f = random_real_vector_field(g, 2, 3.0, 11);
  std::stringstream ss;
  write_components(ss, g, f.parts());
  const auto back = read_components(ss);
  REQUIRE(back.size() == 2);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[static_cast<std::size_t>(c)][i] == f[c][i]);
  std::stringstream bad("divcurl-field 2\n2 8 1\n");
  CHECK_THROWS(read_components(bad));
}
