#include "doctest.h"

#include "divcurl/calculus.hpp"
#include "divcurl/families.hpp"
#include "divcurl/rng.hpp"

using namespace divcurl;

TEST_CASE("gradient of a plane wave uses symbol i k") {
  const Grid g(2, 8);
  const std::vector<int> k{2, -1};
  const auto grad = gradient(ScalarField::plane_wave(g, k));
  const auto f = g.flat_index_of_frequency(k);
  CHECK(std::abs(grad[0].spectrum()[f] - cplx(0, 2)) < 1e-13);
  CHECK(std::abs(grad[1].spectrum()[f] - cplx(0, -1)) < 1e-13);
}

TEST_CASE("curl of a gradient and divergence of a curl vanish (property)") {
  for (int d : {2, 3, 4}) {
    const Grid g(d, d == 4 ? 8 : 12);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto phi = random_real_field(g, 3.0, seed);
      CHECK(curl_residual(gradient(phi)) < 1e-14);
      const auto b = leray_project(random_real_vector_field(g, d, 3.0, seed + 100));
      CHECK(divergence_residual(b) < 1e-14);
      const auto alpha = two_form_potential(b);
      for (const auto& c : exterior_derivative(alpha)) CHECK(l2_norm(c) < 1e-13);
      CHECK(l2_norm(codifferential(alpha) - b) < 1e-13 * l2_norm(b));
    }
  }
}

TEST_CASE("Leray projection is idempotent and the Riesz transform is an isometry on mean-free f") {
  const Grid g(3, 8);
  const auto v = random_real_vector_field(g, 3, 3.0, 5);
  const auto p1 = leray_project(v);
  CHECK(l2_norm(leray_project(p1) - p1) < 1e-14);
  const auto f = random_real_field(g, 3.0, 6);
  CHECK(l2_norm(riesz(f)) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
}

TEST_CASE("potentials reconstruct their fields") {
  const Grid g(3, 12);
  const auto phi = random_real_field(g, 4.0, 1);
  const auto e = gradient(phi);
  CHECK(l2_norm(gradient(scalar_potential(e)) - e) < 1e-13);
  const auto b = leray_project(random_real_vector_field(g, 3, 4.0, 2));
  const auto a = vector_potential_3d(b);
  CHECK(l2_norm(classical_curl_3d(a) - b) < 1e-13);
  CHECK(l2_norm(divergence(a)) < 1e-13);
  const auto alpha = two_form_potential(b);
  CHECK(l2_norm(two_form_to_vector_3d(alpha) - a) < 1e-13);
}

TEST_CASE("constraint gates report the residual") {
  const Grid g(2, 8);
  const auto v = random_real_vector_field(g, 2, 3.0, 9);
  try {
    scalar_potential(v);
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& err) {
    CHECK(err.residual() > 1e-3);
  }
  CHECK_THROWS_AS(two_form_potential(v), ConstraintViolation);
  CHECK_THROWS_AS(vector_potential_3d(leray_project(random_real_vector_field(Grid(2, 8), 2, 3.0, 1))),
                  std::invalid_argument);
}

TEST_CASE("fractional Laplacian composes and rejects nonzero mean for negative order") {
  const Grid g(2, 16);
  const auto f = random_real_field(g, 5.0, 4);
  const auto back = fractional_laplacian(fractional_laplacian(f, 0.7), -0.7);
  CHECK(l2_norm(back - f) < 1e-13);
  CHECK(l2_norm(fractional_laplacian(f, 2.0) + divergence(gradient(f))) < 1e-12);
  CHECK_THROWS_AS(fractional_laplacian(f + ScalarField::constant(g, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("Hodge energy identity for arbitrary fields (property)") {
  for (int d : {2, 3}) {
    const Grid g(d, 12);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto f = random_real_vector_field(g, d, 4.0, s);
      const double div = l2_norm(divergence(f));
      CHECK(gradient_energy(f) == doctest::Approx(l2_norm_squared(curl(f)) + div * div).epsilon(1e-12));
    }
  }
}

TEST_CASE("wedge in d = 3 matches the cross product") {
  const Grid g(3, 8);
  const auto a = random_real_vector_field(g, 3, 2.0, 1), b = random_real_vector_field(g, 3, 2.0, 2);
  const auto w = two_form_to_vector_3d(wedge(a, b));
  CHECK(l2_norm(w - cross(a, b)) < 1e-14);
}
