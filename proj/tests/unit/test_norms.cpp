#include "doctest.h"

#include "divcurl/calculus.hpp"
#include "divcurl/families.hpp"
#include "divcurl/norms.hpp"
#include "divcurl/rng.hpp"

using namespace divcurl;

TEST_CASE("lp norms of simple fields") {
  const Grid g(2, 16);
  CHECK(lp_norm(ScalarField::constant(g, cplx(0, -3)), 1.7) == doctest::Approx(3.0));
  // |cos| averages to 2/pi exactly on no finite grid, but |e^{ikx}| = 1 does.
  const std::vector<int> k{2, 3};
  CHECK(lp_norm(ScalarField::plane_wave(g, k), 4.0) == doctest::Approx(1.0));
  const cplx v[2] = {3.0, 4.0};
  CHECK(lp_norm(VectorField::constant(g, v), 2.5) == doctest::Approx(5.0));
  CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), std::invalid_argument);
}

TEST_CASE("Sobolev seminorm of a plane wave is |k|^s") {
  const Grid g(3, 8);
  const std::vector<int> k{1, 2, 2};
  const auto w = ScalarField::plane_wave(g, k);
  CHECK(sobolev_seminorm(w, 1.0, 2.0) == doctest::Approx(3.0));
  CHECK(sobolev_seminorm(w, 0.5, 3.0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(neg_sobolev_proxy(w, 1.0, 1.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dual H^1 norm equals the q = 2 proxy and the certificate start") {
  const Grid g(2, 16);
  const auto f = random_real_field(g, 5.0, 3);
  CHECK(dual_norm_h1(f) == doctest::Approx(neg_sobolev_proxy(f, 1.0, 2.0)).epsilon(1e-13));
  const auto cert = dual_certify(f, 2.0, 5, 1.0);
  CHECK(cert.trace.front() == doctest::Approx(dual_norm_h1(f)).epsilon(1e-12));
  CHECK(cert.lower_bound <= dual_norm_h1(f) * (1 + 1e-12));
  CHECK_THROWS_AS(dual_norm_h1(f + ScalarField::constant(g, 1.0)), std::invalid_argument);
}

TEST_CASE("dual certificate ascends monotonically and stays a valid pairing ratio (property)") {
  const Grid g(3, 8);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto f = random_real_field(g, 3.0, s);
    const auto cert = dual_certify(f, 1.5, 30, 1.0);
    for (std::size_t i = 1; i < cert.trace.size(); ++i) CHECK(cert.trace[i] > cert.trace[i - 1]);
    const double ratio = std::abs(integrate(cert.witness * f)) / lp_norm(gradient(cert.witness), 3.0);
    CHECK(ratio == doctest::Approx(cert.lower_bound).epsilon(1e-10));
  }
  CHECK(dual_certify(ScalarField(g), 1.5, 5, 1.0).lower_bound == 0.0);
  CHECK_THROWS(dual_certify(ScalarField(g), 1.0, 5, 1.0));
  CHECK_THROWS(dual_certify(ScalarField(g), 1.5, 0, 1.0));
}

TEST_CASE("Lorentz layer-cake norm") {
  CHECK(lorentz_q1_norm(SequenceWeights({1, 1, 1}), 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // Midpoint layer-cake oracle: int_0^max #{lambda > t}^{1-1/d} dt.
  RandomStream rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> lam(8);
    for (auto& x : lam) x = rng.uniform();
    const int d = 2 + trial % 3;
    double integral = 0.0;
    auto sorted = SequenceWeights(lam).decreasing();
    std::vector<double> cuts{0.0};
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) cuts.push_back(*it);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      const double mid = 0.5 * (cuts[i] + cuts[i - 1]);
      double count = 0;
      for (double x : lam) count += x > mid;
      integral += (cuts[i] - cuts[i - 1]) * std::pow(count, 1.0 - 1.0 / d);
    }
    CHECK(lorentz_q1_norm(SequenceWeights(lam), d) == doctest::Approx(integral).epsilon(1e-12));
  }
  CHECK_THROWS(SequenceWeights({1.0, -1.0}));
}

TEST_CASE("weak lp functional") {
  const std::vector<double> s{1.0, 0.5, 0.5, 0.1};
  CHECK(weak_lp_functional(s, 2.0) == doctest::Approx(1.0));
  const std::vector<double> flat{1.0, 0.9, 0.9};
  CHECK(weak_lp_functional(flat, 2.0) == doctest::Approx(std::sqrt(3.0) * 0.9));
  const std::vector<double> unsorted{0.1, 0.5};
  CHECK_THROWS(weak_lp_functional(unsorted, 2.0));
  CHECK(weak_lp_functional({}, 2.0) == 0.0);
}
