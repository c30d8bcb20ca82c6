#include "doctest.h"

#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"

using namespace divcurl;

TEST_CASE("power-law fit recovers exponents and needs three points") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  const auto fit = fit_power_law(x, y);
  REQUIRE(fit);
  CHECK(fit->exponent == doctest::Approx(0.5));
  CHECK(fit->residual < 1e-12);
  CHECK_FALSE(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
  std::vector<double> s;
  for (int n = 1; n <= 400; ++n) s.push_back(std::pow(n, -0.5));
  CHECK(*tail_slope(s) == doctest::Approx(-0.5));
}

TEST_CASE("identity evaluation with E = 0 is exactly zero") {
  const Grid g(3, 12);
  const auto u = random_real_field(g, 3.0, 1);
  const auto b = leray_project(random_real_vector_field(g, 3, 3.0, 2));
  const auto f = random_real_vector_field(g, 3, 3.0, 3);
  const auto dev = evaluate_identities(u, VectorField(g, 3), b, f, 3.0);
  CHECK(dev.commutator_pairing == 0.0);
  CHECK(dev.divergence_form == 0.0);
  CHECK(dev.two_form == 0.0);
  CHECK(*dev.wedge_3d == 0.0);
}

TEST_CASE("identity suite is grid-refinement stable") {
  const auto coarse = identity_suite({2, 16, 4.0, 3, 11, 1});
  const auto fine = identity_suite({2, 32, 4.0, 3, 11, 1});
  const double a = coarse.metrics["max_identity_deviation"], b = fine.metrics["max_identity_deviation"];
  CHECK(a < 1e-10);
  CHECK(b <= 10.0 * std::max(a, 1e-15));
}

TEST_CASE("scaling study: triangle baseline, Lorentz predictor, and errors") {
  ScalingConfig c;
  c.variant = ScalingVariant::triangle;
  c.d = 2;
  c.n = 16;
  c.family.radius = 4.0;
  c.n_list = {2, 4, 8, 16};
  const auto tri = scaling_study(c);
  REQUIRE(tri.fit);
  CHECK(tri.fit->exponent == doctest::Approx(1.0).epsilon(0.05));

  c.variant = ScalingVariant::lorentz;
  c.q = 2.0;
  c.n_list = {1, 2, 3};
  c.weights = std::vector<double>{1, 1, 1};
  const auto lor = scaling_study(c);
  CHECK(*lor.series.back().predictor == doctest::Approx(std::sqrt(3.0)));
  for (const auto& p : lor.series) CHECK(p.measured <= *lor.ratio_max() * *p.predictor * (1 + 1e-12));

  c.n_list = {1, 2};
  const auto short_series = scaling_study(c);
  CHECK(short_series.has_fit);
  CHECK_FALSE(short_series.fit);
  CHECK(short_series.to_json()["fit"].is_null());

  c.n_list = {1, 1000};
  c.weights.reset();
  CHECK_THROWS(scaling_study(c));
  c.variant = ScalingVariant::interpolated;
  c.n_list = {1, 2, 3};
  c.q = 2.5;
  CHECK_THROWS(scaling_study(c));
}

TEST_CASE("B-only orthonormal main variant stays within the d = 3 bound") {
  ScalingConfig c;
  c.variant = ScalingVariant::main;
  c.d = 3;
  c.n = 12;
  c.family = {3.5, "rotate", "repeated", "all", 1};
  c.n_list = {8, 16, 32, 64};
  c.certify_steps = 10;
  const auto r = scaling_study(c);
  REQUIRE(r.fit);
  CHECK(r.fit->exponent <= 2.0 / 3.0 + 0.1);
}

TEST_CASE("Schatten study: exact-zero constant commutator and homogeneity") {
  SchattenConfig c;
  c.d = 2;
  c.n = 24;
  c.band = 5.0;
  c.p = 2.0;
  c.u_recipes = {"const:3", "mode:1:1,1", "mode:7:1,1"};
  const auto r = schatten_study(c);
  CHECK(r.metrics["per_u"][0]["exact_zero"] == true);
  CHECK_FALSE(r.series[0].ratio);
  CHECK(*r.series[1].ratio == doctest::Approx(*r.series[2].ratio).epsilon(1e-12));
  CHECK(r.metrics["partial_sum_violations"] == 0);
  c.which = SchattenKind::cwikel;
  CHECK_THROWS(schatten_study(c));
  CHECK_THROWS(make_u(Grid(2, 8), "mode:1:1"));
  CHECK_THROWS(make_u(Grid(2, 8), "wave:1"));
}

TEST_CASE("extremizer contracts") {
  ExtremizerConfig c{2, 16, 1, 4, 0, 0.1, 3};
  const auto still = extremizer_search(c);
  CHECK(still.series.size() == 1);
  CHECK(still.metrics["final_objective"] == still.metrics["initial_objective"]);

  c.steps = 15;
  const auto moved = extremizer_search(c);
  CHECK(moved.metrics["initial_objective"] == still.metrics["initial_objective"]);
  for (std::size_t i = 1; i < moved.series.size(); ++i)
    CHECK(moved.series[i].measured >= moved.series[i - 1].measured);
  CHECK(moved.passed());

  c.pairs = 9;
  CHECK_THROWS(extremizer_search(c));
}

TEST_CASE("records serialize deterministically") {
  const auto a = identity_suite({2, 16, 4.0, 2, 5, 1});
  const auto b = identity_suite({2, 16, 4.0, 2, 5, 2});
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.series_csv() == b.series_csv());
  CHECK(a.series_csv().rfind("control,measured,predictor,ratio\n", 0) == 0);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
