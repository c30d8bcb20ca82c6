// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned
// below and never read from the environment.
#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "divcurl/config.hpp"
#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"
#include "divcurl/rng.hpp"
#include "divcurl/runner.hpp"

using namespace divcurl;

namespace tol {
constexpr double identity = 1e-9;
constexpr double identity_seconds = 120;
constexpr double trace_slack = -1e-10;
constexpr double trace_equality = 1e-10;
constexpr double clifford = 1e-14;
constexpr double recovery = 1e-10;
constexpr double ratio_spread = 3.0;
constexpr double rhs_range = 10.0;
constexpr double slope_band = 0.15;
constexpr double main_exponent_slack = 0.1;
constexpr double triangle_band = 0.05;
constexpr double one_sided_slack = 0.1;
constexpr double liebsob_slack = 0.15;
constexpr double liebsob_stability = 2.0;
constexpr double lorentz_relative = 1e-10;
}  // namespace tol

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Spectra gathered by earlier criteria for the partial-sum check, with the
// dimension each came from.
std::vector<std::pair<int, std::vector<double>>> g_spectra;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome identities() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string parts;
  for (int d : {2, 3}) {
    IdentitySuiteConfig c{d, d == 2 ? 32 : 16, d == 2 ? 8.0 : 4.0, 20, 7, 1};
    const auto r = identity_suite(c);
    const double dev = r.metrics["max_identity_deviation"];
    const bool has_wedge = r.metrics["identity_max_deviation"].contains("wedge_3d");
    if (d == 3 && !has_wedge) return {false, "d=3 run did not evaluate the wedge identity"};
    worst = std::max(worst, dev);
    parts += fmt::format(" d={} max dev {:.2e};", d, dev);
  }
  const double t = seconds_since(t0);
  return {worst <= tol::identity && t <= tol::identity_seconds,
          fmt::format("20 trials each,{} {:.1f} s", parts, t)};
}

Eigen::MatrixXcd gaussian(Eigen::Index r, Eigen::Index c, RandomStream& rng) {
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = {rng.normal(), rng.normal()};
  return m;
}

Eigen::MatrixXcd orthonormal_columns(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(gaussian(rows, cols, rng)).householderQ() *
         Eigen::MatrixXcd::Identity(rows, cols);
}

Outcome trace_inequality() {
  RandomStream rng(derive_seed(2024, 2));
  double min_slack = INFINITY, max_eq = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto m = static_cast<Eigen::Index>(1 + rng.next_u64() % 64);
    const auto n = static_cast<Eigen::Index>(1 + rng.next_u64() % 64);
    const auto r = static_cast<Eigen::Index>(1 + rng.next_u64() % static_cast<std::uint64_t>(std::min(m, n)));
    const DenseOperator op(gaussian(m, n, rng));
    const auto tp = trace_pairing_bound(op, orthonormal_columns(m, r, rng), orthonormal_columns(n, r, rng));
    min_slack = std::min(min_slack, tp.rhs - tp.lhs);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto eq = trace_pairing_bound(op, svd.matrixU().leftCols(r), svd.matrixV().leftCols(r));
    max_eq = std::max(max_eq, std::abs(eq.rhs - eq.lhs));
    g_spectra.emplace_back(2, op.singular_values());
  }
  return {min_slack >= tol::trace_slack && max_eq <= tol::trace_equality,
          fmt::format("100 triples up to 64x64, min slack {:.3e}, max equality gap {:.2e}", min_slack, max_eq)};
}

Outcome partial_sums() {
  std::size_t checks = 0, violations = 0;
  for (const auto& [d, s] : g_spectra) {
    for (double p : {static_cast<double>(d), 1.5, 2.0}) {
      for (std::size_t n = 1; n <= s.size(); ++n) {
        const auto b = partial_sum_bound(s, p, n);
        ++checks;
        if (b.sum > b.cap) ++violations;
      }
    }
  }
  return {violations == 0 && checks > 0,
          fmt::format("{} spectra, {} (p, N) checks, {} violations", g_spectra.size(), checks, violations)};
}

Outcome clifford() {
  double anti = 0.0, rec = 0.0;
  for (int d = 2; d <= 6; ++d) anti = std::max(anti, clifford_generators(d).anticommutation_defect());
  for (int d : {2, 3}) {
    const Grid g(d, 12);
    const auto u = random_real_field(g, 2.0, derive_seed(4, static_cast<std::uint64_t>(d)));
    for (int j = 0; j < d; ++j) rec = std::max(rec, clifford_commutator_recovery(u, j, 2.0).deviation);
  }
  return {anti <= tol::clifford && rec <= tol::recovery,
          fmt::format("anticommutation defect {:.1e} (d=2..6), recovery deviation {:.1e} (d=2,3)", anti, rec)};
}

Outcome schatten(SchattenConfig c, double target_slope, bool check_range) {
  const auto r = schatten_study(c);
  double lo = INFINITY, hi = 0.0;
  for (const auto& p : r.series) {
    lo = std::min(lo, p.control);
    hi = std::max(hi, p.control);
  }
  const auto spread = r.ratio_spread();
  const double smin = r.metrics["tail_slope_min"], smax = r.metrics["tail_slope_max"];
  const Grid g(c.d, c.n);
  for (const auto& recipe : c.u_recipes) {
    const auto u = make_u(g, recipe);
    g_spectra.emplace_back(c.d, c.which == SchattenKind::cwikel ? materialize_cwikel(u, c.band).singular_values()
                                                                 : materialize_vector_commutator(u, c.band).singular_values());
  }
  const bool range_ok = !check_range || hi / lo >= tol::rhs_range;
  const bool pass = spread && *spread <= tol::ratio_spread && range_ok &&
                    smin >= target_slope - tol::slope_band && smax <= target_slope + tol::slope_band;
  return {pass, fmt::format("ratio spread {:.3f}, rhs norm range {:.1f}x, tail slopes [{:.3f}, {:.3f}] vs {:.3f}",
                            spread.value_or(NAN), hi / lo, smin, smax, target_slope)};
}

Outcome commutator_scaling() {
  SchattenConfig c;
  c.which = SchattenKind::commutator;
  c.d = 2;
  c.n = 48;
  c.band = 12.0;
  c.p = 2.0;
  c.u_recipes = {"mode:0.25:1,0", "mode:1:2,1", "modes:1:1,1;2,-1", "modes:2:1,0;0,2;2,1", "mode:3:0,3"};
  return schatten(c, -0.5, true);
}

Outcome cwikel_scaling() {
  SchattenConfig c;
  c.which = SchattenKind::cwikel;
  c.d = 3;
  c.n = 12;
  c.band = 5.0;
  c.p = 3.0;
  c.u_recipes = {"const:1", "mode:1:1,0,0", "modes:0.3:1,1,0;0,1,-1", "mode:0.5:2,1,1",
                 "modes:2:1,0,0;0,1,0;0,0,1"};
  return schatten(c, -1.0 / 3.0, false);
}

Outcome main_scaling() {
  ScalingConfig c;
  c.variant = ScalingVariant::main;
  c.d = 2;
  c.n = 32;
  c.family.radius = 6.0;
  c.n_list = {4, 8, 16, 32, 64, 96};
  c.q = 2.0;
  const auto main = scaling_study(c);
  c.variant = ScalingVariant::triangle;
  const auto tri = scaling_study(c);
  if (!main.fit || !tri.fit) return {false, "fit missing"};
  const bool pass = main.fit->exponent <= 0.5 + tol::main_exponent_slack &&
                    std::abs(tri.fit->exponent - 1.0) <= tol::triangle_band;
  return {pass, fmt::format("N up to {}: dual-norm exponent {:.3f} (bound {:.2f}), triangle exponent {:.3f}",
                            c.n_list.back(), main.fit->exponent, 0.5 + tol::main_exponent_slack,
                            tri.fit->exponent)};
}

Outcome one_sided() {
  ScalingConfig c;
  c.variant = ScalingVariant::main;
  c.d = 3;
  c.n = 16;
  c.family = {5.0, "rotate", "repeated", "all", 1};
  c.n_list = {8, 16, 32, 64, 128, 256};
  c.q = 1.5;
  c.certify_steps = 40;
  const auto r = scaling_study(c);
  if (!r.fit) return {false, "fit missing"};
  const double certified = r.metrics.value("certified_exponent", NAN);
  return {r.fit->exponent <= 2.0 / 3.0 + tol::one_sided_slack,
          fmt::format("repeated E, n=16: proxy exponent {:.3f}, certified-lower-bound exponent {:.3f} (bound {:.3f})",
                      r.fit->exponent, certified, 2.0 / 3.0 + tol::one_sided_slack)};
}

Outcome density_scaling() {
  ScalingConfig c;
  c.variant = ScalingVariant::liebsob;
  c.d = 3;
  c.n = 16;
  c.n_list = {128, 256, 512, 1024};
  c.family.components = 1;
  c.family.radius = 6.5;
  const auto m1 = scaling_study(c);
  c.family.components = 3;
  c.family.radius = 4.5;
  const auto m3 = scaling_study(c);
  if (!m1.fit || !m3.fit) return {false, "fit missing"};
  const double ratio = m3.series.back().measured / m1.series.back().measured;
  const double bound = 1.0 / 3.0 + tol::liebsob_slack;
  const double cap = std::pow(3.0, 2.0 / 3.0) * tol::liebsob_stability;
  return {m1.fit->exponent <= bound && m3.fit->exponent <= bound && ratio <= cap,
          fmt::format("N 128..1024: exponents M=1 {:.3f}, M=3 {:.3f} (bound {:.3f}); M3/M1 at N=1024 {:.3f} (cap {:.3f})",
                      m1.fit->exponent, m3.fit->exponent, bound, ratio, cap)};
}

// Breakpoint-exact integral of t -> #{lambda_n > t}^{1-1/d}: the integrand is
// piecewise constant between consecutive distinct values.
double layer_cake(const std::vector<double>& lam, int d) {
  std::vector<double> cuts(lam);
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i - 1]);
    double count = 0.0;
    for (double x : lam) count += x > mid;
    total += (cuts[i] - cuts[i - 1]) * std::pow(count, 1.0 - 1.0 / d);
  }
  return total;
}

Outcome lorentz_norm() {
  RandomStream rng(derive_seed(10, 0));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int len = 1 + static_cast<int>(rng.next_u64() % 40);
    const int d = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> lam(static_cast<std::size_t>(len));
    for (auto& x : lam) x = rng.uniform() * 10.0;
    const double exact = layer_cake(lam, d);
    worst = std::max(worst, std::abs(lorentz_q1_norm(SequenceWeights(lam), d) - exact) / exact);
  }
  const double three = lorentz_q1_norm(SequenceWeights({1, 1, 1}), 2);

  ScalingConfig c;
  c.variant = ScalingVariant::lorentz;
  c.d = 2;
  c.n = 32;
  c.family.radius = 6.0;
  c.n_list = {4, 12, 32, 60};
  c.q = 2.0;
  std::vector<double> w;
  for (int i = 0; i < 60; ++i) w.push_back(1.0 / std::sqrt(1.0 + i));
  c.weights = w;
  const auto r = scaling_study(c);
  const auto ratio = r.ratio_max();
  bool bounded = ratio && std::isfinite(*ratio);
  for (const auto& p : r.series) bounded = bounded && p.measured <= *ratio * *p.predictor * (1.0 + 1e-12);
  return {worst <= tol::lorentz_relative && three == std::sqrt(3.0) && bounded,
          fmt::format("max rel. gap to layer-cake {:.1e} over 100 sequences, (1,1,1) gives {:.17g}, weighted-sum ratio {:.4f}",
                      worst, three, ratio.value_or(NAN))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "divcurl_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::string> configs = {
      "[run]\nexperiment = \"identity_suite\"\nseed = 7\n[grid]\nd = 3\nn = 12\nband = 3.0\n[identity]\ntrials = 4\n",
      "[run]\nexperiment = \"scaling_study\"\nseed = 1\n[grid]\nd = 3\nn = 12\n[family]\nradius = 4.0\n"
      "[norm]\nvariant = \"main\"\nq = 1.5\n[series]\nN = [4, 8, 16, 32]\n[certify]\nsteps = 10\n",
      "[run]\nexperiment = \"schatten_study\"\nseed = 2\n[grid]\nd = 2\nn = 24\nband = 5.0\n[norm]\np = 2.0\n"
      "[schatten]\nwhich = \"commutator\"\nu = [\"mode:1:1,0\", \"random:2:3:9\"]\n",
      "[run]\nexperiment = \"extremizer_search\"\nseed = 3\n[grid]\nd = 2\nn = 16\n"
      "[extremizer]\npairs = 4\npool = 6\nsteps = 10\nstep_size = 0.1\n"};
  int identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto cfg = parse_config(configs[i]);
    const auto a = root / fmt::format("{}a", i), b = root / fmt::format("{}b", i);
    run(cfg, a, 1);
    run(cfg, b, 2);
    identical += slurp(a / "record.json") == slurp(b / "record.json") &&
                 slurp(a / "series.csv") == slurp(b / "series.csv") && !slurp(a / "record.json").empty();
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(configs.size()),
          fmt::format("{}/{} experiments byte-identical across reruns (jobs 1 vs 2)", identical, configs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"identity suite", identities},
      {"trace inequality", trace_inequality},
      {"Clifford algebra", clifford},
      {"commutator weak-Schatten scaling (d=2)", commutator_scaling},
      {"Cwikel weak-Schatten scaling (d=3)", cwikel_scaling},
      {"partial-sum bound", partial_sums},
      {"main div-curl scaling (d=2)", main_scaling},
      {"one-sided orthogonality (d=3)", one_sided},
      {"Lieb-Sobolev density scaling (d=3)", density_scaling},
      {"Lorentz layer-cake norm", lorentz_norm},
      {"determinism", determinism},
  };
  // Print in criterion order even though the partial-sum check runs after the
  // criteria that contribute spectra.
  const std::vector<int> number = {1, 2, 4, 5, 6, 3, 7, 8, 9, 10, 11};
  std::vector<std::string> lines(criteria.size());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    failures += !o.pass;
    lines[static_cast<std::size_t>(number[i] - 1)] = fmt::format("{} [{:>2}] {}: {} ({:.1f} s)", o.pass ? "PASS" : "FAIL",
                                                                 number[i], criteria[i].first, o.detail,
                                                                 seconds_since(t0));
    std::cerr << lines[static_cast<std::size_t>(number[i] - 1)] << '\n';
  }
  std::cout << "\n";
  for (const auto& l : lines) std::cout << l << '\n';
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
