#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "divcurl/config.hpp"
#include "divcurl/runner.hpp"

using namespace divcurl;

namespace {

const char* kMinimal = R"(
[run]
experiment = "identity_suite"
[grid]
d = 2
n = 16
band = 4.0
)";

bool mentions(const ConfigError& err, const std::string& text) {
  for (const auto& v : err.violations())
    if (v.find(text) != std::string::npos) return true;
  return false;
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& err) {
    return err.violations();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.experiment == "identity_suite");
  CHECK(c.trials == 20);
  CHECK(c.seed == 0);
  CHECK(c.jobs == 1);
  CHECK(*c.band == 4.0);
}

TEST_CASE("constraint violations name their key and constraint") {
  try {
    parse_config("[run]\nexperiment = \"identity_suite\"\n[grid]\nd = 1\nn = 16\nband = 4.0\n");
    FAIL("expected error");
  } catch (const ConfigError& err) {
    CHECK(mentions(err, "grid.d"));
    CHECK(mentions(err, "d >= 2"));
  }
  const auto v = violations_of(R"(
[run]
experiment = "schatten_study"
[grid]
d = 2
n = 16
band = 4.0
[norm]
p = 2.0
[schatten]
which = "cwikel"
u = ["const:1"]
)");
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("d >= 3") != std::string::npos);
}

TEST_CASE("strict schema: unknown keys, sections, and type mismatches are all reported") {
  const auto v = violations_of(R"(
[run]
experiment = "identity_suite"
colour = "blue"
[grid]
d = "two"
n = 16
band = 4.0
[extra]
x = 1
)");
  CHECK(v.size() == 3);
  const auto w = violations_of(std::string(kMinimal) + "[series]\nN = [1, 2, 3]\n");
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("does not apply") != std::string::npos);
  CHECK(!violations_of("[run]\nexperiment = \"nope\"\n[grid]\nd = 2\nn = 8\n").empty());
  CHECK(!violations_of("not toml at all [").empty());
}

TEST_CASE("physics keys have no silent defaults") {
  const auto v = violations_of(R"(
[run]
experiment = "scaling_study"
[grid]
d = 2
n = 16
[family]
radius = 3.0
[norm]
variant = "main"
)");
  CHECK(v.size() == 2);  // norm.q and series.N
}

TEST_CASE("configs round-trip through TOML and the JSON echo") {
  const auto c = parse_config(R"(
[run]
experiment = "scaling_study"
seed = 12
[grid]
d = 3
n = 16
[family]
radius = 4.5
e_mode = "repeated"
[norm]
variant = "lorentz"
q = 1.5
[series]
N = [2, 4, 8]
weights = [1.0, 0.5, 0.25, 0.125, 1e-3, 3, 2, 1]
[gates]
exponent_max = 0.7666666666666667
)");
  CHECK(parse_config(to_toml(c)) == c);
  CHECK(config_from_json(nlohmann::json::parse(to_json(c).dump())) == c);
}

TEST_CASE("runner writes three files and report aggregates deterministically") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "divcurl_runner_test";
  fs::remove_all(root);
  auto c = parse_config(std::string(kMinimal) + "[identity]\ntrials = 2\n[gates]\nmax_deviation = 1e-9\n");
  const auto out = run(c, root / "a", 1);
  CHECK(out.exit_code == 0);
  for (const char* f : {"record.json", "series.csv", "summary.txt"}) CHECK(fs::exists(root / "a" / f));

  c.experiment = "bogus";
  CHECK_THROWS(run(c, root / "b", 1));
  CHECK_FALSE(fs::exists(root / "b"));

  fs::create_directories(root / "bad");
  std::ofstream(root / "bad" / "broken.json") << "{ not json";
  const auto table = report(root);
  CHECK(table.find("identity_suite,2,16,,,,") != std::string::npos);
  CHECK(table.find("malformed") != std::string::npos);
  fs::create_directories(root / "empty");
  CHECK(report(root / "empty") ==
        "experiment,d,n,exponent,predictor_exponent,ratio_spread,max_identity_deviation,flag,source\n");
  fs::remove_all(root);
}

TEST_CASE("structural and semantic violations are reported together") {
  try {
    parse_config("[run]\nexperiment = \"identity_suite\"\n[grid]\nd = 1\nn = \"eight\"\nbogus = 1\n[gates]\nmax_deviation = \"x\"\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    const auto& v = err.violations();
    auto has = [&](const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); };
    CHECK(has("grid.d: must satisfy d >= 2"));
    CHECK(has("grid.bogus: unknown key"));
    CHECK(has("gates.max_deviation: must be a number"));
    CHECK(std::none_of(v.begin(), v.end(), [](const std::string& s) { return s == "grid.n: required"; }));
    CHECK(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.rfind("grid.n:", 0) == 0; }));
  }
}
