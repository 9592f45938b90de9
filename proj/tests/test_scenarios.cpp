#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "wv/errors.hpp"
#include "wv/scenarios.hpp"

using namespace wv;

TEST_CASE("registry") {
  const std::vector<ScenarioInfo>& reg = scenario_registry();
  CHECK(reg.size() == 7);
  std::set<std::string> names;
  for (const ScenarioInfo& s : reg) {
    names.insert(s.name);
    CHECK(find_scenario(s.name) == &s);
    CHECK(s.defaults.contains("tol_scale"));
    CHECK_FALSE(s.checks.empty());
    CHECK_FALSE(s.description.empty());
  }
  CHECK(names.size() == reg.size());
  CHECK(find_scenario("no-such") == nullptr);
  CHECK_THROWS_AS(run_scenario("no-such"), ConfigError);
}

TEST_CASE("every scenario runs and reports the registered checks") {
  for (const ScenarioInfo& s : scenario_registry()) {
    CAPTURE(s.name);
    auto t0 = std::chrono::steady_clock::now();
    ScenarioResult r = run_scenario(s.name);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 30.0);
    CHECK(r.name == s.name);
    std::vector<std::string> got;
    for (const Check& c : r.checks) got.push_back(c.name);
    std::vector<std::string> want = s.checks;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
    for (const Check& c : r.checks) {
      CHECK(std::isfinite(c.got));
      CHECK((c.source == "reference-value" || c.source == "independent-oracle" || c.source == "identity"));
    }
    CHECK(r.parameters == merge_params(s, {}));
    CHECK_THROWS(r.find("no-such-check"));
  }
}

TEST_CASE("check kinds and tol_scale") {
  ScenarioResult r;
  r.tol_scale = 2.0;
  r.check("a", 1.0, 1.15, 0.1, "identity");
  r.check("b", 1.0, 1.25, 0.1, "identity");
  r.at_least("c", 0.5, 0.5, "identity");
  r.at_most("d", 0.5, 0.6, "identity");
  r.flag("e", true, "identity");
  r.flag("f", false, "identity");
  CHECK(r.find("a").pass);
  CHECK_FALSE(r.find("b").pass);
  CHECK(r.find("c").pass);
  CHECK_FALSE(r.find("d").pass);
  CHECK(r.find("e").pass);
  CHECK_FALSE(r.find("f").pass);
  CHECK_FALSE(r.all_pass());
  nlohmann::json j = r.checks_json();
  REQUIRE(j.is_array());
  CHECK(j.size() == 6);
  for (const auto& c : j)
    for (const char* k : {"name", "kind", "expected", "got", "tolerance", "pass", "source"}) CHECK(c.contains(k));
}

TEST_CASE("a vanishing tolerance scale fails the abs checks") {
  ScenarioResult r = run_scenario("spin1-sg", {{"tol_scale", 1e-30}});
  CHECK_FALSE(r.all_pass());
  CHECK_FALSE(r.find("mean-shift").pass);
}

TEST_CASE("determinism and seeds") {
  const nlohmann::json small = {{"n_samples", 20000}};
  ScenarioResult a = run_scenario("overall-distribution", small, 11);
  ScenarioResult b = run_scenario("overall-distribution", small, 11);
  ScenarioResult c = run_scenario("overall-distribution", small, 12);
  CHECK(a.checks_json().dump() == b.checks_json().dump());
  CHECK(a.find("mean").got != c.find("mean").got);
  CHECK(run_scenario("spin1-sg", {}, 5).checks_json().dump() == run_scenario("spin1-sg", {}, 5).checks_json().dump());

  CHECK(derive_seed("a", 0) != derive_seed("b", 0));
  CHECK(derive_seed("a", 0) != derive_seed("a", 1));
  CHECK(derive_seed("spin1-sg", 42) == derive_seed("spin1-sg", 42));
}

TEST_CASE("parameter merging") {
  const ScenarioInfo& s = *find_scenario("coherent-transition");
  nlohmann::json m = merge_params(s, {{"lambda_sq", 16.0}});
  CHECK(m["lambda_sq"] == 16.0);
  CHECK(m["n"] == s.defaults["n"]);
  CHECK_THROWS_AS(merge_params(s, {{"lambda_squared", 16.0}}), ConfigError);
  CHECK_THROWS_AS(merge_params(s, {{"lambda_sq", "big"}}), ConfigError);
  CHECK_THROWS_AS(merge_params(s, {{"epsilon", 0.5}}), ConfigError);
  CHECK_NOTHROW(merge_params(s, {{"epsilon", {0.5, 2.0}}}));
  try {
    merge_params(s, {{"bogus_key", 1}});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("overrides reach the computation") {
  ScenarioResult r = run_scenario("coherent-transition", {{"lambda_sq", 16.0}, {"epsilon", {0.5, 4.0}}});
  CHECK(r.parameters["lambda_sq"] == 16.0);
  CHECK(r.find("subcritical-mean").expected == -16.0);
  CHECK(r.find("subcritical-mean").pass);
  // a sweep without the strong regime still probes it
  CHECK(run_scenario("coherent-transition", {{"epsilon", {0.5, 1.0, 1.1, 4.0}}}).all_pass());
}

TEST_CASE("basis completion") {
  KetVector v = haar_random_state(5, 3);
  std::vector<KetVector> b = complete_basis(v);
  REQUIRE(b.size() == 5);
  CHECK(std::abs(b[0].inner(v) - 1.0) < 1e-12);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(b[i].inner(b[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("coherent root") {
  CHECK(coherent_root(0.5) == 0.0);
  CHECK(coherent_root(1.0) == 0.0);
  for (double e : {1.1, 2.0, 10.0}) {
    double x = coherent_root(e);
    CHECK(x > 0.0);
    CHECK(std::abs(x - e * std::sin(x)) < 1e-12);
  }
}
