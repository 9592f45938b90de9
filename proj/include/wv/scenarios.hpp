#pragma once
// Canned reproductions: parameters in, datasets and pass/fail checks out.
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wv/hilbert.hpp"

namespace wv {

struct Check {
  std::string name;
  // abs: |got - expected| <= tolerance * tol_scale
  // at_least / at_most: one-sided bound on got; flag: got must be 1
  std::string kind = "abs";
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  // reference-value, independent-oracle or identity
  std::string source;
};

struct Dataset {
  std::string name;  // file stem
  std::string csv;
};

struct ScenarioResult {
  std::string name;
  nlohmann::json parameters;
  std::vector<Dataset> datasets;
  std::vector<Check> checks;
  double tol_scale = 1.0;

  void check(const std::string& name, double expected, double got, double tol, const std::string& source);
  void at_least(const std::string& name, double bound, double got, const std::string& source);
  void at_most(const std::string& name, double bound, double got, const std::string& source);
  void flag(const std::string& name, bool ok, const std::string& source);
  void add_dataset(const std::string& name, std::string csv) { datasets.push_back({name, std::move(csv)}); }
  const Check& find(const std::string& name) const;
  bool all_pass() const;
  nlohmann::json checks_json() const;
};

using ScenarioFn = std::function<ScenarioResult(const nlohmann::json& params, std::uint64_t seed)>;

struct ScenarioInfo {
  std::string name;
  std::string description;
  nlohmann::json defaults;  // every accepted key with its default value
  std::vector<std::string> checks;
  ScenarioFn run;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo* find_scenario(const std::string& name);

// splitmix64(fnv1a(name) ^ master)
std::uint64_t derive_seed(const std::string& name, std::uint64_t master);

// merged defaults + overrides; throws ConfigError on unknown keys or type mismatch
nlohmann::json merge_params(const ScenarioInfo& info, const nlohmann::json& overrides);

ScenarioResult run_scenario(const std::string& name, const nlohmann::json& overrides = {},
                            std::uint64_t master_seed = 0);

// Gram-Schmidt completion of an orthonormal basis starting from `first`
std::vector<KetVector> complete_basis(const KetVector& first);

ScenarioResult run_spin1_stern_gerlach(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_orbital_angular_momentum(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_nspin_superoscillation(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_coherent_phase_transition(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_negative_kinetic_energy(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_overall_distribution(const nlohmann::json& p, std::uint64_t seed);
ScenarioResult run_classical_bayes(const nlohmann::json& p, std::uint64_t seed);

double coherent_root(double epsilon);  // positive root of x = eps sin x, 0 if eps <= 1

}  // namespace wv
