#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scenario_util.hpp"
#include "wv/scenarios.hpp"

namespace wv {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ScenarioResult::check(const std::string& n, double expected, double got, double tol, const std::string& source) {
  Check c{n, "abs", expected, got, tol, false, source};
  c.pass = std::isfinite(got) && std::abs(got - expected) <= tol * tol_scale;
  checks.push_back(c);
}

void ScenarioResult::at_least(const std::string& n, double bound, double got, const std::string& source) {
  checks.push_back({n, "at_least", bound, got, 0.0, std::isfinite(got) && got >= bound, source});
}

void ScenarioResult::at_most(const std::string& n, double bound, double got, const std::string& source) {
  checks.push_back({n, "at_most", bound, got, 0.0, std::isfinite(got) && got <= bound, source});
}

void ScenarioResult::flag(const std::string& n, bool ok, const std::string& source) {
  checks.push_back({n, "flag", 1.0, ok ? 1.0 : 0.0, 0.0, ok, source});
}

const Check& ScenarioResult::find(const std::string& n) const {
  for (const Check& c : checks)
    if (c.name == n) return c;
  throw ConfigError("no check named " + n + " in " + name);
}

bool ScenarioResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json ScenarioResult::checks_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (const Check& c : checks)
    a.push_back({{"name", c.name},
                 {"kind", c.kind},
                 {"expected", c.expected},
                 {"got", std::isfinite(c.got) ? nlohmann::json(c.got) : nlohmann::json(nullptr)},
                 {"tolerance", c.tolerance * (c.kind == "abs" ? tol_scale : 1.0)},
                 {"pass", c.pass},
                 {"source", c.source}});
  return a;
}

std::uint64_t derive_seed(const std::string& name, std::uint64_t master) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = h ^ master;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

const std::vector<ScenarioInfo>& scenario_registry() {
  using nlohmann::json;
  static const std::vector<ScenarioInfo> reg = [] {
    std::vector<ScenarioInfo> r;
    r.push_back({"spin1-sg",
                 "spin-1 Stern-Gerlach: branch probabilities, sum rule, posterior breakup",
                 {{"sigma", {0.1, 0.35, 0.75}}, {"u_angle", kPi / 3}, {"v_angle", 2 * kPi / 3}, {"n", 8192}},
                 {"branch-probabilities", "sum-rule", "branch-total", "mean-shift", "added-variance",
                  "resolved-peaks", "bump-m0", "quartile-m1", "varreim"},
                 run_spin1_stern_gerlach});
    r.push_back({"angular-momentum",
                 "orbital angular momentum with classical phase S(x) = qk cos(x + theta0)",
                 {{"qk", 25.0},
                  {"theta0", kPi / 2},
                  {"sigma_x", kPi},
                  {"window_center", kPi / 8},
                  {"window_eps", kPi / 32},
                  {"quant_sigma_x", 3 * kPi},
                  {"mmax", 60},
                  {"n", 4096}},
                 {"sum-rule", "lambda-profile", "mean-lambda", "var-lambda", "bessel-sum", "bessel-m2-sum",
                  "bessel-envelope", "bloch-integer", "bloch-half-integer", "window-sampled", "window-sinc",
                  "window-narrow", "quantization", "refinement", "pooled-norm"},
                 run_orbital_angular_momentum});
    r.push_back({"nspin",
                 "N spins measured through the mean observable: superoscillating amplitude",
                 {{"alpha0", 5.0}, {"N", 50}, {"sigma", kPi / 4}, {"x0", 2 * kPi}, {"alpha_large", 100.0},
                  {"n", 8192}},
                 {"alpha0", "gamma-large", "stretch-alpha", "stretch-L", "curvature", "width-ratio",
                  "sampling-point", "kick-reduction", "superoscillation-width"},
                 run_nspin_superoscillation});
    r.push_back({"coherent-transition",
                 "coherent-state pre/post-selection: criticality in eps = 2 sigma^2 |lambda|^2",
                 {{"lambda_sq", 25.0},
                  {"epsilon", {0.1, 0.5, 1.0, 1.1, 4.0, 200.0}},
                  {"onset_lo", 0.9},
                  {"onset_hi", 1.1},
                  {"onset_step", 0.01},
                  {"scaling_lambda_sq", {16.0, 25.0, 36.0, 49.0}},
                  {"n", 4096}},
                 {"closed-form-extended", "subcritical-mean", "onset", "peak-root", "peak-small-angle",
                  "fringe-law", "root-monotone", "root-pi", "critical-scaling", "fringe-integer",
                  "fringe-variance"},
                 run_coherent_phase_transition});
    r.push_back({"negative-ke",
                 "kinetic energy of an oscillator ground state post-selected at position q",
                 {{"m", 1.0}, {"omega", 1.0}, {"q", 3.0}, {"n", 4096}, {"dq", 0.05},
                  {"omega_sweep", {1.0, 4.0, 16.0, 64.0}}, {"x_lo", 1.0}, {"x_hi", 5.0}},
                 {"tau-origin", "dft-amplitude", "dft-tau", "dft-action", "tau-zero", "likelihood-peak",
                  "likelihood-scale", "free-limit", "semiclassical-monotone"},
                 run_negative_kinetic_energy});
    r.push_back({"overall-distribution",
                 "weak values over Haar-random post-selections vs the closed-form density",
                 {{"dim", 8}, {"n_samples", 100000}},
                 {"mean", "std-ratio", "eccentric", "ks", "ks-2d-radial", "beta-symmetry", "normalization-dim2"},
                 run_overall_distribution});
    r.push_back({"classical-bayes",
                 "classical Bayesian impulsive measurement: Van Vleck likelihood vs Monte Carlo",
                 {{"n_samples", 1000000},
                  {"k_max", 4.0},
                  {"k_max_irrev", 1.25},
                  {"c", 0.5},
                  {"w1", 0.05},
                  {"w2", 0.05},
                  {"prior_sigma", 0.5},
                  {"x_bound", 1.5},
                  {"bins", 20},
                  {"omega_sweep", {1.0, 4.0, 16.0, 64.0}}},
                 {"bayes-normalization", "mc-bins", "mc-pointer-mean", "kmax-doubling", "irreversibility",
                  "reversibility", "alpha-derivative", "semiclassical-monotone"},
                 run_classical_bayes});
    for (ScenarioInfo& s : r) s.defaults["tol_scale"] = 1.0;
    return r;
  }();
  return reg;
}

const ScenarioInfo* find_scenario(const std::string& name) {
  for (const ScenarioInfo& s : scenario_registry())
    if (s.name == name) return &s;
  return nullptr;
}

nlohmann::json merge_params(const ScenarioInfo& info, const nlohmann::json& overrides) {
  nlohmann::json out = info.defaults;
  if (overrides.is_null()) return out;
  if (!overrides.is_object()) throw ConfigError("parameter overrides must be an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    const std::string& k = it.key();
    if (!info.defaults.contains(k)) throw ConfigError("unknown parameter '" + k + "' for " + info.name);
    const nlohmann::json& d = info.defaults[k];
    const nlohmann::json& v = it.value();
    if (d.is_number_integer()) {
      if (!v.is_number() || std::floor(v.get<double>()) != v.get<double>())
        throw ConfigError("parameter '" + k + "' expects an integer");
      out[k] = static_cast<long long>(v.get<double>());
    } else if (d.is_number()) {
      if (!v.is_number()) throw ConfigError("parameter '" + k + "' expects a number");
      out[k] = v.get<double>();
    } else if (d.is_array()) {
      if (!v.is_array() || v.empty()) throw ConfigError("parameter '" + k + "' expects a list of numbers");
      for (const auto& e : v)
        if (!e.is_number()) throw ConfigError("parameter '" + k + "' expects a list of numbers");
      out[k] = v;
    } else if (d.is_string()) {
      if (!v.is_string()) throw ConfigError("parameter '" + k + "' expects a string");
      out[k] = v;
    }
  }
  return out;
}

ScenarioResult run_scenario(const std::string& name, const nlohmann::json& overrides, std::uint64_t master_seed) {
  const ScenarioInfo* info = find_scenario(name);
  if (!info) throw ConfigError("unknown scenario '" + name + "'");
  nlohmann::json p = merge_params(*info, overrides);
  ScenarioResult r = info->run(p, derive_seed(name, master_seed));
  r.name = name;
  r.parameters = p;
  return r;
}

std::vector<KetVector> complete_basis(const KetVector& first) {
  const int d = first.dim();
  std::vector<CVec> vs{first.amplitudes()};
  for (int e = 0; e < d && static_cast<int>(vs.size()) < d; ++e) {
    CVec v = CVec::Zero(d);
    v(e) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& u : vs) v -= u * u.dot(v);
    if (v.norm() > 1e-6) vs.push_back(v / v.norm());
  }
  std::vector<KetVector> out;
  for (const CVec& v : vs) out.emplace_back(v);
  return out;
}

double coherent_root(double eps) {
  if (eps <= 1.0) return 0.0;
  // f(x) = eps sin x - x is positive just above 0 and negative at pi
  double a = 1e-12, b = kPi;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    if (eps * std::sin(m) - m > 0) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

namespace detail {

std::string csv_columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const size_t rows = cols.empty() ? 0 : cols[0].size();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c][r];
    os << '\n';
  }
  return os.str();
}

std::vector<int> local_maxima(const std::vector<double>& d, double rel) {
  double mx = *std::max_element(d.begin(), d.end());
  std::vector<int> out;
  for (size_t j = 1; j + 1 < d.size(); ++j)
    if (d[j] > d[j - 1] && d[j] >= d[j + 1] && d[j] > rel * mx) out.push_back(static_cast<int>(j));
  return out;
}

double quantile(const std::vector<double>& coord, const std::vector<double>& density, double p) {
  double total = 0.0;
  for (double v : density) total += v;
  double acc = 0.0;
  for (size_t j = 0; j < density.size(); ++j) {
    double next = acc + density[j];
    if (next >= p * total) {
      // the sample owns [c - h/2, c + h/2]; interpolate inside it
      double h = j + 1 < coord.size() ? coord[j + 1] - coord[j] : coord[j] - coord[j - 1];
      double f = density[j] > 0 ? (p * total - acc) / density[j] : 0.5;
      return coord[j] - 0.5 * h + f * h;
    }
    acc = next;
  }
  return coord.back();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

}  // namespace wv
