#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scenario_util.hpp"
#include "wv/scenarios.hpp"
#include "wv/vonneumann.hpp"
#include "wv/weakvalues.hpp"

namespace wv {

using namespace detail;

ScenarioResult run_spin1_stern_gerlach(const nlohmann::json& p, std::uint64_t) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const std::vector<double> sigmas = dvec(p, "sigma");
  const int n = inum(p, "n");
  const KetVector psi1 = spin_coherent_state(1.0, 0.0, 0.0);
  const HermitianObservable a = spin_component(1.0, dnum(p, "u_angle"), 0.0);
  // ascending m_v: -1, 0, +1
  const std::vector<KetVector> post = eigenbasis(spin_component(1.0, dnum(p, "v_angle"), 0.0));

  std::vector<double> ideal;
  for (const KetVector& mu : post) ideal.push_back(std::norm(mu.inner(psi1)));
  std::vector<double> sorted = ideal;
  std::sort(sorted.begin(), sorted.end());
  const double expect[3] = {1.0 / 16, 3.0 / 8, 9.0 / 16};
  double dev = 0.0;
  for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(sorted[i] - expect[i]));
  r.check("branch-probabilities", 0.0, dev, 1e-12, "reference-value");

  double worst_sum = 0.0, worst_total = 0.0, worst_mean = 0.0, worst_var = 0.0;
  int peaks_smallest = -1;
  double bump = std::nan(""), quartile = std::nan("");
  const double smallest = *std::min_element(sigmas.begin(), sigmas.end());
  for (double s : sigmas) {
    // s is the momentum width; the grid resolves it with 40 samples per s
    const double sx = 1.0 / (2.0 * s);
    GridSpec grid = GridSpec::centered(0.0, 2.0 * std::numbers::pi / (s / 40.0), n);
    ApparatusWavefunction phi = gaussian_state(sx, 0.0, 0.0, grid);
    MeasurementSetup setup{psi1, a, post, phi};
    SumRuleReport rep = sum_rule_report(setup);
    worst_sum = std::max(worst_sum, rep.max_deviation);
    worst_total = std::max(worst_total, std::abs(rep.total_probability - 1.0));

    std::vector<double> ps = grid.ps();
    std::vector<double> unc = unconditional_distribution(setup);
    Moments m = moments(ps, unc, grid.dp());
    worst_mean = std::max(worst_mean, std::abs(m.mean - 0.5));
    worst_var = std::max(worst_var, std::abs(m.variance - s * s - 0.375));
    if (s == smallest) peaks_smallest = static_cast<int>(local_maxima(unc).size());

    std::vector<std::vector<double>> cols{ps, unc};
    std::vector<std::string> head{"p", "unconditional"};
    for (int mu = 0; mu < 3; ++mu) {
      std::vector<double> c = conditional_distribution(setup, mu);
      cols.push_back(c);
      head.push_back("m_v=" + std::to_string(mu - 1));
      if (mu == 1 && std::abs(s - 0.35) < 1e-12) {
        // strongest maximum on the negative side
        double best = 0.0;
        for (int j : local_maxima(c, 1e-4))
          if (ps[j] < -0.5 && c[j] > best) {
            best = c[j];
            bump = ps[j];
          }
      }
      if (mu == 2 && std::abs(s - 0.75) < 1e-12) quartile = quantile(ps, c, 0.25);
    }
    std::ostringstream nm;
    nm << "sigma_" << s;
    r.add_dataset(nm.str(), csv_columns(head, cols));
  }
  r.at_most("sum-rule", 1e-9, worst_sum, "identity");
  r.check("branch-total", 0.0, worst_total, 1e-12, "identity");
  r.check("mean-shift", 0.0, worst_mean, 1e-6, "reference-value");
  r.check("added-variance", 0.0, worst_var, 1e-6, "reference-value");
  r.check("resolved-peaks", 3.0, peaks_smallest, 0.0, "reference-value");
  r.check("bump-m0", -1.3, bump, 0.2, "reference-value");
  r.check("quartile-m1", 1.0, quartile, 0.1, "reference-value");

  PooledReport pr = pooled_identities(psi1, a, post);
  r.check("varreim", 0.0, pr.varreim_deviation, 1e-10, "independent-oracle");
  return r;
}

}  // namespace wv
