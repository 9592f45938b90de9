#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "scenario_util.hpp"
#include "wv/extended.hpp"
#include "wv/scenarios.hpp"
#include "wv/vonneumann.hpp"

namespace wv {

using namespace detail;

namespace {
constexpr double kPi = std::numbers::pi;
// probe points for the regime checks
constexpr double kSubcritical = 0.1, kNearCritical = 1.1;
constexpr double kStrong = 50.0, kStrongDefault = 200.0;

Transition coherent_transition(double lsq) { return coherent_pair_transition(lsq); }

// vertex of the parabola through three samples of y
double parabolic(const std::vector<double>& c, const std::vector<double>& y, int j) {
  double a = y[j - 1], b = y[j], d = y[j + 1];
  double den = a - 2 * b + d;
  double off = den != 0 ? 0.5 * (a - d) / den : 0.0;
  return c[j] + off * (c[j + 1] - c[j]);
}

std::vector<double> log_of(const std::vector<double>& d) {
  std::vector<double> l(d.size());
  for (size_t i = 0; i < d.size(); ++i) l[i] = std::log(std::max(d[i], 1e-300));
  return l;
}

struct EpsRun {
  GridSpec grid;
  std::vector<double> post_x, dens_p;
  std::vector<double> modes;  // refined posterior maxima
  Moments pm;
  double dpi2 = 0.0;
};

EpsRun run_eps(double lsq, double eps, int n) {
  const double sigma = std::sqrt(eps / (2 * lsq));
  const double span = 128 * sigma;
  int nn = n;
  while (span / nn > 0.01) nn *= 2;
  EpsRun r;
  r.grid = GridSpec::centered(0.0, span, nn);
  ApparatusWavefunction phi = gaussian_state(sigma, 0.0, 0.0, r.grid);
  ConditionalEnsemble e = condition(coherent_transition(lsq), phi);
  r.post_x = e.phi_i_rel.density();
  r.dens_p = momentum_density(e.phi_f_rel);
  r.pm = moments(r.grid.ps(), r.dens_p, r.grid.dp());
  r.dpi2 = 1.0 / (4 * sigma * sigma);
  std::vector<double> xs = r.grid.xs(), lg = log_of(r.post_x);
  for (int j : local_maxima(r.post_x, 1e-4)) r.modes.push_back(parabolic(xs, lg, j));
  return r;
}

// maxima of the momentum density above 10% of the largest
std::vector<double> fringes(const EpsRun& r) {
  std::vector<double> ps = r.grid.ps(), out;
  for (int j : local_maxima(r.dens_p, 0.1)) out.push_back(parabolic(ps, r.dens_p, j));
  return out;
}
}  // namespace

ScenarioResult run_coherent_phase_transition(const nlohmann::json& p, std::uint64_t) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const double lsq = dnum(p, "lambda_sq");
  const int n = inum(p, "n");
  std::vector<double> eps = dvec(p, "epsilon");
  std::sort(eps.begin(), eps.end());

  // closed form against the Fock-space sum carried in 113-bit arithmetic
  {
    const double lam = std::sqrt(lsq);
    // well past the usual truncation: the Poisson tail must sit below |g| ~ e^{-2|l|^2}
    const int nmax = 3 * coherent_truncation(lam);
    ext::Ket plus = ext::coherent_state(lam, nmax), minus = ext::coherent_state(-lam, nmax);
    std::vector<double> diag(nmax + 1);
    for (int k = 0; k <= nmax; ++k) diag[k] = k;
    double worst = 0.0;
    for (int k = -8; k <= 8; ++k) {
      double x = k * kPi / 8;
      AmplitudeTriple c = coherent_pair_amplitude(lsq, x);
      cplx v[3] = {c.g, c.ag, c.a2g};
      for (int m = 0; m < 3; ++m) {
        cplx ref = ext::diagonal_moment(plus, diag, minus, x, m);
        worst = std::max(worst, std::abs(v[m] - ref) / std::abs(ref));
      }
    }
    r.check("closed-form-extended", 0.0, worst, 1e-10, "independent-oracle");
  }

  std::ostringstream modes_csv;
  modes_csv.precision(17);
  modes_csv << "epsilon,mode_count,mode_x,root\n";
  double worst_root = 0.0;
  std::map<double, EpsRun> runs;
  for (double e : eps) {
    const EpsRun& er = runs.emplace(e, run_eps(lsq, e, n)).first->second;
    std::ostringstream nm;
    nm << "eps_" << e;
    r.add_dataset(nm.str() + "_x", csv_columns({"x", "posterior"}, {er.grid.xs(), er.post_x}));
    r.add_dataset(nm.str() + "_p", csv_columns({"p", "density"}, {er.grid.ps(), er.dens_p}));
    const double root = coherent_root(e);
    for (double m : er.modes) {
      modes_csv << e << ',' << er.modes.size() << ',' << m << ',' << root << '\n';
      // only the modes of the two central wells
      if (e > 1 && std::abs(std::abs(m) - root) < 0.5) worst_root = std::max(worst_root, std::abs(std::abs(m) - root));
    }
  }
  // regime checks run at fixed probe points; the sweep supplies them when it covers the regime
  auto probe = [&](double e) -> const EpsRun& {
    auto it = runs.find(e);
    if (it == runs.end()) it = runs.emplace(e, run_eps(lsq, e, n)).first;
    return it->second;
  };
  {
    const double e = eps.front() < 1.0 ? eps.front() : kSubcritical;
    r.check("subcritical-mean", -lsq, probe(e).pm.mean, 0.5, "reference-value");
  }
  {
    const double e = kNearCritical;
    const EpsRun& er = probe(e);
    const double root = coherent_root(e);
    r.check("peak-small-angle", std::sqrt(6 * (e - 1) / e), root, 0.05 * std::sqrt(6 * (e - 1) / e),
            "reference-value");
    // cos^2[(p + |l|^2/eps) x~]: maxima where (p + |l|^2/eps) x~ / pi is an integer.
    // Leading order in the chirp alpha', so only the dominant fringe is held to it
    std::vector<double> ps = er.grid.ps();
    const int top = static_cast<int>(std::max_element(er.dens_p.begin(), er.dens_p.end()) - er.dens_p.begin());
    const double k = (parabolic(ps, er.dens_p, top) + lsq / e) * root / kPi;
    r.check("fringe-law", 0.0, std::abs(k - std::round(k)), 0.1, "reference-value");
  }
  {
    const double e = eps.back() >= kStrong ? eps.back() : kStrongDefault;
    const EpsRun& er = probe(e);
    double worst = 0.0;
    for (double f : fringes(er)) worst = std::max(worst, std::abs(f - std::round(f)));
    r.at_most("fringe-integer", 0.05, worst, "reference-value");
    const double want = er.dpi2 + lsq / 2;
    r.check("fringe-variance", want, er.pm.variance, 0.02 * want, "reference-value");
    r.check("root-pi", kPi, coherent_root(e), 2 * kPi / e, "reference-value");
  }
  r.check("peak-root", 0.0, worst_root, 1e-3, "independent-oracle");
  r.add_dataset("modes", modes_csv.str());

  // modality change
  {
    double onset = std::nan("");
    std::vector<double> es, cnt;
    const double lo = dnum(p, "onset_lo"), hi = dnum(p, "onset_hi"), st = dnum(p, "onset_step");
    for (int k = 0; lo + k * st <= hi + 1e-12; ++k) {
      double e = lo + k * st;
      EpsRun er = run_eps(lsq, e, n);
      es.push_back(e);
      cnt.push_back(static_cast<double>(er.modes.size()));
      if (std::isnan(onset) && er.modes.size() >= 2) onset = e;
    }
    r.check("onset", 1.0, onset, 0.05, "reference-value");
    r.add_dataset("onset", csv_columns({"epsilon", "modes"}, {es, cnt}));
  }

  {
    std::vector<double> es, roots;
    bool mono = true;
    double prev = 0.0;
    for (int k = 0; k <= 400; ++k) {
      double e = 1.001 * std::pow(200.0 / 1.001, k / 400.0);
      double x = coherent_root(e);
      if (k > 0 && !(x > prev)) mono = false;
      prev = x;
      es.push_back(e);
      roots.push_back(x);
    }
    r.flag("root-monotone", mono, "independent-oracle");
    r.add_dataset("roots", csv_columns({"epsilon", "root"}, {es, roots}));
  }

  // posterior width at eps = 1 against |l|
  {
    std::vector<double> lam, dx;
    for (double l2 : dvec(p, "scaling_lambda_sq")) {
      EpsRun er = run_eps(l2, 1.0, n);
      lam.push_back(std::sqrt(l2));
      dx.push_back(std::sqrt(moments(er.grid.xs(), er.post_x, er.grid.dx).variance));
    }
    r.check("critical-scaling", -0.5, loglog_slope(lam, dx), 0.1, "reference-value");
    r.add_dataset("critical_scaling", csv_columns({"lambda", "delta_x"}, {lam, dx}));
  }
  return r;
}

}  // namespace wv
