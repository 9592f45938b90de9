#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "scenario_util.hpp"
#include "wv/classical.hpp"
#include "wv/scenarios.hpp"

namespace wv {

using namespace detail;

namespace {
constexpr double kPointerSigma = 0.1;

struct McStats {
  double mean_x = 0.0, se_x = 0.0, mean_p = 0.0, se_p = 0.0;
};

McStats stats(const McResult& mc) {
  const double n = static_cast<double>(mc.accepted.size());
  McStats s;
  double vx = 0.0, vp = 0.0;
  for (const McSample& a : mc.accepted) {
    s.mean_x += a.x;
    s.mean_p += a.p_final;
  }
  s.mean_x /= n;
  s.mean_p /= n;
  for (const McSample& a : mc.accepted) {
    vx += (a.x - s.mean_x) * (a.x - s.mean_x);
    vp += (a.p_final - s.mean_p) * (a.p_final - s.mean_p);
  }
  s.se_x = std::sqrt(vx / (n - 1) / n);
  s.se_p = std::sqrt(vp / (n - 1) / n);
  return s;
}
}  // namespace

ScenarioResult run_classical_bayes(const nlohmann::json& p, std::uint64_t seed) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const double c = dnum(p, "c"), ps = dnum(p, "prior_sigma"), xb = dnum(p, "x_bound");
  const double kmax = dnum(p, "k_max"), kirr = dnum(p, "k_max_irrev");
  const Lagrangian1D lag{1.0, Potential::free, 0.0, Coupling::quadratic, c};
  McConfig cfg;
  cfg.w1 = dnum(p, "w1");
  cfg.w2 = dnum(p, "w2");
  cfg.k_max = kmax;
  cfg.n_samples = inum(p, "n_samples");
  cfg.seed = seed;

  const int nx = 3001;
  std::vector<double> xs(nx), prior(nx);
  for (int i = 0; i < nx; ++i) {
    xs[i] = -xb + 2 * xb * i / (nx - 1);
    prior[i] = std::exp(-xs[i] * xs[i] / (2 * ps * ps));
  }
  auto pointer_prior = [](double v) {
    return std::exp(-v * v / (2 * kPointerSigma * kPointerSigma)) / (std::sqrt(2 * std::numbers::pi) * kPointerSigma);
  };
  std::vector<double> pg;
  for (int k = 0; k <= 400; ++k) pg.push_back(-0.5 + 1.5 * k / 400);
  ClassicalPosterior post =
      classical_posterior(lag, xs, prior, pointer_prior, pg, cfg.q1, cfg.q2, cfg.t1, cfg.ti, cfg.t2, kmax);
  const double dx = xs[1] - xs[0];

  {
    double z = 0.0;
    for (int i = 0; i < nx; ++i) z += post.prior_x[i] * post.likelihood[i] * dx;
    r.check("bayes-normalization", 1.0, z, 1e-10, "identity");
  }

  auto sample_x = [ps, xb](std::mt19937_64& g) {
    std::normal_distribution<double> nd(0.0, ps);
    for (;;) {
      double v = nd(g);
      if (std::abs(v) <= xb) return v;
    }
  };
  auto sample_p = [](std::mt19937_64& g) { return std::normal_distribution<double>(0.0, kPointerSigma)(g); };

  McResult mc = monte_carlo_oracle(lag, sample_x, sample_p, cfg);
  std::vector<double> ax;
  for (const McSample& a : mc.accepted) ax.push_back(a.x);
  Histogram h = histogram(ax, -xb, xb, inum(p, "bins"));
  std::vector<double> z = bin_z_scores(h, xs, post.posterior_x);
  double zmax = 0.0;
  for (double v : z) zmax = std::max(zmax, std::abs(v));
  // bins expecting fewer than 25 counts are skipped; most bins must remain
  r.at_most("mc-bins", 3.0, 2 * z.size() >= h.counts.size() ? zmax : std::nan(""), "independent-oracle");

  const McStats st = stats(mc);
  double pmean = 0.0;
  for (int i = 0; i < nx; ++i) pmean += post.posterior_x[i] * post.alpha12[i] * dx;
  r.check("mc-pointer-mean", 0.0, (st.mean_p - pmean) / st.se_p, 3.0, "independent-oracle");

  // flat k prior: doubling the bound must not move the posterior
  {
    McConfig c2 = cfg;
    c2.k_max = 2 * kmax;
    c2.seed = seed + 1;
    McStats s2 = stats(monte_carlo_oracle(lag, sample_x, sample_p, c2));
    r.check("kmax-doubling", 0.0, (s2.mean_x - st.mean_x) / std::hypot(s2.se_x, st.se_x), 3.0,
            "independent-oracle");
  }

  // two priors that differ only where L = 0
  ClassicalPosterior pa, pb;
  {
    std::vector<double> bumped = prior;
    for (int i = 0; i < nx; ++i) {
      double u = (xs[i] + 1.15) / 0.3;
      if (std::abs(u) < 1) bumped[i] += 2.0 * (1 - u * u) * (1 - u * u);
    }
    pa = classical_posterior(lag, xs, prior, nullptr, {}, cfg.q1, cfg.q2, cfg.t1, cfg.ti, cfg.t2, kirr);
    pb = classical_posterior(lag, xs, bumped, nullptr, {}, cfg.q1, cfg.q2, cfg.t1, cfg.ti, cfg.t2, kirr);
    r.flag("irreversibility", pa.posterior_x == pb.posterior_x && pa.prior_x != pb.prior_x, "identity");
  }

  {
    double worst = 0.0;
    for (const McSample& a : mc.accepted) {
      PhasePoint b = back_propagate(lag, a.final, cfg.t1, cfg.ti, cfg.t2, a.x);
      worst = std::max({worst, std::abs(b.q - a.initial.q), std::abs(b.k - a.initial.k)});
    }
    r.at_most("reversibility", 1e-12, worst, "identity");
  }

  {
    double worst = 0.0;
    const double hh = 1e-5;
    for (int k = -15; k <= 15; ++k) {
      double x = 0.1 * k;
      auto s12 = [&](double v) { return extremal_action(lag, {cfg.q1, cfg.q2, cfg.t1, cfg.ti, cfg.t2, v}).S12; };
      double fd = (s12(x + hh) - s12(x - hh)) / (2 * hh);
      worst = std::max(worst, std::abs(fd - extremal_action(lag, {cfg.q1, cfg.q2, cfg.t1, cfg.ti, cfg.t2, x}).alpha12));
    }
    r.check("alpha-derivative", 0.0, worst, 1e-6, "independent-oracle");
  }

  // oscillator kinetic-energy sweep at m = 1, q = 3 on x in [1, 5]
  CorrespondenceReport cr = semiclassical_correspondence(dvec(p, "omega_sweep"), 1.0, 3.0, 1.0, 5.0);
  r.flag("semiclassical-monotone", cr.monotone, "independent-oracle");

  {
    std::ostringstream os;
    write_histogram_csv(os, h);
    r.add_dataset("mc_histogram", os.str());
    r.add_dataset("posterior", csv_columns({"x", "prior", "likelihood", "posterior", "alpha12"},
                                           {xs, post.prior_x, post.likelihood, post.posterior_x, post.alpha12}));
    r.add_dataset("pointer", csv_columns({"p", "posterior"}, {pg, post.posterior_p}));
    r.add_dataset("irreversibility", csv_columns({"x", "prior_a", "prior_b", "posterior_a", "posterior_b"},
                                                 {xs, pa.prior_x, pb.prior_x, pa.posterior_x, pb.posterior_x}));
  }
  return r;
}

}  // namespace wv
