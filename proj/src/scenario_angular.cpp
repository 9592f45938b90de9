#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "scenario_util.hpp"
#include "wv/sampling.hpp"
#include "wv/scenarios.hpp"
#include "wv/vonneumann.hpp"
#include "wv/weakvalues.hpp"

namespace wv {

using namespace detail;

namespace {
constexpr double kPi = std::numbers::pi;

struct AngularSystem {
  KetVector psi1, psi_mu;
  HermitianObservable a;
};

// states whose spectral products reproduce c_m = i^m J_m(qk) e^{i m theta0}
AngularSystem angular_system(double qk, double theta0, int mmax) {
  const int d = 2 * mmax + 1;
  CVec v1(d), vm(d);
  CMat diag = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int m = i - mmax;
    const cplx c = std::pow(cplx(0, 1), m) * bessel_j(m, qk) * std::polar(1.0, m * theta0);
    const double a = std::sqrt(std::abs(c));
    v1(i) = a == 0 ? cplx(0) : a * c / std::abs(c);
    vm(i) = a;
    diag(i, i) = m;
  }
  return {KetVector(v1), KetVector(vm), HermitianObservable(diag)};
}
}  // namespace

ScenarioResult run_orbital_angular_momentum(const nlohmann::json& p, std::uint64_t) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const double qk = dnum(p, "qk"), th = dnum(p, "theta0"), sx = dnum(p, "sigma_x");
  const int mmax = inum(p, "mmax"), n = inum(p, "n");
  AngularSystem sys = angular_system(qk, th, mmax);
  const Transition t = Transition::spectral(sys.psi1, sys.a, sys.psi_mu);
  auto lambda = [&](double x) { return -qk * std::sin(x + th); };

  const GridSpec grid = gaussian_grid(sx, 0.0, n);
  const ApparatusWavefunction phi = gaussian_state(sx, 0.0, 0.0, grid);
  MeasurementSetup setup{sys.psi1, sys.a, complete_basis(sys.psi_mu), phi};
  r.at_most("sum-rule", 1e-9, sum_rule_report(setup).max_deviation, "identity");

  LocalWeakValueProfile prof = local_profile(t, phi);
  double dev = 0.0;
  for (int j = 0; j < n; ++j) dev = std::max(dev, std::abs(prof.alpha[j] - lambda(grid.x(j))));
  r.check("lambda-profile", 0.0, dev, 1e-9, "independent-oracle");

  ConditionalEnsemble e = condition(t, phi);
  std::vector<double> ps = grid.ps();
  std::vector<double> cond = momentum_density(e.phi_f_rel);
  Moments m = moments(ps, cond, grid.dp());
  const double s2 = sx * sx;
  r.check("mean-lambda", lambda(0.0) * std::exp(-s2 / 2), m.mean, 1e-6, "reference-value");
  const double var_lambda =
      qk * qk * (0.5 * (1 - std::exp(-2 * s2) * std::cos(2 * th)) - std::exp(-s2) * std::sin(th) * std::sin(th));
  const double dpi2 = 1.0 / (4.0 * s2);
  r.check("var-lambda", var_lambda, m.variance - dpi2, 1e-6, "reference-value");

  double sj2 = 0.0, sm2 = 0.0;
  for (int k = -200; k <= 200; ++k) {
    double j = std::cyl_bessel_j(std::abs(k), qk);
    sj2 += j * j;
    sm2 += double(k) * k * j * j;
  }
  r.check("bessel-sum", 1.0, sj2, 1e-8, "reference-value");
  r.check("bessel-m2-sum", qk * qk / 2, sm2, 1e-8, "reference-value");

  // heights at integer p follow J_|p|^2
  {
    std::vector<double> dm, jm;
    double big = 0.0;
    for (int kk = 0; kk <= mmax; ++kk) big = std::max(big, std::pow(std::cyl_bessel_j(kk, qk), 2));
    double num = 0.0, den = 0.0;
    for (int k = -mmax; k <= mmax; ++k) {
      int idx = static_cast<int>(std::lround(k / grid.dp())) + n / 2;
      if (idx < 0 || idx >= n || std::abs(grid.p(idx) - k) > 1e-9) continue;
      double j2 = std::pow(std::cyl_bessel_j(std::abs(k), qk), 2);
      if (j2 < 1e-3 * big) continue;
      dm.push_back(cond[idx]);
      jm.push_back(j2);
      num += cond[idx];
      den += j2;
    }
    double worst = 0.0;
    for (size_t i = 0; i < dm.size(); ++i) worst = std::max(worst, std::abs(dm[i] / (jm[i] * num / den) - 1.0));
    r.check("bessel-envelope", 0.0, worst, 1e-2, "reference-value");
  }

  BlochReport bl = bloch_envelope_check(qk);
  r.at_most("bloch-integer", 1e-8, bl.max_integer_error, "reference-value");
  r.at_most("bloch-half-integer", 1e-10, bl.max_half_integer, "identity");

  // window sampling of lambda
  const double xw = dnum(p, "window_center"), ew = dnum(p, "window_eps");
  {
    ApparatusWavefunction win = window_state(xw, ew, grid);
    WindowSnap snap = snap_window(xw, ew, grid);
    LocalWeakValueProfile wp = local_profile(t, win);
    double sampled = error_law_mean(wp, win).value;
    r.check("window-sampled", -23.0, sampled, 0.5, "reference-value");
    boost::math::quadrature::gauss<double, 30> gl;
    double avg = gl.integrate([&](double x) { return local_weak_value(t, x).alpha; }, snap.center - snap.eps,
                              snap.center + snap.eps) / (2 * snap.eps);
    r.check("window-sinc", lambda(snap.center) * std::sin(snap.eps) / snap.eps, avg, 1e-8, "independent-oracle");
    std::vector<double> wd = momentum_density(condition(t, win).phi_f_rel);
    r.add_dataset("window_density", csv_columns({"p", "density"}, {ps, wd}));

    ApparatusWavefunction narrow = window_state(0.0, 4 * grid.dx, grid);
    double shift = error_law_mean(local_profile(t, narrow), narrow).value;
    r.check("window-narrow", lambda(0.0), shift, 0.05, "independent-oracle");
  }

  // integer quantization for a wide meter
  {
    const double qs = dnum(p, "quant_sigma_x");
    GridSpec gq = gaussian_grid(qs, 0.0, n);
    ApparatusWavefunction pq = gaussian_state(qs, 0.0, 0.0, gq);
    std::vector<double> dq = momentum_density(condition(t, pq).phi_f_rel);
    double near = 0.0, tot = 0.0;
    for (int k = 0; k < n; ++k) {
      tot += dq[k];
      if (std::abs(gq.p(k) - std::round(gq.p(k))) <= 0.1 + 1e-12) near += dq[k];
    }
    r.at_least("quantization", 0.9, near / tot, "reference-value");
    r.add_dataset("quantized_density", csv_columns({"p", "density"}, {gq.ps(), dq}));
  }

  // superposition of weak measurements under partition refinement
  // on a doubled grid so the finest windows keep >= 16 samples
  {
    const GridSpec gs = gaussian_grid(sx, 0.0, 2 * n);
    const ApparatusWavefunction phs = gaussian_state(sx, 0.0, 0.0, gs);
    const std::vector<double> pss = gs.ps();
    std::vector<double> dist;
    double norm = 0.0;
    for (int level = 0; level < 4; ++level) {
      double spacing = kPi / 4 / (1 << level);
      SuperpositionResult sr = superpose_weak_measurements(phs, uniform_partition(gs, spacing), t);
      dist.push_back(sr.distance);
      if (level == 0) {
        norm = sr.norm;
        std::ostringstream os;
        write_window_table(os, sr);
        r.add_dataset("windows", os.str());
        std::vector<double> ad(gs.n), ed(gs.n);
        for (int k = 0; k < gs.n; ++k) {
          ad[k] = std::norm(sr.approx.samples[k]);
          ed[k] = std::norm(sr.exact.samples[k]);
        }
        r.add_dataset("superposition", csv_columns({"p", "approx", "exact"}, {pss, ad, ed}));
      }
    }
    bool dec = true;
    for (size_t i = 1; i < dist.size(); ++i) dec = dec && dist[i] < dist[i - 1];
    r.flag("refinement", dec, "independent-oracle");
    r.check("pooled-norm", 1.0, norm, 1e-9, "identity");
  }

  {
    std::ostringstream os;
    write_profile_csv(os, prof);
    r.add_dataset("profile", os.str());
    r.add_dataset("conditional", csv_columns({"p", "density"}, {ps, cond}));
  }
  return r;
}

}  // namespace wv
