#include <algorithm>
#include <cmath>
#include <numbers>

#include "wv/classical.hpp"
#include "scenario_util.hpp"
#include "wv/pointer.hpp"
#include "wv/scenarios.hpp"

namespace wv {

using namespace detail;

namespace {

// <q|e^{iTx}|0> and <q|T e^{iTx}|0> by transforming the momentum-space
// ground state; the grid is in the particle coordinate
struct DftOracle {
  double m, omega;
  GridSpec grid;
  int jq;

  std::pair<cplx, cplx> operator()(double x) const {
    ApparatusWavefunction k{grid, std::vector<cplx>(grid.n), Rep::momentum};
    ApparatusWavefunction tk = k;
    const double c = std::pow(std::numbers::pi * m * omega, -0.25);
    for (int i = 0; i < grid.n; ++i) {
      double p = grid.p(i), t = p * p / (2 * m);
      k.samples[i] = c * std::exp(-p * p / (2 * m * omega)) * std::polar(1.0, t * x);
      tk.samples[i] = t * k.samples[i];
    }
    return {to_position(k).samples[jq], to_position(tk).samples[jq]};
  }
};

cplx closed_amplitude(double m, double omega, double q, double x) {
  const cplx d(1.0, -x * omega);
  return std::pow(m * omega / std::numbers::pi, 0.25) / std::sqrt(d) * std::exp(-m * omega * q * q / (2.0 * d));
}

}  // namespace

ScenarioResult run_negative_kinetic_energy(const nlohmann::json& p, std::uint64_t) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const double m = dnum(p, "m"), w = dnum(p, "omega"), q = dnum(p, "q"), dq = dnum(p, "dq");
  const int n = inum(p, "n");
  const KineticOscillator ko{m, w, q};

  r.check("tau-origin", w / 2 - m * w * w * q * q / 2, ko.tau(0.0), 1e-12, "reference-value");

  const GridSpec grid(-0.5 * n * dq, dq, n);
  const int jq = static_cast<int>(std::lround((q - grid.x_min) / dq));
  if (std::abs(grid.x(jq) - q) > 1e-9 * dq) throw ConfigError("q must sit on the dq grid");
  const DftOracle dft{m, w, grid, jq};

  // relative amplitude error, tau error relative to its largest magnitude, absolute phase error
  std::vector<double> xs, tq, td, sq, sd, lq;
  double worst_g = 0.0, worst_s = 0.0, tmax = 0.0, worst_t = 0.0;
  const double phase0 = std::arg(dft(0.0).first);
  double unwrapped = 0.0, prev = phase0;
  for (int i = 0; i <= 100; ++i) {
    double x = i * 0.05 / w;
    auto [g, tg] = dft(x);
    cplx gc = closed_amplitude(m, w, q, x);
    worst_g = std::max(worst_g, std::abs(g - gc) / std::abs(gc));
    double ph = std::arg(g);
    unwrapped += std::remainder(ph - prev, 2 * std::numbers::pi);
    prev = ph;
    worst_s = std::max(worst_s, std::abs(unwrapped - ko.action(x)));
    double t = (tg / g).real();
    worst_t = std::max(worst_t, std::abs(t - ko.tau(x)));
    tmax = std::max(tmax, std::abs(ko.tau(x)));
    xs.push_back(x);
    tq.push_back(ko.tau(x));
    td.push_back(t);
    sq.push_back(ko.action(x));
    sd.push_back(unwrapped);
    lq.push_back(ko.likelihood(x));
  }
  r.check("dft-amplitude", 0.0, worst_g, 1e-6, "independent-oracle");
  r.check("dft-tau", 0.0, worst_t / tmax, 1e-6, "independent-oracle");
  r.check("dft-action", 0.0, worst_s, 1e-6, "independent-oracle");
  r.add_dataset("profile", csv_columns({"x", "tau", "tau_dft", "S", "S_dft", "L"}, {xs, tq, td, sq, sd, lq}));

  // sign change of the DFT tau, in units of 1/omega
  {
    auto tau_d = [&](double x) { auto [g, tg] = dft(x); return (tg / g).real(); };
    double a = 0.0, b = 5.0 / w;
    if (tau_d(a) * tau_d(b) > 0) throw ConfigError("tau keeps its sign on [0, 5/omega]");
    for (int i = 0; i < 60; ++i) {
      double c = 0.5 * (a + b);
      (tau_d(c) < 0 ? a : b) = c;
    }
    r.check("tau-zero", 1.05, 0.5 * (a + b) * w, 0.25, "reference-value");
  }

  // L peaks at u^2 = 2 m omega q^2 - 1
  {
    double a = 0.0, b = 20.0 / w;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    for (int i = 0; i < 200; ++i) {
      double c = b - gr * (b - a), d = a + gr * (b - a);
      if (ko.likelihood(c) < ko.likelihood(d)) a = c;
      else b = d;
    }
    const double xpk = 0.5 * (a + b);
    r.check("likelihood-peak", std::sqrt(2 * m * w * q * q - 1), xpk * w, 1e-6, "independent-oracle");
    // the rise: half-maximum crossing against q sqrt(m omega), same order of magnitude
    const double half = 0.5 * ko.likelihood(xpk);
    double lo = 0.0, hi = xpk;
    for (int i = 0; i < 200; ++i) {
      double c = 0.5 * (lo + hi);
      (ko.likelihood(c) < half ? lo : hi) = c;
    }
    r.check("likelihood-scale", 0.0, std::log(0.5 * (lo + hi) * w / (q * std::sqrt(m * w))), std::log(2.0),
            "reference-value");
  }

  // far from the origin the flight is free: tau x^2 -> (m q^2 + 1/omega) / 2
  {
    const double x = 1e4 / w;
    r.check("free-limit", (m * q * q + 1 / w) / 2, ko.tau(x) * x * x, 1e-6 * (m * q * q + 1 / w) / 2,
            "independent-oracle");
  }

  {
    CorrespondenceReport cr =
        semiclassical_correspondence(dvec(p, "omega_sweep"), m, q, dnum(p, "x_lo"), dnum(p, "x_hi"));
    r.flag("semiclassical-monotone", cr.monotone, "independent-oracle");
    std::vector<double> om, da, dl, dv;
    for (const auto& pt : cr.points) {
      om.push_back(pt.parameter);
      da.push_back(pt.dev_alpha);
      dl.push_back(pt.dev_likelihood);
      dv.push_back(pt.deviation);
    }
    r.add_dataset("correspondence", csv_columns({"omega", "dev_tau", "dev_L", "deviation"}, {om, da, dl, dv}));
  }
  return r;
}

}  // namespace wv
