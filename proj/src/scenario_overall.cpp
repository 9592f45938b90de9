#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scenario_util.hpp"
#include "wv/scenarios.hpp"
#include "wv/weakvalues.hpp"

namespace wv {

using namespace detail;

namespace {

// uniform weights over the evenly spaced spectrum -(d-1)/2 .. (d-1)/2
std::pair<KetVector, HermitianObservable> uniform_setup(int d) {
  CMat a = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) a(i, i) = i - 0.5 * (d - 1);
  return {KetVector(CVec::Ones(d)), HermitianObservable(a)};
}

}  // namespace

ScenarioResult run_overall_distribution(const nlohmann::json& p, std::uint64_t seed) {
  ScenarioResult r;
  r.tol_scale = dnum(p, "tol_scale");
  const int dim = inum(p, "dim"), ns = inum(p, "n_samples");
  auto [psi, a] = uniform_setup(dim);
  const OverallWeakValueDensity dens = overall_weak_value_density(psi, a);
  std::mt19937_64 rng(seed);
  OverallSamples s = sample_overall_weak_values(psi, a, ns, rng);

  std::vector<double> al, be, r2;
  for (cplx w : s.values) {
    al.push_back(w.real());
    be.push_back(w.imag());
    double u = (w.real() - dens.mean) / dens.delta_a, v = w.imag() / dens.delta_a;
    r2.push_back(u * u + v * v);
  }
  double mean = 0.0, var = 0.0;
  for (double v : al) mean += v;
  mean /= ns;
  for (double v : al) var += (v - mean) * (v - mean);
  var /= ns - 1;
  const double sd_pred = dens.delta_a / std::sqrt(2.0);
  r.check("mean", dens.mean, mean, 3 * sd_pred / std::sqrt(double(ns)), "reference-value");
  r.check("std-ratio", 1.0, std::sqrt(var) / sd_pred, 0.01, "reference-value");

  const double amax = std::sqrt(3.0) * dens.delta_a;
  long ecc = std::count_if(al.begin(), al.end(), [&](double v) { return std::abs(v - dens.mean) > amax; });
  r.check("eccentric", 0.0257, double(ecc) / ns, 0.003, "reference-value");
  r.at_most("ks", 0.01, ks_distance(al, dens), "independent-oracle");

  // radial law in the complex plane: P(R^2 < t) = 1 - (1 + t)^-2
  {
    std::sort(r2.begin(), r2.end());
    double ks = 0.0;
    for (size_t i = 0; i < r2.size(); ++i) {
      double f = 1.0 - std::pow(1.0 + r2[i], -2.0);
      ks = std::max({ks, std::abs(f - double(i) / ns), std::abs(double(i + 1) / ns - f)});
    }
    r.at_most("ks-2d-radial", 0.01, ks, "independent-oracle");
  }

  long pos = std::count_if(be.begin(), be.end(), [](double v) { return v > 0; });
  r.check("beta-symmetry", 0.0, (pos - 0.5 * ns) / (0.5 * std::sqrt(double(ns))), 3.0, "independent-oracle");

  {
    auto [psi2, a2] = uniform_setup(2);
    OverallWeakValueDensity d2 = overall_weak_value_density(psi2, a2);
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    double one = gauss_kronrod<double, 61>::integrate([&](double x) { return d2.pdf(x); }, -inf, inf, 10, 1e-14);
    // 2-D: integrate the radial profile 2 pi r f(r)
    double two = gauss_kronrod<double, 61>::integrate(
        [&](double rr) { return 2 * std::numbers::pi * rr * d2.pdf2d(d2.mean + rr, 0.0); }, 0.0, inf, 10, 1e-14);
    r.check("normalization-dim2", 0.0, std::max(std::abs(one - 1), std::abs(two - 1)), 1e-10, "identity");
  }

  {
    std::vector<double> xs, pdf, emp;
    const int bins = 120;
    const double lo = dens.mean - 6 * dens.delta_a, hi = dens.mean + 6 * dens.delta_a, w = (hi - lo) / bins;
    std::vector<long> cnt(bins, 0);
    for (double v : al)
      if (v >= lo && v < hi) ++cnt[std::min(bins - 1, int((v - lo) / w))];
    for (int b = 0; b < bins; ++b) {
      xs.push_back(lo + (b + 0.5) * w);
      pdf.push_back(dens.pdf(xs.back()));
      emp.push_back(cnt[b] / (double(ns) * w));
    }
    r.add_dataset("alpha_density", csv_columns({"alpha", "closed_form", "monte_carlo"}, {xs, pdf, emp}));
    r.add_dataset("summary", csv_columns({"mean", "delta_a", "proposals", "eccentric_fraction", "closed_tail"},
                                         {{dens.mean}, {dens.delta_a}, {double(s.proposals)},
                                          {double(ecc) / ns}, {dens.tail(amax)}}));
  }
  return r;
}

}  // namespace wv
