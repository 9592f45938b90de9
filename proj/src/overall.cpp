#include <algorithm>
#include <cmath>
#include <numbers>

#include "wv/weakvalues.hpp"

namespace wv {

double OverallWeakValueDensity::pdf(double alpha) const {
  double u = (alpha - mean) / delta_a;
  return 0.75 / delta_a * std::pow(1.0 + u * u, -2.5);
}

double OverallWeakValueDensity::cdf(double alpha) const {
  double u = (alpha - mean) / delta_a;
  return 0.5 + u * (2.0 * u * u + 3.0) / (4.0 * std::pow(1.0 + u * u, 1.5));
}

double OverallWeakValueDensity::pdf2d(double alpha, double beta) const {
  double r2 = ((alpha - mean) * (alpha - mean) + beta * beta) / (delta_a * delta_a);
  return 2.0 / (std::numbers::pi * delta_a * delta_a) * std::pow(1.0 + r2, -3.0);
}

double OverallWeakValueDensity::tail(double a) const { return 2.0 * (1.0 - cdf(mean + std::abs(a))); }

OverallWeakValueDensity overall_weak_value_density(const KetVector& psi, const HermitianObservable& a) {
  double var = a.variance(psi);
  if (!(var > 1e-24)) throw EigenstateDegenerate("psi is an eigenstate of A");
  return {a.expectation(psi), std::sqrt(var)};
}

OverallSamples sample_overall_weak_values(const KetVector& psi, const HermitianObservable& a, int n,
                                          std::mt19937_64& rng) {
  if (psi.dim() != a.dim()) throw DimError("sampler: dimension mismatch");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OverallSamples s;
  s.values.reserve(n);
  const CVec apsi = a.matrix() * psi.amplitudes();
  while (static_cast<int>(s.values.size()) < n) {
    KetVector mu = haar_random_state(psi.dim(), rng);
    ++s.proposals;
    cplx c = mu.amplitudes().dot(psi.amplitudes());
    if (u(rng) >= std::norm(c) || std::abs(c) < 1e-300) continue;
    s.values.push_back(mu.amplitudes().dot(apsi) / c);
  }
  return s;
}

double ks_distance(std::vector<double> samples, const OverallWeakValueDensity& d) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double f = d.cdf(samples[i]);
    ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return ks;
}

}  // namespace wv
