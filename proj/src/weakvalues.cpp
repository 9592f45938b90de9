#include "wv/weakvalues.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "wv/vonneumann.hpp"

namespace wv {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_to(double theta, double target, double period) {
  return theta + period * std::round((target - theta) / period);
}
}  // namespace

ComplexWeakValue weak_value(const KetVector& psi1, const HermitianObservable& a, const KetVector& psi2) {
  if (psi1.dim() != a.dim() || psi2.dim() != a.dim()) throw DimError("weak_value: dimension mismatch");
  const cplx den = psi2.amplitudes().dot(psi1.amplitudes());
  if (!(std::abs(den) > 1e-14)) throw OrthogonalPostSelection("<psi2|psi1> vanishes");
  const cplx w = psi2.amplitudes().dot(a.matrix() * psi1.amplitudes()) / den;
  return {w.real(), w.imag()};
}

Eigen::Vector3d weak_spin_vector(const KetVector& psi1, const KetVector& psi2, double j) {
  SpinTriple s = spin_operators(j);
  return {weak_value(psi1, s.x, psi2).alpha, weak_value(psi1, s.y, psi2).alpha,
          weak_value(psi1, s.z, psi2).alpha};
}

ComplexWeakValue local_weak_value(const Transition& t, double x) {
  AmplitudeTriple r = t.at(x);
  if (!(std::abs(r.g) >= 1e-12 * r.scale)) throw OrthogonalPostSelection("amplitude zero at x");
  cplx w = r.ag / r.g;
  return {w.real(), w.imag()};
}

Gradients weak_value_gradients(const Transition& t, double x) {
  AmplitudeTriple r = t.at(x);
  if (!(std::abs(r.g) >= 1e-12 * r.scale)) throw OrthogonalPostSelection("amplitude zero at x");
  const cplx w1 = r.ag / r.g, w2 = r.a2g / r.g;
  const cplx d = w2 - w1 * w1;
  return {-d.imag(), d.real()};
}

LocalWeakValueProfile local_profile(const Transition& t, const ApparatusWavefunction& phi_i) {
  if (phi_i.rep != Rep::position) throw RepresentationError("local_profile expects position rep");
  const GridSpec& grid = phi_i.grid;
  const int n = grid.n;
  LocalWeakValueProfile p;
  p.grid = grid;
  p.alpha.assign(n, 0.0);
  p.beta.assign(n, 0.0);
  p.alpha_prime.assign(n, 0.0);
  p.beta_prime.assign(n, 0.0);
  p.action_S.assign(n, 0.0);
  p.likelihood_L.assign(n, 0.0);
  p.sqrtP_signed.assign(n, 0.0);
  p.valid.assign(n, 0);

  std::vector<cplx> g(n);
  double prob = 0.0, ref = 0.0;
  for (int j = 0; j < n; ++j) {
    AmplitudeTriple r = t.at(grid.x(j));
    g[j] = r.g;
    prob += std::norm(r.g * phi_i.samples[j]);
    ref += r.scale * r.scale * std::norm(phi_i.samples[j]);
    if (!(std::abs(r.g) >= 1e-12 * r.scale)) continue;
    const cplx w1 = r.ag / r.g, d = r.a2g / r.g - w1 * w1;
    p.alpha[j] = w1.real();
    p.beta[j] = w1.imag();
    p.alpha_prime[j] = -d.imag();
    p.beta_prime[j] = d.real();
    p.valid[j] = 1;
  }
  prob *= grid.dx;
  if (!(prob > 0.0 && prob >= kOrthogonalP * std::min(1.0, ref * grid.dx)))
    throw OrthogonalPostSelection("branch probability below 1e-14 of its scale");
  p.prob = prob;
  for (int j = 0; j < n; ++j) p.likelihood_L[j] = std::norm(g[j]) / prob;

  // S from the sample nearest x = 0, seeded with Arg<mu|1> and carried along
  // by trapezoidal steps of alpha; each step is snapped onto arg g mod pi
  int j0 = std::clamp(static_cast<int>(std::lround(-grid.x_min / grid.dx)), 0, n - 1);
  double s0 = std::arg(t.at(0.0).g);
  {
    const int steps = 1000;
    const double h = grid.x(j0) / steps;
    for (int k = 0; k < steps; ++k) {
      double xa = k * h, xb = (k + 1) * h;
      AmplitudeTriple ra = t.at(xa), rb = t.at(xb);
      if (std::abs(ra.g) > 0 && std::abs(rb.g) > 0) s0 += 0.5 * h * ((ra.ag / ra.g).real() + (rb.ag / rb.g).real());
    }
  }
  auto snap = [&](int j, double predictor) {
    if (!p.valid[j] || g[j] == cplx(0.0)) {
      p.action_S[j] = predictor;
      p.sqrtP_signed[j] = 0.0;
      return;
    }
    double th = std::arg(g[j]);
    double s = wrap_to(th, predictor, kPi);
    long k = std::lround((s - th) / kPi);
    p.action_S[j] = s;
    p.sqrtP_signed[j] = (k % 2 == 0 ? 1.0 : -1.0) * std::abs(g[j]);
  };
  snap(j0, s0);
  for (int j = j0 + 1; j < n; ++j) {
    double inc = (p.valid[j] && p.valid[j - 1]) ? 0.5 * grid.dx * (p.alpha[j] + p.alpha[j - 1]) : 0.0;
    snap(j, p.action_S[j - 1] + inc);
  }
  for (int j = j0 - 1; j >= 0; --j) {
    double inc = (p.valid[j] && p.valid[j + 1]) ? 0.5 * grid.dx * (p.alpha[j] + p.alpha[j + 1]) : 0.0;
    snap(j, p.action_S[j + 1] - inc);
  }
  return p;
}

LocalWeakValueProfile local_profile(const KetVector& psi1, const HermitianObservable& a,
                                    const KetVector& psi_mu, const ApparatusWavefunction& phi_i) {
  return local_profile(Transition::spectral(psi1, a, psi_mu), phi_i);
}

RealStateFit real_state_fit(const ApparatusWavefunction& phi) {
  if (phi.rep != Rep::position) throw RepresentationError("real_state_fit expects position rep");
  RealStateFit f;
  f.p0 = moments(to_momentum(phi)).mean;
  int jmax = 0;
  double amax = 0.0;
  for (int j = 0; j < phi.grid.n; ++j)
    if (std::abs(phi.samples[j]) > amax) {
      amax = std::abs(phi.samples[j]);
      jmax = j;
    }
  if (amax == 0.0) throw GridCoverageError("wavefunction vanishes on the grid");
  const cplx ref = phi.samples[jmax] * std::polar(1.0, -f.p0 * phi.grid.x(jmax));
  const cplx unph = std::conj(ref) / std::abs(ref);
  for (int j = 0; j < phi.grid.n; ++j) {
    cplx z = unph * phi.samples[j] * std::polar(1.0, -f.p0 * phi.grid.x(j));
    f.residue = std::max(f.residue, std::abs(z.imag()) / amax);
  }
  f.real = f.residue < 1e-9;
  return f;
}

namespace {
std::vector<double> posterior_weights(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i) {
  std::vector<double> w(prof.grid.n);
  for (int j = 0; j < prof.grid.n; ++j) w[j] = prof.likelihood_L[j] * std::norm(phi_i.samples[j]);
  return w;
}

struct BranchAverages {
  double mean_alpha, var_alpha, mean_beta_prime;
};

BranchAverages branch_averages(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i) {
  std::vector<double> w = posterior_weights(prof, phi_i);
  BranchAverages b;
  b.mean_alpha = masked_average(prof.alpha, w, prof.valid);
  std::vector<double> d2(prof.grid.n);
  for (int j = 0; j < prof.grid.n; ++j) d2[j] = (prof.alpha[j] - b.mean_alpha) * (prof.alpha[j] - b.mean_alpha);
  b.var_alpha = masked_average(d2, w, prof.valid);
  b.mean_beta_prime = masked_average(prof.beta_prime, w, prof.valid);
  return b;
}
}  // namespace

ErrorLawMean error_law_mean(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i) {
  RealStateFit fit = real_state_fit(phi_i);
  ErrorLawMean m;
  m.bias_warning = !fit.real;
  m.value = fit.p0 + branch_averages(prof, phi_i).mean_alpha;
  return m;
}

ErrorLawVariance error_law_variance(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i) {
  if (moments(to_momentum(phi_i)).heavy_tail)
    throw VarianceUndefined("phi_i has heavy momentum tails; the second moment is not resolved");
  BranchAverages b = branch_averages(prof, phi_i);
  Quadrature q = quadrature_profile(phi_i, 1e-300);
  std::vector<double> w = posterior_weights(prof, phi_i);
  ErrorLawVariance v;
  v.quadrature_term = 0.25 * masked_average(q.q, w, q.valid);
  v.gradient_term = 0.5 * b.mean_beta_prime;
  v.alpha_variance = b.var_alpha;
  v.predicted = v.quadrature_term + v.gradient_term + v.alpha_variance;
  return v;
}

SamplingPoint sampling_point(const Transition& t, double sigma, double x0, const GridSpec& grid,
                             bool allow_multimodal) {
  const double ninf = -std::numeric_limits<double>::infinity();
  auto logpost = [&](double x) {
    double a = std::abs(t.at(x).g);
    double u = (x - x0) / sigma;
    return a > 0 ? 2.0 * std::log(a) - 0.5 * u * u : ninf;
  };
  const int n = grid.n;
  std::vector<double> lp(n);
  double lmax = ninf;
  for (int j = 0; j < n; ++j) {
    lp[j] = logpost(grid.x(j));
    lmax = std::max(lmax, lp[j]);
  }
  double total = 0.0, edge = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = std::exp(lp[j] - lmax);
    total += d;
    if (j < 3 || j >= n - 3) edge += d;
  }
  if (edge >= 1e-6 * total) throw GridCoverageError("posterior mass at the grid edge");

  std::vector<int> peaks;
  for (int j = 1; j + 1 < n; ++j)
    if (lp[j] > lp[j - 1] && lp[j] >= lp[j + 1] && lp[j] > lmax - std::log(1e4)) peaks.push_back(j);
  if (peaks.empty()) throw MultimodalPosterior("no interior posterior maximum");
  if (peaks.size() > 1 && !allow_multimodal)
    throw MultimodalPosterior(std::to_string(peaks.size()) + " posterior modes");

  int best = -1;
  for (int j : peaks) {
    if (lp[j] < lmax - 1e-9 * std::max(1.0, std::abs(lmax))) continue;
    if (best < 0 || std::abs(grid.x(j) - x0) < std::abs(grid.x(best) - x0)) best = j;
  }
  // golden-section refinement on the bracketing cell
  double a = grid.x(best - 1), b = grid.x(best + 1);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = logpost(c), fd = logpost(d);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = logpost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = logpost(d);
    }
  }
  SamplingPoint s;
  s.modes = static_cast<int>(peaks.size());
  s.x_mu = 0.5 * (a + b);
  s.x_first_order = x0 - 2.0 * sigma * sigma * local_weak_value(t, x0).beta;
  s.beta_prime = weak_value_gradients(t, s.x_mu).beta_prime;
  double rad = 1.0 + 2.0 * sigma * sigma * s.beta_prime;
  if (rad > 0) s.sigma_eff = sigma / std::sqrt(rad);
  return s;
}

PooledReport pooled_identities(const KetVector& psi1, const HermitianObservable& a,
                               const std::vector<KetVector>& post_basis,
                               const std::optional<ApparatusWavefunction>& phi_i) {
  PooledReport r;
  r.expectation = a.expectation(psi1);
  r.variance = a.variance(psi1);
  std::vector<ComplexWeakValue> w(post_basis.size());
  double sum_w = 0.0, beta_bar = 0.0;
  for (size_t m = 0; m < post_basis.size(); ++m) {
    double wt = std::norm(post_basis[m].inner(psi1));
    r.weights.push_back(wt);
    if (wt <= 1e-28) continue;
    w[m] = weak_value(psi1, a, post_basis[m]);
    sum_w += wt;
    r.alpha_bar += wt * w[m].alpha;
    beta_bar += wt * w[m].beta;
  }
  for (size_t m = 0; m < post_basis.size(); ++m) {
    double wt = r.weights[m];
    if (wt <= 1e-28) continue;
    r.var_alpha_bar += wt * (w[m].alpha - r.alpha_bar) * (w[m].alpha - r.alpha_bar);
    r.var_beta_bar += wt * (w[m].beta - beta_bar) * (w[m].beta - beta_bar);
  }
  r.varreim_deviation = std::abs(r.var_alpha_bar + r.var_beta_bar - r.variance);
  r.mean_deviation = std::abs(r.alpha_bar - r.expectation);
  (void)sum_w;

  if (phi_i) {
    std::vector<double> pm, mean_a, inner;
    for (const KetVector& mu : post_basis) {
      Transition t = Transition::spectral(psi1, a, mu);
      LocalWeakValueProfile prof;
      try {
        prof = local_profile(t, *phi_i);
      } catch (const OrthogonalPostSelection&) {
        continue;
      }
      BranchAverages b = branch_averages(prof, *phi_i);
      pm.push_back(prof.prob);
      mean_a.push_back(b.mean_alpha);
      inner.push_back(0.5 * b.mean_beta_prime + b.var_alpha);
    }
    double abar = 0.0;
    for (size_t k = 0; k < pm.size(); ++k) abar += pm[k] * mean_a[k];
    for (size_t k = 0; k < pm.size(); ++k)
      r.breakvar_sum += pm[k] * (inner[k] + (mean_a[k] - abar) * (mean_a[k] - abar));
    r.breakvar_deviation = std::abs(r.breakvar_sum - r.variance);
  }
  return r;
}

OmegaOperator omega_operator(const KetVector& psi1, const KetVector& psi2) {
  if (psi1.dim() != psi2.dim()) throw DimError("omega_operator: dimension mismatch");
  const cplx c = psi2.inner(psi1);
  if (!(std::abs(c) > 1e-14)) throw OrthogonalPostSelection("<psi2|psi1> vanishes");
  CMat half = psi1.amplitudes() * psi2.amplitudes().adjoint() / c;
  OmegaOperator o;
  o.matrix = 0.5 * (half + half.adjoint());
  return o;
}

void write_profile_csv(std::ostream& os, const LocalWeakValueProfile& prof) {
  os.precision(17);
  os << "x,alpha,beta,S,L,mask\n";
  for (int j = 0; j < prof.grid.n; ++j)
    os << prof.grid.x(j) << ',' << prof.alpha[j] << ',' << prof.beta[j] << ',' << prof.action_S[j] << ','
       << prof.likelihood_L[j] << ',' << int(prof.valid[j]) << '\n';
}

}  // namespace wv
