#include "wv/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wv {

void MeasurementSetup::validate() const {
  const int d = A.dim();
  if (psi1.dim() != d) throw DimError("psi1 and A dimensions differ");
  if (phi_i.rep != Rep::position) throw RepresentationError("phi_i must be in the position representation");
  if (static_cast<int>(post_basis.size()) != d)
    throw BasisError("post-selection basis has " + std::to_string(post_basis.size()) +
                     " vectors for dimension " + std::to_string(d));
  for (const KetVector& v : post_basis)
    if (v.dim() != d) throw DimError("post-selection vector dimension differs from A");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx gij = post_basis[i].inner(post_basis[j]);
      if (std::abs(gij - cplx(i == j ? 1.0 : 0.0)) > 1e-10)
        throw BasisError("post-selection basis Gram matrix deviates from identity");
    }
}

Transition MeasurementSetup::transition(int mu) const {
  if (mu < 0 || mu >= static_cast<int>(post_basis.size())) throw DimError("outcome index out of range");
  return Transition::spectral(psi1, A, post_basis[mu]);
}

AmplitudeFunction amplitude_function(const Transition& t, const GridSpec& grid) {
  AmplitudeFunction f{grid, std::vector<cplx>(grid.n)};
  for (int j = 0; j < grid.n; ++j) f.g[j] = t.at(grid.x(j)).g;
  return f;
}

AmplitudeFunction amplitude_function(const KetVector& psi1, const HermitianObservable& a,
                                     const KetVector& psi_mu, const GridSpec& grid) {
  return amplitude_function(Transition::spectral(psi1, a, psi_mu), grid);
}

static double spectral_normalizer(const Transition& t, const ApparatusWavefunction& phi_i) {
  const auto& a = t.eigenvalues();
  const auto& c = t.coefficients();
  const GridSpec& g = phi_i.grid;
  std::vector<double> rho = phi_i.density();
  std::map<long long, cplx> cache;
  auto charfn = [&](double k) {
    long long key = std::llround(k * 1e9);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    cplx s = 0.0;
    for (int j = 0; j < g.n; ++j) s += rho[j] * std::polar(1.0, k * g.x(j));
    s *= g.dx;
    cache.emplace(key, s);
    return s;
  };
  cplx total = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < a.size(); ++k) {
      if (c[i] == cplx(0.0) || c[k] == cplx(0.0)) continue;
      total += std::conj(c[i]) * c[k] * charfn(a[k] - a[i]);
    }
  return total.real();
}

ConditionalEnsemble condition(const Transition& t, const ApparatusWavefunction& phi_i, int mu) {
  if (phi_i.rep != Rep::position) throw RepresentationError("condition: phi_i must be in position rep");
  const GridSpec& grid = phi_i.grid;
  std::vector<cplx> gv(grid.n);
  double prob = 0.0, ref = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    AmplitudeTriple r = t.at(grid.x(j));
    gv[j] = r.g;
    prob += std::norm(gv[j] * phi_i.samples[j]);
    ref += r.scale * r.scale * std::norm(phi_i.samples[j]);
  }
  prob *= grid.dx;
  ref *= grid.dx;
  // the guard is relative to the amplitude scale, so closed forms with no
  // cancellation are never called orthogonal unless they vanish
  if (!(prob > 0.0 && prob >= kOrthogonalP * std::min(1.0, ref)))
    throw OrthogonalPostSelection("branch " + std::to_string(mu) + " has P=" + std::to_string(prob));
  ConditionalEnsemble e;
  e.mu = mu;
  e.transition_prob = prob;
  e.spectral_normalizer = t.has_terms() ? spectral_normalizer(t, phi_i) : prob;
  e.phi_f_rel = ApparatusWavefunction{grid, std::vector<cplx>(grid.n), Rep::position};
  e.phi_i_rel = e.phi_f_rel;
  const double s = 1.0 / std::sqrt(prob);
  for (int j = 0; j < grid.n; ++j) {
    e.phi_f_rel.samples[j] = s * gv[j] * phi_i.samples[j];
    e.phi_i_rel.samples[j] = s * std::abs(gv[j]) * phi_i.samples[j];
  }
  return e;
}

ConditionalEnsemble relative_final_state(const MeasurementSetup& s, int mu) {
  s.validate();
  return condition(s.transition(mu), s.phi_i, mu);
}

std::vector<double> momentum_density(const ApparatusWavefunction& psi_x) {
  ApparatusWavefunction p = to_momentum(psi_x);
  std::vector<double> d = p.density();
  double z = 0.0;
  for (double v : d) z += v;
  z *= p.grid.dp();
  for (double& v : d) v /= z;
  return d;
}

std::vector<double> conditional_distribution(const MeasurementSetup& s, int mu) {
  return momentum_density(relative_final_state(s, mu).phi_f_rel);
}

ApparatusWavefunction momentum_shifted(const ApparatusWavefunction& phi_x, double a) {
  if (phi_x.rep != Rep::position) throw RepresentationError("momentum_shifted expects position rep");
  ApparatusWavefunction out = phi_x;
  for (int j = 0; j < phi_x.grid.n; ++j) out.samples[j] *= std::polar(1.0, a * phi_x.grid.x(j));
  return to_momentum(out);
}

std::vector<double> unconditional_distribution(const KetVector& psi1, const HermitianObservable& a,
                                               const ApparatusWavefunction& phi_i) {
  if (psi1.dim() != a.dim()) throw DimError("psi1 and A dimensions differ");
  const SpectralDecomposition& sd = a.spectrum();
  const int n = phi_i.grid.n;
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < sd.size(); ++k) {
    double pa = (sd.bases[k].adjoint() * psi1.amplitudes()).squaredNorm();
    if (pa == 0.0) continue;
    ApparatusWavefunction shifted = momentum_shifted(phi_i, sd.eigenvalues[k]);
    for (int i = 0; i < n; ++i) out[i] += pa * std::norm(shifted.samples[i]);
  }
  return out;
}

std::vector<double> unconditional_distribution(const MeasurementSetup& s) {
  return unconditional_distribution(s.psi1, s.A, s.phi_i);
}

SumRuleReport sum_rule_report(const MeasurementSetup& s) {
  s.validate();
  const GridSpec& grid = s.phi_i.grid;
  std::vector<double> pooled(grid.n, 0.0);
  SumRuleReport r;
  for (int mu = 0; mu < static_cast<int>(s.post_basis.size()); ++mu) {
    Transition t = s.transition(mu);
    ApparatusWavefunction f = s.phi_i;
    double prob = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      f.samples[j] *= t.at(grid.x(j)).g;
      prob += std::norm(f.samples[j]);
    }
    prob *= grid.dx;
    r.probabilities.push_back(prob);
    r.total_probability += prob;
    if (prob >= kOrthogonalP) {
      std::vector<double> d = momentum_density(f);
      for (int i = 0; i < grid.n; ++i) pooled[i] += prob * d[i];
    } else {
      ApparatusWavefunction fp = to_momentum(f);
      for (int i = 0; i < grid.n; ++i) pooled[i] += std::norm(fp.samples[i]);
    }
  }
  std::vector<double> direct = unconditional_distribution(s);
  for (int i = 0; i < grid.n; ++i) r.max_deviation = std::max(r.max_deviation, std::abs(pooled[i] - direct[i]));
  return r;
}

double verify_sum_rule(const MeasurementSetup& s) { return sum_rule_report(s).max_deviation; }

std::vector<SpectralShift> spectral_shift_decomposition(const MeasurementSetup& s, int mu) {
  s.validate();
  std::vector<cplx> c = spectral_coefficients(s.psi1, s.A, s.post_basis[mu]);
  std::vector<SpectralShift> out;
  for (size_t k = 0; k < c.size(); ++k) out.push_back({c[k], s.A.spectrum().eigenvalues[k]});
  return out;
}

ApparatusWavefunction reassemble_shifts(const std::vector<SpectralShift>& terms,
                                        const ApparatusWavefunction& phi_i, double prob) {
  ApparatusWavefunction out{phi_i.grid, std::vector<cplx>(phi_i.grid.n, 0.0), Rep::momentum};
  const double s = 1.0 / std::sqrt(prob);
  for (const SpectralShift& t : terms) {
    if (t.coeff == cplx(0.0)) continue;
    ApparatusWavefunction sh = momentum_shifted(phi_i, t.shift);
    for (int i = 0; i < phi_i.grid.n; ++i) out.samples[i] += s * t.coeff * sh.samples[i];
  }
  return out;
}

std::vector<AblEntry> abl_probability(const KetVector& psi1, const HermitianObservable& a,
                                      const KetVector& psi2) {
  std::vector<cplx> c = spectral_coefficients(psi1, a, psi2);
  double z = 0.0;
  for (const cplx& v : c) z += std::norm(v);
  if (!(z > 1e-28)) throw UndefinedABL("all <psi2|Pi(a)|psi1> vanish");
  std::vector<AblEntry> out;
  for (size_t k = 0; k < c.size(); ++k) out.push_back({a.spectrum().eigenvalues[k], std::norm(c[k]) / z});
  return out;
}

ApparatusWavefunction aav_weak_state(const ApparatusWavefunction& phi_i, cplx w) {
  if (phi_i.rep != Rep::position) throw RepresentationError("aav_weak_state expects position rep");
  const GridSpec& g = phi_i.grid;
  const double beta = w.imag(), xc = g.x(g.n / 2);
  std::vector<double> logw(g.n);
  double lmax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.n; ++j) {
    double a = std::abs(phi_i.samples[j]);
    logw[j] = a > 0 ? std::log(a) - beta * (g.x(j) - xc) : -std::numeric_limits<double>::infinity();
    lmax = std::max(lmax, logw[j]);
  }
  // tilted density must still vanish at the grid edges
  double total = 0.0, outer = 0.0;
  const int edge = std::max(1, g.n / 40);
  for (int j = 0; j < g.n; ++j) {
    double d = std::exp(2.0 * (logw[j] - lmax));
    total += d;
    if (j < edge || j >= g.n - edge) outer += d;
  }
  if (outer > 1e-8 * total)
    throw FallOffViolation("phi_i does not fall off faster than exp(-|Im w x|) on the grid");
  ApparatusWavefunction out = phi_i;
  for (int j = 0; j < g.n; ++j) {
    cplx ph = phi_i.samples[j] == cplx(0.0) ? cplx(0.0) : phi_i.samples[j] / std::abs(phi_i.samples[j]);
    out.samples[j] = std::exp(logw[j] - lmax) * ph * std::polar(1.0, w.real() * g.x(j));
  }
  return out.normalized();
}

nlohmann::json branches_json(const MeasurementSetup& s) {
  nlohmann::json j;
  j["branches"] = nlohmann::json::array();
  SumRuleReport r = sum_rule_report(s);
  std::vector<double> ps = s.phi_i.grid.ps();
  for (int mu = 0; mu < static_cast<int>(s.post_basis.size()); ++mu) {
    nlohmann::json b;
    b["mu"] = mu;
    b["P"] = r.probabilities[mu];
    if (r.probabilities[mu] >= kOrthogonalP) {
      Moments m = moments(ps, conditional_distribution(s, mu), s.phi_i.grid.dp());
      b["mean_p"] = m.mean;
      b["var_p"] = m.variance;
    } else {
      b["mean_p"] = nullptr;
      b["var_p"] = nullptr;
    }
    j["branches"].push_back(b);
  }
  j["sum_rule_dev"] = r.max_deviation;
  j["grid"] = {{"x_min", s.phi_i.grid.x_min}, {"dx", s.phi_i.grid.dx}, {"n", s.phi_i.grid.n}};
  return j;
}

}  // namespace wv
