#include "wv/classical.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace wv {

double Lagrangian1D::measured(double q, double k) const {
  switch (coupling) {
    case Coupling::none: return 0.0;
    case Coupling::linear: return coeff * q;
    case Coupling::quadratic: return coeff * q * q;
    case Coupling::kinetic: return k * k / (2.0 * m);
  }
  return 0.0;
}

namespace {

// unforced segment of duration tau; returns the segment action
double segment(const Lagrangian1D& L, PhasePoint& s, double tau) {
  const PhasePoint a = s;
  if (L.potential == Potential::free || tau == 0.0) {
    if (L.potential == Potential::free) s.q += s.k * tau / L.m;
  } else {
    const double w = L.omega, c = std::cos(w * tau), sn = std::sin(w * tau);
    s = {a.q * c + a.k / (L.m * w) * sn, -L.m * w * a.q * sn + a.k * c};
  }
  return 0.5 * (s.k * s.q - a.k * a.q);
}

double kick(const Lagrangian1D& L, PhasePoint& s, double x) {
  switch (L.coupling) {
    case Coupling::none: return 0.0;
    case Coupling::linear: s.k += x * L.coeff; break;
    case Coupling::quadratic: s.k += 2.0 * L.coeff * x * s.q; break;
    case Coupling::kinetic: {
      const double before = L.measured(s.q, s.k);
      s.q -= x * s.k / L.m;
      return -x * before;
    }
  }
  return x * L.measured(s.q, s.k);
}

void check_times(double t1, double ti, double t2) {
  if (!(t1 <= ti && ti <= t2)) throw MultipleExtremals("times must satisfy t1 <= ti <= t2");
}

}  // namespace

Flow propagate(const Lagrangian1D& L, PhasePoint start, double t1, double ti, double t2, double x) {
  check_times(t1, ti, t2);
  Flow f;
  PhasePoint s = start;
  f.action += segment(L, s, ti - t1);
  f.at_ti = s;
  f.action += kick(L, s, x);
  f.action += segment(L, s, t2 - ti);
  f.final = s;
  return f;
}

PhasePoint back_propagate(const Lagrangian1D& L, PhasePoint end, double t1, double ti, double t2, double x) {
  check_times(t1, ti, t2);
  PhasePoint s = end;
  segment(L, s, -(t2 - ti));
  switch (L.coupling) {
    case Coupling::none: break;
    case Coupling::linear: s.k -= x * L.coeff; break;
    case Coupling::quadratic: s.k -= 2.0 * L.coeff * x * s.q; break;
    case Coupling::kinetic: s.q += x * s.k / L.m; break;
  }
  segment(L, s, -(ti - t1));
  return s;
}

ExtremalResult extremal_action(const Lagrangian1D& L, const BoundaryProblem& bp) {
  if (!L.closed_form()) throw MultipleExtremals("Lagrangian has no closed-form extremal");
  if (L.coupling == Coupling::quadratic && std::abs(L.coeff * bp.x) * (bp.t2 - bp.t1) / L.m >= 0.9)
    throw MultipleExtremals("quadratic coupling beyond the focal guard");
  // q2 is affine in k1: q2 = u + v k1
  const double u = propagate(L, {bp.q1, 0.0}, bp.t1, bp.ti, bp.t2, bp.x).final.q;
  const double v = propagate(L, {bp.q1, 1.0}, bp.t1, bp.ti, bp.t2, bp.x).final.q - u;
  if (!(std::abs(v) > 1e-12)) throw MultipleExtremals("focal point: q2 independent of k1");
  ExtremalResult r;
  r.k1 = (bp.q2 - u) / v;
  Flow f = propagate(L, {bp.q1, r.k1}, bp.t1, bp.ti, bp.t2, bp.x);
  r.k2 = f.final.k;
  r.S12 = f.action;
  r.q_ti = f.at_ti.q;
  r.alpha12 = L.measured(f.at_ti.q, f.at_ti.k);
  r.vanvleck = 1.0 / std::abs(v);
  return r;
}

ClassicalPosterior classical_posterior(const Lagrangian1D& L, const std::vector<double>& x,
                                       const std::vector<double>& prior_x,
                                       const std::function<double(double)>& prior_p,
                                       const std::vector<double>& p_grid, double q1, double q2, double t1,
                                       double ti, double t2, double k_max) {
  const size_t n = x.size();
  if (n < 2 || prior_x.size() != n) throw DimError("classical_posterior: prior and grid sizes differ");
  const double dx = x[1] - x[0];
  ClassicalPosterior r;
  r.x = x;
  r.prior_x = prior_x;
  double z = 0.0;
  for (double v : prior_x) z += v;
  for (double& v : r.prior_x) v /= z * dx;
  r.likelihood.assign(n, 0.0);
  r.alpha12.assign(n, 0.0);
  std::vector<double> vv(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    ExtremalResult e = extremal_action(L, {q1, q2, t1, ti, t2, x[i]});
    r.alpha12[i] = e.alpha12;
    if (std::abs(e.k1) <= k_max) vv[i] = e.vanvleck;
    r.evidence += r.prior_x[i] * vv[i] * dx;
  }
  if (!(r.evidence > 0)) throw StarvedSampler("likelihood vanishes on the prior support");
  // posterior from the raw prior, so priors differing only where vv = 0 give identical output
  double zpost = 0.0;
  for (size_t i = 0; i < n; ++i) zpost += prior_x[i] * vv[i];
  r.posterior_x.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    r.likelihood[i] = vv[i] / r.evidence;
    r.posterior_x[i] = prior_x[i] * vv[i] / (zpost * dx);
  }
  r.p = p_grid;
  r.posterior_p.assign(p_grid.size(), 0.0);
  if (prior_p)
    for (size_t k = 0; k < p_grid.size(); ++k) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i)
        if (r.posterior_x[i] != 0.0) s += r.posterior_x[i] * prior_p(p_grid[k] - r.alpha12[i]);
      r.posterior_p[k] = s * dx;
    }
  return r;
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts.size());
  for (size_t b = 0; b < counts.size(); ++b)
    d[b] = total ? counts[b] / (static_cast<double>(total) * (edges[b + 1] - edges[b])) : 0.0;
  return d;
}

std::vector<double> Histogram::stderr_density() const {
  std::vector<double> d(counts.size());
  for (size_t b = 0; b < counts.size(); ++b) {
    if (!total) continue;
    double p = counts[b] / static_cast<double>(total);
    d[b] = std::sqrt(p * (1 - p) / total) / (edges[b + 1] - edges[b]);
  }
  return d;
}

Histogram histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  Histogram h;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < lo || v >= hi) continue;
    int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os.precision(17);
  os << "bin_center,count,density,stderr\n";
  std::vector<double> d = h.density(), e = h.stderr_density();
  for (size_t b = 0; b < h.counts.size(); ++b)
    os << 0.5 * (h.edges[b] + h.edges[b + 1]) << ',' << h.counts[b] << ',' << d[b] << ',' << e[b] << '\n';
}

McResult monte_carlo_oracle(const Lagrangian1D& L, const std::function<double(std::mt19937_64&)>& sample_x,
                            const std::function<double(std::mt19937_64&)>& sample_p, const McConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uq(-0.5 * cfg.w1, 0.5 * cfg.w1), uk(-cfg.k_max, cfg.k_max);
  McResult r;
  for (long i = 0; i < cfg.n_samples; ++i) {
    const double x = sample_x(rng);
    const double p = sample_p ? sample_p(rng) : 0.0;
    PhasePoint s{cfg.q1 + uq(rng), uk(rng)};
    Flow f = propagate(L, s, cfg.t1, cfg.ti, cfg.t2, x);
    ++r.proposals;
    if (cfg.w2 > 0 && std::abs(f.final.q - cfg.q2) > 0.5 * cfg.w2) continue;
    r.accepted.push_back({x, p + L.measured(f.at_ti.q, f.at_ti.k), s, f.final});
  }
  r.acceptance = r.proposals ? static_cast<double>(r.accepted.size()) / r.proposals : 0.0;
  if (r.acceptance < 1e-5)
    throw StarvedSampler("acceptance " + std::to_string(r.acceptance) + " below 1e-5");
  return r;
}

std::vector<double> bin_z_scores(const Histogram& h, const std::vector<double>& x,
                                 const std::vector<double>& density, double min_expected) {
  auto interp = [&](double t) {
    if (t <= x.front() || t >= x.back()) return 0.0;
    size_t j = std::upper_bound(x.begin(), x.end(), t) - x.begin() - 1;
    double f = (t - x[j]) / (x[j + 1] - x[j]);
    return (1 - f) * density[j] + f * density[j + 1];
  };
  const size_t nb = h.counts.size();
  std::vector<double> mass(nb, 0.0);
  double tot = 0.0;
  for (size_t b = 0; b < nb; ++b) {
    const int sub = 256;
    const double w = (h.edges[b + 1] - h.edges[b]) / sub;
    for (int k = 0; k < sub; ++k) mass[b] += interp(h.edges[b] + (k + 0.5) * w) * w;
    tot += mass[b];
  }
  std::vector<double> z;
  for (size_t b = 0; b < nb; ++b) {
    double pb = mass[b] / tot, e = h.total * pb;
    if (e < min_expected) continue;
    z.push_back((h.counts[b] - e) / std::sqrt(e * (1 - pb)));
  }
  return z;
}

double KineticOscillator::tau(double x) const {
  const double u2 = x * x * omega * omega, d = 1.0 + u2;
  return (omega - m * omega * omega * q * q) / (2.0 * d) +
         m * omega * omega * omega * omega * x * x * q * q / (d * d);
}

double KineticOscillator::likelihood(double x) const {
  const double d = 1.0 + x * x * omega * omega;
  return std::exp(-m * omega * q * q / d) / std::sqrt(d);
}

double KineticOscillator::action(double x) const {
  const double u = x * omega;
  return 0.5 * std::atan(u) - m * omega * omega * q * q * x / (2.0 * (1.0 + u * u));
}

CorrespondenceReport semiclassical_correspondence(const std::vector<double>& omegas, double m, double q,
                                                  double x_lo, double x_hi, int nx) {
  CorrespondenceReport r;
  const double h = (x_hi - x_lo) / (nx - 1);
  auto trapz = [&](const std::vector<double>& f) {
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i + 1 < nx; ++i) s += f[i];
    return s * h;
  };
  for (double w : omegas) {
    KineticOscillator k{m, w, q};
    // the zero-length classical flight with the same coupling
    Lagrangian1D lag{m, Potential::free, 0.0, Coupling::kinetic, 1.0};
    std::vector<double> lq(nx), lc(nx), tq(nx), tc(nx);
    for (int i = 0; i < nx; ++i) {
      double x = x_lo + i * h;
      ExtremalResult e = extremal_action(lag, {q, 0.0, 0.0, 0.0, 0.0, x});
      tq[i] = k.tau(x);
      tc[i] = e.alpha12;
      lq[i] = k.likelihood(x);
      lc[i] = e.vanvleck;
    }
    double zq = trapz(lq), zc = trapz(lc);
    CorrespondencePoint pt;
    pt.parameter = w;
    for (int i = 0; i < nx; ++i) {
      pt.dev_alpha = std::max(pt.dev_alpha, std::abs(tq[i] - tc[i]) / std::abs(tc[i]));
      pt.dev_likelihood = std::max(pt.dev_likelihood, std::abs(lq[i] / zq - lc[i] / zc) / (lc[i] / zc));
    }
    pt.deviation = std::max(pt.dev_alpha, pt.dev_likelihood);
    r.points.push_back(pt);
  }
  r.monotone = true;
  for (size_t i = 1; i < r.points.size(); ++i)
    if (!(r.points[i].deviation < r.points[i - 1].deviation)) r.monotone = false;
  return r;
}

std::vector<double> product_rule_marginal(const std::vector<std::vector<double>>& p_z_given_xy,
                                          const std::vector<double>& p_x_given_y) {
  if (p_z_given_xy.size() != p_x_given_y.size()) throw DimError("product rule: table sizes differ");
  std::vector<double> out(p_z_given_xy.empty() ? 0 : p_z_given_xy[0].size(), 0.0);
  for (size_t x = 0; x < p_x_given_y.size(); ++x)
    for (size_t z = 0; z < out.size(); ++z) out[z] += p_z_given_xy[x][z] * p_x_given_y[x];
  return out;
}

}  // namespace wv
