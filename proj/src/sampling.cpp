#include "wv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "wv/vonneumann.hpp"

namespace wv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMinWindowSamples = 8;
}  // namespace

WindowPartition uniform_partition(const GridSpec& grid, double spacing, double origin) {
  if (!(spacing > 0.0)) throw PartitionError("window spacing must be positive");
  // index boundaries: samples j < b lie left of the boundary
  std::vector<int> cuts{0};
  const double lo = grid.x_min - 0.5 * grid.dx, hi = grid.x_max() + 0.5 * grid.dx;
  long k0 = std::lround(std::floor((lo - origin) / spacing - 0.5));
  for (long k = k0;; ++k) {
    double b = origin + (k + 0.5) * spacing;
    if (b >= hi) break;
    if (b <= lo) continue;
    int ib = static_cast<int>(std::lround((b - grid.x_min) / grid.dx + 0.5));
    if (ib > cuts.back() && ib < grid.n) cuts.push_back(ib);
  }
  cuts.push_back(grid.n);
  // fold slivers at the edges into their neighbours
  if (cuts.size() > 2 && cuts[1] - cuts[0] < kMinWindowSamples) cuts.erase(cuts.begin() + 1);
  if (cuts.size() > 2 && cuts[cuts.size() - 1] - cuts[cuts.size() - 2] < kMinWindowSamples)
    cuts.erase(cuts.end() - 2);
  WindowPartition p;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    int count = cuts[i + 1] - cuts[i];
    p.centers.push_back(grid.x(cuts[i]) + 0.5 * (count - 1) * grid.dx);
    p.half_widths.push_back(0.5 * count * grid.dx);
  }
  return p;
}

std::vector<Piece> chop(const ApparatusWavefunction& phi, WindowPartition& partition) {
  if (phi.rep != Rep::position) throw RepresentationError("chop expects position rep");
  if (partition.centers.size() != partition.half_widths.size())
    throw PartitionError("centers and half-widths differ in length");
  const GridSpec& g = phi.grid;
  std::vector<Piece> pieces;
  double total = 0.0;
  for (size_t n = 0; n < partition.centers.size(); ++n) {
    Piece pc;
    pc.snap = snap_window(partition.centers[n], partition.half_widths[n], g);
    double w = 0.0;
    for (int j = pc.snap.j0; j < pc.snap.j0 + pc.snap.count; ++j) w += std::norm(phi.samples[j]);
    pc.weight = w * g.dx;
    total += pc.weight;
    pc.psi = ApparatusWavefunction{g, std::vector<cplx>(g.n, 0.0), Rep::position};
    if (pc.weight > 0.0) {
      const double s = 1.0 / std::sqrt(pc.weight);
      for (int j = pc.snap.j0; j < pc.snap.j0 + pc.snap.count; ++j) pc.psi.samples[j] = s * phi.samples[j];
    }
    pieces.push_back(std::move(pc));
  }
  std::vector<const Piece*> order;
  for (const Piece& pc : pieces) order.push_back(&pc);
  std::sort(order.begin(), order.end(), [](const Piece* a, const Piece* b) { return a->snap.j0 < b->snap.j0; });
  for (size_t i = 1; i < order.size(); ++i)
    if (order[i]->snap.j0 < order[i - 1]->snap.j0 + order[i - 1]->snap.count)
      throw PartitionError("windows overlap");
  const double norm2 = phi.norm2();
  if (total < (1.0 - 1e-8) * norm2)
    throw PartitionError("partition covers only " + std::to_string(total / norm2) + " of the probability");
  partition.weights.clear();
  for (const Piece& pc : pieces) partition.weights.push_back(pc.weight / norm2);
  return pieces;
}

ApparatusWavefunction reassemble(const std::vector<Piece>& pieces, const GridSpec& grid) {
  ApparatusWavefunction out{grid, std::vector<cplx>(grid.n, 0.0), Rep::position};
  for (const Piece& pc : pieces) {
    const double s = std::sqrt(pc.weight);
    for (int j = 0; j < grid.n; ++j) out.samples[j] += s * pc.psi.samples[j];
  }
  return out;
}

ProfilePoint profile_at(const LocalWeakValueProfile& prof, double x) {
  const GridSpec& g = prof.grid;
  double u = (x - g.x_min) / g.dx;
  int j = std::clamp(static_cast<int>(std::floor(u)), 0, g.n - 2);
  double f = u - j;
  ProfilePoint p;
  p.alpha = (1 - f) * prof.alpha[j] + f * prof.alpha[j + 1];
  p.S = (1 - f) * prof.action_S[j] + f * prof.action_S[j + 1];
  p.valid = prof.valid[j] && prof.valid[j + 1];
  return p;
}

ShiftedPiece group_velocity_shift(const Piece& piece, const LocalWeakValueProfile& prof) {
  const GridSpec& g = piece.psi.grid;
  const double xt = piece.snap.center, eps = piece.snap.eps;
  ProfilePoint pp = profile_at(prof, xt);
  int jn = std::clamp(static_cast<int>(std::lround((xt - g.x_min) / g.dx)), 0, g.n - 1);
  ShiftedPiece s;
  s.alpha = pp.alpha;
  s.linearity = std::abs(prof.alpha_prime[jn]) * eps * eps;
  s.linearity_warning = s.linearity > 0.1;
  ApparatusWavefunction x = piece.psi;
  const double phase0 = pp.S - pp.alpha * xt;
  for (int j = 0; j < g.n; ++j) x.samples[j] *= std::polar(1.0, phase0 + pp.alpha * g.x(j));
  s.psi = to_momentum(x);
  return s;
}

SuperpositionResult superpose_weak_measurements(const ApparatusWavefunction& phi_i, WindowPartition partition,
                                                const Transition& t) {
  LocalWeakValueProfile prof = local_profile(t, phi_i);
  const GridSpec& g = phi_i.grid;
  // relative initial state: signed sqrt(L) phi_i
  ApparatusWavefunction rel = phi_i;
  const double s = 1.0 / std::sqrt(prof.prob);
  for (int j = 0; j < g.n; ++j) rel.samples[j] *= s * prof.sqrtP_signed[j];
  ConditionalEnsemble e = condition(t, phi_i);
  std::vector<Piece> pieces = chop(rel, partition);
  SuperpositionResult r;
  r.approx = ApparatusWavefunction{g, std::vector<cplx>(g.n, 0.0), Rep::momentum};
  for (const Piece& pc : pieces) {
    if (pc.weight == 0.0) continue;
    ShiftedPiece sp = group_velocity_shift(pc, prof);
    if (sp.linearity_warning) ++r.warnings;
    const double a = std::sqrt(pc.weight);
    for (int k = 0; k < g.n; ++k) r.approx.samples[k] += a * sp.psi.samples[k];
    r.centers.push_back(pc.snap.center);
    r.weights.push_back(pc.weight);
    r.alphas.push_back(sp.alpha);
  }
  r.exact = to_momentum(e.phi_f_rel);
  r.distance = l2_distance(r.approx, r.exact);
  r.norm = r.approx.norm2();
  return r;
}

void write_window_table(std::ostream& os, const SuperpositionResult& r) {
  os.precision(17);
  os << "x_tilde,weight,alpha,shift\n";
  for (size_t i = 0; i < r.centers.size(); ++i)
    os << r.centers[i] << ',' << r.weights[i] << ',' << r.alphas[i] << ',' << r.alphas[i] << '\n';
}

std::vector<double> bessel_j_table(int nmax, double z) {
  if (nmax < 0) throw DimError("bessel_j_table: nmax < 0");
  std::vector<double> out(nmax + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double az = std::abs(z);
  const int top = std::max(nmax, static_cast<int>(az)) + 40 + static_cast<int>(2.0 * std::sqrt(az + 10.0));
  std::vector<double> j(top + 2, 0.0);
  j[top + 1] = 0.0;
  j[top] = 1.0;
  for (int k = top; k >= 1; --k) {
    j[k - 1] = 2.0 * k / az * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e100)
      for (int i = k - 1; i <= top; ++i) j[i] *= 1e-100;
  }
  double s = j[0] * j[0];
  for (int k = 1; k <= top; ++k) s += 2.0 * j[k] * j[k];
  double c = 1.0 / std::sqrt(s);
  // sign from J_0 + 2 sum J_2k = 1
  double e = j[0];
  for (int k = 2; k <= top; k += 2) e += 2.0 * j[k];
  if (e < 0) c = -c;
  for (int k = 0; k <= nmax; ++k) out[k] = c * j[k] * ((z < 0 && k % 2) ? -1.0 : 1.0);
  return out;
}

double bessel_j(int n, double z) {
  int an = std::abs(n);
  double v = bessel_j_table(an, z)[an];
  return (n < 0 && an % 2) ? -v : v;
}

BlochReport bloch_envelope_check(double qk, int pmax) {
  if (pmax < 0) pmax = static_cast<int>(std::ceil(std::abs(qk))) + 20;
  const int m = 4 * (pmax + static_cast<int>(std::abs(qk)) + 40);
  auto integral = [&](double p, int periods) {
    const int pts = m * periods;
    cplx s = 0.0;
    for (int k = 0; k < pts; ++k) {
      double x = -kPi * periods + 2.0 * kPi * periods * k / pts;
      s += std::polar(1.0, -p * x - qk * std::sin(x));
    }
    return s / static_cast<double>(pts);
  };
  BlochReport r;
  const int tab = pmax + static_cast<int>(std::abs(qk)) + 60;
  std::vector<double> jt = bessel_j_table(tab, qk);
  for (int p = -pmax; p <= pmax; ++p) {
    double ref = ((p % 2) ? -1.0 : 1.0) * bessel_j(p, qk);
    r.max_integer_error = std::max(r.max_integer_error, std::abs(integral(p, 1) - ref));
  }
  r.min_integer_neighbor = 1e300;
  for (int p = -pmax; p < pmax; ++p) {
    r.max_half_integer = std::max(r.max_half_integer, std::abs(integral(p + 0.5, 2)));
    if (std::abs(p) <= std::abs(qk))
      r.min_integer_neighbor =
          std::min(r.min_integer_neighbor, std::max(std::abs(bessel_j(p, qk)), std::abs(bessel_j(p + 1, qk))));
  }
  r.sum_j2 = jt[0] * jt[0];
  for (int k = 1; k <= tab; ++k) {
    r.sum_j2 += 2.0 * jt[k] * jt[k];
    r.sum_m2j2 += 2.0 * k * k * jt[k] * jt[k];
  }
  return r;
}

}  // namespace wv
