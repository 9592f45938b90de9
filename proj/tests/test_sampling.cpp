#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wv/sampling.hpp"
#include "wv/vonneumann.hpp"

using namespace wv;

namespace {
constexpr double kPi = std::numbers::pi;

// g = e^{iS}, S = qk cos(x + th): the angular transition in closed form
Transition angular(double qk, double th) {
  return Transition::closed_form([qk, th](double x) {
    const double s = qk * std::cos(x + th), s1 = -qk * std::sin(x + th), s2 = -qk * std::cos(x + th);
    const cplx g = std::polar(1.0, s);
    return AmplitudeTriple{g, s1 * g, cplx(s1 * s1, -s2) * g, 1.0};
  });
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}
}  // namespace

TEST_CASE("chop into one window is the identity") {
  GridSpec g = GridSpec::centered(0.0, 40.0, 1024);
  ApparatusWavefunction phi = gaussian_state(1.0, 0.3, 0.5, g);
  WindowPartition p{{g.x_min + 0.5 * (g.n - 1) * g.dx}, {0.5 * g.n * g.dx}, {}};
  std::vector<Piece> pcs = chop(phi, p);
  REQUIRE(pcs.size() == 1);
  CHECK(pcs[0].weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_distance(reassemble(pcs, g), phi) < 1e-14);
}

TEST_CASE("pieces are orthonormal and weights sum to one") {
  const double sx = kPi;
  GridSpec g = gaussian_grid(sx, 0.0, 4096);
  ApparatusWavefunction phi = gaussian_state(sx, 0.0, 0.0, g);
  WindowPartition p = uniform_partition(g, kPi / 4);
  std::vector<Piece> pcs = chop(phi, p);
  double s = 0.0;
  for (double w : p.weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  double off = 0.0, diag = 0.0;
  for (size_t a = 0; a < pcs.size(); ++a)
    for (size_t b = 0; b < pcs.size(); ++b) {
      if (pcs[a].weight == 0.0 || pcs[b].weight == 0.0) continue;
      cplx o = overlap(pcs[a].psi, pcs[b].psi);
      if (a == b) diag = std::max(diag, std::abs(o - 1.0));
      else off = std::max(off, std::abs(o));
    }
  CHECK(diag < 1e-12);
  CHECK(off < 1e-12);
  CHECK(l2_distance(reassemble(pcs, g), phi) < 1e-9);
}

TEST_CASE("partition errors") {
  GridSpec g = GridSpec::centered(0.0, 40.0, 1024);
  ApparatusWavefunction phi = gaussian_state(1.0, 0.0, 0.0, g);
  WindowPartition narrow{{0.0}, {0.5}, {}};
  CHECK_THROWS_AS(chop(phi, narrow), PartitionError);
  WindowPartition both{{-1.0, 1.0}, {15.0, 15.0}, {}};
  CHECK_THROWS_AS(chop(phi, both), PartitionError);
  CHECK_THROWS_AS(uniform_partition(g, 0.0), PartitionError);
  CHECK_THROWS_AS(chop(to_momentum(phi), narrow), RepresentationError);
}

TEST_CASE("constant weak value shifts a window exactly") {
  // eigenstate: alpha is the eigenvalue everywhere
  KetVector up = spin_coherent_state(0.5, 0.0, 0.0);
  Transition t = Transition::spectral(up, spin_operators(0.5).z, up);
  GridSpec g = GridSpec::centered(0.0, 64.0, 8192);
  ApparatusWavefunction phi = gaussian_state(2.0, 0.0, 0.0, g);
  LocalWeakValueProfile prof = local_profile(t, phi);
  WindowPartition p = uniform_partition(g, 1.0);
  std::vector<Piece> pcs = chop(phi, p);
  for (const Piece& pc : pcs) {
    if (pc.weight < 1e-6) continue;
    ShiftedPiece s = group_velocity_shift(pc, prof);
    CHECK(s.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.linearity < 1e-12);
    CHECK(l2_distance(s.psi, momentum_shifted(pc.psi, 0.5)) < 1e-10);
  }
}

TEST_CASE("single-window error is quadratic in the half-width") {
  const double qk = 25.0, th = kPi / 2;
  Transition t = angular(qk, th);
  GridSpec g = GridSpec::centered(0.0, 8.0, 8192);
  ApparatusWavefunction phi = gaussian_state(0.5, 0.0, 0.0, g);
  LocalWeakValueProfile prof = local_profile(t, phi);
  const double xt = g.x(g.n / 2 + 307);
  std::vector<double> le, ld;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    Piece pc;
    pc.snap = snap_window(xt, eps, g);
    pc.weight = 1.0;
    pc.psi = window_state(xt, eps, g);
    ShiftedPiece s = group_velocity_shift(pc, prof);
    CHECK(s.linearity_warning == (s.linearity > 0.1));
    ApparatusWavefunction ex = pc.psi;
    for (int j = 0; j < g.n; ++j) ex.samples[j] *= std::polar(1.0, qk * std::cos(g.x(j) + th));
    const double d = l2_distance(s.psi, to_momentum(ex));
    le.push_back(std::log(pc.snap.eps));
    ld.push_back(std::log(d * d));
  }
  CHECK(slope(le, ld) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("weak regime: one window reproduces the relative state") {
  Transition t = angular(5.0, 0.4);
  GridSpec g = gaussian_grid(0.01, 0.0, 4096);
  ApparatusWavefunction phi = gaussian_state(0.01, 0.0, 0.0, g);
  WindowPartition p{{g.x_min + 0.5 * (g.n - 1) * g.dx}, {0.5 * g.n * g.dx}, {}};
  SuperpositionResult r = superpose_weak_measurements(phi, p, t);
  CHECK(r.distance < 1e-3);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(r.alphas.size() == 1);
}

TEST_CASE("refinement reduces the error and keeps the norm") {
  Transition t = angular(5.0, 0.0);
  GridSpec g = gaussian_grid(1.0, 0.0, 8192);
  ApparatusWavefunction phi = gaussian_state(1.0, 0.0, 0.0, g);
  double last = 1e300;
  for (double sp : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    SuperpositionResult r = superpose_weak_measurements(phi, uniform_partition(g, sp), t);
    CHECK(r.distance < last);
    last = r.distance;
    CHECK(std::abs(r.norm - 1.0) < 1e-9);
  }
  CHECK(last < 0.05);
}

TEST_CASE("window table") {
  Transition t = angular(5.0, 0.0);
  GridSpec g = gaussian_grid(1.0, 0.0, 2048);
  ApparatusWavefunction phi = gaussian_state(1.0, 0.0, 0.0, g);
  SuperpositionResult r = superpose_weak_measurements(phi, uniform_partition(g, 0.5), t);
  std::ostringstream os;
  write_window_table(os, r);
  CHECK(os.str().rfind("x_tilde,weight,alpha,shift\n", 0) == 0);
  CHECK(r.centers.size() == r.alphas.size());
}

TEST_CASE("bessel functions") {
  for (double z : {0.5, 5.0, 25.0}) {
    std::vector<double> tab = bessel_j_table(40, z);
    for (int n = 0; n <= 40; ++n) CHECK(std::abs(tab[n] - std::cyl_bessel_j(n, z)) < 1e-12);
  }
  CHECK(bessel_j(-3, 2.0) == doctest::Approx(-std::cyl_bessel_j(3, 2.0)).epsilon(1e-12));
  CHECK(bessel_j(3, -2.0) == doctest::Approx(-std::cyl_bessel_j(3, 2.0)).epsilon(1e-12));
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(4, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j_table(-1, 1.0), DimError);
}

TEST_CASE("bloch envelope") {
  const double qk = 25.0;
  BlochReport b = bloch_envelope_check(qk);
  CHECK(b.max_integer_error < 1e-8);
  CHECK(b.max_half_integer < 1e-10);
  CHECK(b.min_integer_neighbor > 1e-3);
  CHECK(b.sum_j2 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.sum_m2j2 == doctest::Approx(qk * qk / 2).epsilon(1e-8));

  // qk = 0: only p = 0 survives
  BlochReport z = bloch_envelope_check(0.0, 5);
  CHECK(z.max_integer_error < 1e-12);
  CHECK(z.sum_j2 == doctest::Approx(1.0));
  CHECK(z.sum_m2j2 == 0.0);
}
