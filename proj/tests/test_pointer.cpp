#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wv/pointer.hpp"

using namespace wv;

namespace {
constexpr double kPi = std::numbers::pi;

double rt_error(const ApparatusWavefunction& a, const ApparatusWavefunction& b) {
  double s = 0.0;
  for (size_t j = 0; j < a.samples.size(); ++j) s += std::norm(a.samples[j] - b.samples[j]);
  return std::sqrt(s * a.measure());
}
}  // namespace

TEST_CASE("grid geometry") {
  CHECK_THROWS(GridSpec(0.0, 0.1, 100));
  CHECK_THROWS(GridSpec(0.0, 0.1, 32));
  CHECK_THROWS(GridSpec(0.0, -0.1, 64));
  GridSpec g = GridSpec::centered(1.0, 8.0, 256);
  CHECK(g.n == 256);
  CHECK(g.dx == doctest::Approx(8.0 / 256));
  CHECK(g.x(0) == doctest::Approx(-3.0));
  CHECK(g.p(g.n / 2) == 0.0);
  CHECK(g.dp() == doctest::Approx(2 * kPi / 8.0));
}

TEST_CASE("gaussian states") {
  GridSpec g = gaussian_grid(1.0, 0.0, 1024);
  ApparatusWavefunction s = gaussian_state(1.0, 0.0, 0.0, g);
  CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  for (const cplx& v : s.samples) CHECK(v.imag() == 0.0);
  Moments mx = moments(s), mp = moments(to_momentum(s));
  CHECK(mx.variance == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::sqrt(mp.variance) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::sqrt(mx.variance * mp.variance) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(mp.mean) < 1e-9);

  ApparatusWavefunction w = gaussian_state(kPi, 0.0, 0.0, gaussian_grid(kPi, 0.0));
  CHECK(std::sqrt(moments(to_momentum(w)).variance) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-8));

  // shifted and boosted
  GridSpec g2 = GridSpec::centered(0.0, 40.0, 4096);
  ApparatusWavefunction b = gaussian_state(0.7, 1.3, -2.1, g2);
  CHECK(std::abs(moments(b).mean - 1.3) < 1e-9);
  CHECK(std::abs(moments(to_momentum(b)).mean + 2.1) < 1e-9);

  CHECK_THROWS_AS(gaussian_state(1.0, 0.0, 0.0, GridSpec::centered(0.0, 6.0, 256)), GridCoverageError);
  CHECK_THROWS_AS(gaussian_state(1.0, 0.0, 50.0, GridSpec::centered(0.0, 20.0, 256)), GridCoverageError);
  CHECK_THROWS(gaussian_state(-1.0, 0.0, 0.0, g));
}

TEST_CASE("fourier transforms") {
  GridSpec g = GridSpec::centered(0.0, 30.0, 2048);
  ApparatusWavefunction s = gaussian_state(0.8, 0.5, 1.5, g);
  ApparatusWavefunction p = to_momentum(s);
  CHECK(p.rep == Rep::momentum);
  CHECK(p.norm2() == doctest::Approx(s.norm2()).epsilon(1e-10));
  CHECK(rt_error(to_position(p), s) < 1e-10);
  CHECK_THROWS_AS(to_momentum(p), RepresentationError);
  CHECK_THROWS_AS(to_position(s), RepresentationError);

  // analytic Gaussian transform, phase included
  const double sx = 0.8, x0 = 0.5, p0 = 1.5, sp = 1 / (2 * sx);
  double worst = 0.0;
  for (int k = 0; k < g.n; ++k) {
    double pk = g.p(k);
    cplx want = std::pow(2 * kPi * sp * sp, -0.25) * std::exp(-(pk - p0) * (pk - p0) / (4 * sp * sp)) *
                std::polar(1.0, -(pk - p0) * x0);
    worst = std::max(worst, std::abs(p.samples[k] - want));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("window states") {
  GridSpec g = GridSpec::centered(0.0, 400.0, 65536);
  const double eps = 1.0;
  ApparatusWavefunction w = window_state(0.0, eps, g);
  CHECK(w.norm2() == doctest::Approx(1.0).epsilon(1e-14));
  WindowSnap sn = snap_window(0.0, eps, g);
  CHECK(sn.eps == doctest::Approx(sn.count * g.dx / 2));
  ApparatusWavefunction p = to_momentum(w);
  CHECK(std::abs(p.samples[g.n / 2]) == doctest::Approx(std::sqrt(sn.eps / kPi)).epsilon(1e-12));

  // roughly 90% in the central lobe: (2/pi) Si(2 pi) = 0.9028
  double lobe = 0.0;
  std::vector<double> d = p.density();
  for (int k = 0; k < g.n; ++k)
    if (std::abs(g.p(k)) < kPi / sn.eps) lobe += d[k] * g.dp();
  CHECK(lobe == doctest::Approx(0.9028).epsilon(2e-3));
  CHECK(moments(p).heavy_tail);

  CHECK_THROWS_AS(window_state(0.0, 2 * g.dx, g), ResolutionError);
}

TEST_CASE("window transform is the sinc on the central lobes") {
  GridSpec g = GridSpec::centered(0.0, 1024.0, 262144);
  const double xt = 3.0, eps = 8.0;
  ApparatusWavefunction p = to_momentum(window_state(xt, eps, g));
  WindowSnap sn = snap_window(xt, eps, g);
  double worst = 0.0;
  for (int k = 0; k < g.n; ++k) {
    double pk = g.p(k);
    if (std::abs(pk) > 2 * kPi / sn.eps) continue;
    double sinc = pk == 0 ? 1.0 : std::sin(pk * sn.eps) / (pk * sn.eps);
    cplx want = std::sqrt(sn.eps / kPi) * sinc * std::polar(1.0, -pk * sn.center);
    worst = std::max(worst, std::abs(p.samples[k] - want));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("bump state") {
  const double p0 = 2.0;
  GridSpec g = GridSpec::centered(0.0, 400.0, 16384);
  ApparatusWavefunction b = bump_state(p0, g);
  CHECK(b.rep == Rep::momentum);
  CHECK(b.norm2() == doctest::Approx(1.0).epsilon(1e-10));
  for (int k = 0; k < g.n; ++k)
    if (std::abs(g.p(k)) >= p0) CHECK(b.samples[k] == cplx(0.0));

  ApparatusWavefunction x = to_position(b);
  std::vector<double> d = x.density();
  for (int n = 1; n <= 8; ++n) {
    double m = 0.0;
    for (int j = 0; j < g.n; ++j) m += std::pow(std::abs(g.x(j)), n) * d[j] * g.dx;
    CHECK(std::isfinite(m));
    CHECK(m < 1e12);
  }
  // log-log fit of the density envelope beyond 10/p1: steeper than |x|^-4, and
  // steepening (faster than any power)
  const double p1 = 1.0;
  GridSpec gw = GridSpec::centered(0.0, 800.0, 32768);
  ApparatusWavefunction xw = to_position(bump_state(p1, gw));
  std::vector<double> lx, ld;
  for (double lo = 10 / p1; lo < 100 / p1; lo *= 1.25) {
    double e = 0.0;
    for (int j = 0; j < gw.n; ++j)
      if (std::abs(gw.x(j)) >= lo && std::abs(gw.x(j)) < 1.25 * lo) e = std::max(e, std::norm(xw.samples[j]));
    lx.push_back(std::log(lo));
    ld.push_back(std::log(e));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(lx.size());
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ld[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ld[i];
  }
  CHECK((m * sxy - sx * sy) / (m * sxx - sx * sx) < -4.0);
  const size_t h = lx.size() / 2;
  CHECK((ld[h] - ld[0]) / (lx[h] - lx[0]) > (ld.back() - ld[h]) / (lx.back() - lx[h]));
}

TEST_CASE("parseval and round trip on several states") {
  GridSpec g = GridSpec::centered(0.0, 64.0, 4096);
  for (const ApparatusWavefunction& s :
       {gaussian_state(1.0, 0.0, 0.0, g), gaussian_state(0.3, -2.0, 4.0, g), window_state(1.0, 2.0, g)}) {
    ApparatusWavefunction p = to_momentum(s);
    CHECK(std::abs(p.norm2() - s.norm2()) < 1e-10);
    CHECK(rt_error(to_position(p), s) < 1e-10);
    CHECK(edge_mass(gaussian_state(1.0, 0.0, 0.0, g)) < 1e-8);
  }
}

TEST_CASE("real states carry no momentum bias") {
  GridSpec g = GridSpec::centered(0.0, 64.0, 4096);
  ApparatusWavefunction a = gaussian_state(1.0, -3.0, 0.0, g), b = gaussian_state(0.5, 2.0, 0.0, g);
  ApparatusWavefunction s = a;
  for (int j = 0; j < g.n; ++j) s.samples[j] = 0.6 * a.samples[j] - 0.9 * b.samples[j];
  s = s.normalized();
  CHECK(std::abs(moments(to_momentum(s)).mean) < 1e-9);
}

TEST_CASE("shift theorem") {
  GridSpec g = GridSpec::centered(0.0, 64.0, 4096);
  ApparatusWavefunction s = gaussian_state(1.2, 0.4, 0.3, g);
  const double m0 = moments(to_momentum(s)).mean;
  for (double al : {-5.0, -0.7, 0.25, 3.0}) {
    ApparatusWavefunction t = s;
    for (int j = 0; j < g.n; ++j) t.samples[j] *= std::polar(1.0, al * g.x(j));
    CHECK(moments(to_momentum(t)).mean - m0 == doctest::Approx(al).epsilon(1e-10));
  }
}

TEST_CASE("quadrature profile") {
  GridSpec g = GridSpec::centered(0.0, 40.0, 4096);
  const double sx = 1.3;
  ApparatusWavefunction s = gaussian_state(sx, 0.5, 0.0, g);
  Quadrature q = quadrature_profile(s);
  int valid = 0;
  for (int j = 0; j < g.n; ++j) {
    if (!q.valid[j]) continue;
    ++valid;
    CHECK(q.q[j] == doctest::Approx(1 / (sx * sx)).epsilon(1e-6));
  }
  CHECK(valid > g.n / 4);
  // (1/4)<Q> = <p^2> for a real state
  std::vector<double> d = s.density();
  double mq = masked_average(q.q, d, q.valid);
  CHECK(0.25 * mq == doctest::Approx(moments(to_momentum(s)).variance).epsilon(1e-4));
}

TEST_CASE("overlap, distance, csv") {
  GridSpec g = GridSpec::centered(0.0, 40.0, 1024);
  ApparatusWavefunction s = gaussian_state(1.0, 0.0, 0.0, g);
  CHECK(std::abs(overlap(s, s) - 1.0) < 1e-12);
  ApparatusWavefunction t = s;
  for (cplx& v : t.samples) v *= std::polar(1.0, 0.8);
  CHECK(l2_distance(s, t) < 1e-12);
  std::ostringstream os;
  write_csv(os, s);
  std::string text = os.str();
  CHECK(text.rfind("#", 0) == 0);
  CHECK(text.find("position") != std::string::npos);
  CHECK(text.find("coordinate,re,im,density") != std::string::npos);
}
