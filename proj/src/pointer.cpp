#include "wv/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <unsupported/Eigen/FFT>

namespace wv {

namespace {
constexpr double kPi = std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_rep(const ApparatusWavefunction& psi, Rep r, const char* op) {
  if (psi.rep != r)
    throw RepresentationError(std::string(op) + ": wavefunction is in the wrong representation");
}
}  // namespace

GridSpec::GridSpec(double x_min_, double dx_, int n_) : x_min(x_min_), dx(dx_), n(n_) {
  if (!(dx > 0.0)) throw GridCoverageError("dx must be positive");
  if (n < 64 || !power_of_two(n)) throw GridCoverageError("n must be a power of two >= 64");
}

GridSpec GridSpec::centered(double center, double span, int n) {
  double dx = span / n;
  return GridSpec(center - 0.5 * n * dx, dx, n);
}

double GridSpec::dp() const { return 2.0 * kPi / (n * dx); }
double GridSpec::p_nyquist() const { return kPi / dx; }

std::vector<double> GridSpec::xs() const {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = x(j);
  return v;
}

std::vector<double> GridSpec::ps() const {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = p(k);
  return v;
}

double ApparatusWavefunction::norm2() const {
  double s = 0.0;
  for (const cplx& z : samples) s += std::norm(z);
  return s * measure();
}

std::vector<double> ApparatusWavefunction::density() const {
  std::vector<double> d(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) d[i] = std::norm(samples[i]);
  return d;
}

ApparatusWavefunction ApparatusWavefunction::normalized() const {
  double n = std::sqrt(norm2());
  if (!(n > 0.0)) throw GridCoverageError("wavefunction vanishes on the grid");
  ApparatusWavefunction out = *this;
  for (cplx& z : out.samples) z /= n;
  return out;
}

ApparatusWavefunction to_momentum(const ApparatusWavefunction& psi) {
  require_rep(psi, Rep::position, "to_momentum");
  const GridSpec& g = psi.grid;
  std::vector<cplx> in(g.n), out;
  for (int j = 0; j < g.n; ++j) in[j] = (j % 2 ? -1.0 : 1.0) * psi.samples[j];
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  const double c = g.dx / std::sqrt(2.0 * kPi);
  ApparatusWavefunction r{g, std::vector<cplx>(g.n), Rep::momentum};
  for (int k = 0; k < g.n; ++k) r.samples[k] = c * std::polar(1.0, -g.p(k) * g.x_min) * out[k];
  return r;
}

ApparatusWavefunction to_position(const ApparatusWavefunction& psi) {
  require_rep(psi, Rep::momentum, "to_position");
  const GridSpec& g = psi.grid;
  std::vector<cplx> in(g.n), out;
  for (int k = 0; k < g.n; ++k) in[k] = std::polar(1.0, g.p(k) * g.x_min) * psi.samples[k];
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, in);
  const double c = g.dp() / std::sqrt(2.0 * kPi);
  ApparatusWavefunction r{g, std::vector<cplx>(g.n), Rep::position};
  for (int j = 0; j < g.n; ++j) r.samples[j] = (j % 2 ? -c : c) * out[j];
  return r;
}

GridSpec gaussian_grid(double sigma_x, double x0, int n) {
  return GridSpec::centered(x0, 16.0 * sigma_x, n);
}

ApparatusWavefunction gaussian_state(double sigma_x, double x0, double p0, const GridSpec& grid) {
  if (!(sigma_x > 0.0)) throw GridCoverageError("sigma_x must be positive");
  const double tol = 1e-9 * std::max(1.0, std::abs(x0) + 8.0 * sigma_x);
  if (grid.x_min > x0 - 8.0 * sigma_x + tol || grid.x_max() + grid.dx < x0 + 8.0 * sigma_x - tol)
    throw GridCoverageError("grid does not span x0 +- 8 sigma_x");
  if (grid.p_nyquist() < std::abs(p0) + 4.0 / sigma_x)
    throw GridCoverageError("grid Nyquist momentum below |p0| + 8 sigma_p");
  ApparatusWavefunction psi{grid, std::vector<cplx>(grid.n), Rep::position};
  const double amp = std::pow(2.0 * kPi * sigma_x * sigma_x, -0.25);
  for (int j = 0; j < grid.n; ++j) {
    double x = grid.x(j), u = (x - x0) / (2.0 * sigma_x);
    psi.samples[j] = amp * std::exp(-u * u) * std::polar(1.0, p0 * x);
  }
  psi = psi.normalized();
  check_edges(psi);
  return psi;
}

WindowSnap snap_window(double x_tilde, double epsilon, const GridSpec& grid) {
  if (!(epsilon >= 4.0 * grid.dx)) throw ResolutionError("window half-width below 4 dx");
  WindowSnap w;
  w.count = std::max(1, static_cast<int>(std::lround(2.0 * epsilon / grid.dx)));
  w.j0 = static_cast<int>(std::lround((x_tilde - grid.x_min) / grid.dx - 0.5 * (w.count - 1)));
  if (w.j0 < 0 || w.j0 + w.count > grid.n) throw GridCoverageError("window extends beyond grid");
  w.center = grid.x(w.j0) + 0.5 * (w.count - 1) * grid.dx;
  w.eps = 0.5 * w.count * grid.dx;
  return w;
}

ApparatusWavefunction window_state(double x_tilde, double epsilon, const GridSpec& grid) {
  WindowSnap w = snap_window(x_tilde, epsilon, grid);
  ApparatusWavefunction psi{grid, std::vector<cplx>(grid.n, 0.0), Rep::position};
  const double h = 1.0 / std::sqrt(2.0 * w.eps);
  for (int j = w.j0; j < w.j0 + w.count; ++j) psi.samples[j] = h;
  return psi;
}

ApparatusWavefunction bump_state(double p0, const GridSpec& grid) {
  if (!(p0 > 0.0) || grid.p_nyquist() - 3.0 * grid.dp() <= p0)
    throw GridCoverageError("bump support exceeds grid Nyquist momentum");
  ApparatusWavefunction psi{grid, std::vector<cplx>(grid.n, 0.0), Rep::momentum};
  for (int k = 0; k < grid.n; ++k) {
    double p = grid.p(k);
    if (std::abs(p) < p0) psi.samples[k] = std::exp(-1.0 / (p0 * p0 - p * p));
  }
  psi = psi.normalized();
  check_edges(psi);
  return psi;
}

static double edge_mass_one(const ApparatusWavefunction& psi, int samples) {
  const int n = psi.grid.n;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    lo += std::norm(psi.samples[i]);
    hi += std::norm(psi.samples[n - 1 - i]);
  }
  return std::max(lo, hi) * psi.measure();
}

double edge_mass(const ApparatusWavefunction& psi, int samples) {
  ApparatusWavefunction other = psi.rep == Rep::position ? to_momentum(psi) : to_position(psi);
  return std::max(edge_mass_one(psi, samples), edge_mass_one(other, samples));
}

void check_edges(const ApparatusWavefunction& psi, double tol) {
  double m = edge_mass(psi);
  if (m >= tol) throw GridCoverageError("edge probability " + std::to_string(m) + " exceeds guard");
}

Moments moments(const std::vector<double>& coord, const std::vector<double>& density, double measure) {
  const size_t n = coord.size();
  double z = 0.0, m1 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    z += density[i];
    m1 += density[i] * coord[i];
  }
  Moments m;
  m.mean = m1 / z;
  double v = 0.0;
  for (size_t i = 0; i < n; ++i) v += density[i] * (coord[i] - m.mean) * (coord[i] - m.mean);
  m.variance = v / z;
  const size_t outer = std::max<size_t>(1, n / 40);
  double tail = 0.0;
  for (size_t i = 0; i < outer; ++i) tail += density[i] + density[n - 1 - i];
  m.heavy_tail = tail * measure > 1e-6 * z * measure;
  return m;
}

Moments moments(const ApparatusWavefunction& psi) {
  std::vector<double> c(psi.grid.n);
  for (int i = 0; i < psi.grid.n; ++i) c[i] = psi.coordinate(i);
  return moments(c, psi.density(), psi.measure());
}

Quadrature quadrature_profile(const ApparatusWavefunction& psi, double floor) {
  require_rep(psi, Rep::position, "quadrature_profile");
  const int n = psi.grid.n;
  std::vector<double> d = psi.density();
  Quadrature q{std::vector<double>(n, 0.0), std::vector<char>(n, 0)};
  const double h2 = psi.grid.dx * psi.grid.dx;
  for (int j = 1; j + 1 < n; ++j) {
    if (d[j - 1] < floor || d[j] < floor || d[j + 1] < floor) continue;
    q.q[j] = -(std::log(d[j + 1]) - 2.0 * std::log(d[j]) + std::log(d[j - 1])) / h2;
    q.valid[j] = 1;
  }
  return q;
}

double masked_average(const std::vector<double>& f, const std::vector<double>& w,
                      const std::vector<char>& valid) {
  double s = 0.0, z = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    if (!valid[i]) continue;
    s += w[i] * f[i];
    z += w[i];
  }
  return s / z;
}

cplx overlap(const ApparatusWavefunction& a, const ApparatusWavefunction& b) {
  if (a.rep != b.rep || a.grid.n != b.grid.n) throw RepresentationError("overlap of incompatible wavefunctions");
  cplx s = 0.0;
  for (int i = 0; i < a.grid.n; ++i) s += std::conj(a.samples[i]) * b.samples[i];
  return s * a.measure();
}

double l2_distance(const ApparatusWavefunction& a, const ApparatusWavefunction& b) {
  cplx o = overlap(b, a);
  cplx ph = std::abs(o) > 0 ? o / std::abs(o) : cplx(1.0);
  double s = 0.0;
  for (int i = 0; i < a.grid.n; ++i) s += std::norm(a.samples[i] - ph * b.samples[i]);
  return std::sqrt(s * a.measure());
}

void write_csv(std::ostream& os, const ApparatusWavefunction& psi) {
  const GridSpec& g = psi.grid;
  os.precision(17);
  os << "# rep=" << (psi.rep == Rep::position ? "position" : "momentum") << " x_min=" << g.x_min
     << " dx=" << g.dx << " n=" << g.n << " dp=" << g.dp()
     << " normalization=sum|psi|^2*d=1 fourier=(2pi)^-1/2*int(exp(-ipx))\n";
  os << "coordinate,re,im,density\n";
  for (int i = 0; i < g.n; ++i) {
    const cplx z = psi.samples[i];
    os << psi.coordinate(i) << ',' << z.real() << ',' << z.imag() << ',' << std::norm(z) << '\n';
  }
}

}  // namespace wv
