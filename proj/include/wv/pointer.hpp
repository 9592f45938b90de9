#pragma once
// Meter wavefunctions on a uniform periodic grid.
// Fourier convention: phi(p) = (2 pi)^{-1/2} int dx e^{-ipx} phi(x).
#include <complex>
#include <iosfwd>
#include <vector>

#include "wv/errors.hpp"

namespace wv {

using cplx = std::complex<double>;

constexpr int kDefaultGridN = 4096;

struct GridSpec {
  double x_min = -1.0;
  double dx = 1.0 / 2048.0;
  int n = kDefaultGridN;

  GridSpec() = default;
  GridSpec(double x_min, double dx, int n);
  // n samples covering [center - span/2, center + span/2)
  static GridSpec centered(double center, double span, int n = kDefaultGridN);

  double x(int j) const { return x_min + j * dx; }
  double x_max() const { return x_min + (n - 1) * dx; }
  double dp() const;
  double p(int k) const { return (k - n / 2) * dp(); }
  double p_nyquist() const;
  std::vector<double> xs() const;
  std::vector<double> ps() const;
};

enum class Rep { position, momentum };

struct ApparatusWavefunction {
  GridSpec grid;
  std::vector<cplx> samples;
  Rep rep = Rep::position;

  double measure() const { return rep == Rep::position ? grid.dx : grid.dp(); }
  double coordinate(int i) const { return rep == Rep::position ? grid.x(i) : grid.p(i); }
  double norm2() const;
  std::vector<double> density() const;
  ApparatusWavefunction normalized() const;
};

ApparatusWavefunction to_momentum(const ApparatusWavefunction& psi);
ApparatusWavefunction to_position(const ApparatusWavefunction& psi);

ApparatusWavefunction gaussian_state(double sigma_x, double x0, double p0, const GridSpec& grid);
// grid of n samples spanning 16 sigma about x0
GridSpec gaussian_grid(double sigma_x, double x0, int n = kDefaultGridN);

struct WindowSnap {
  int j0 = 0;
  int count = 0;
  double center = 0.0;
  double eps = 0.0;  // effective half-width, count*dx/2
};
// window edges placed on half-sample boundaries
WindowSnap snap_window(double x_tilde, double epsilon, const GridSpec& grid);
ApparatusWavefunction window_state(double x_tilde, double epsilon, const GridSpec& grid);

// returned in the momentum representation
ApparatusWavefunction bump_state(double p0, const GridSpec& grid);

// largest probability within `samples` of either edge, both representations
double edge_mass(const ApparatusWavefunction& psi, int samples = 3);
void check_edges(const ApparatusWavefunction& psi, double tol = 1e-8);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  bool heavy_tail = false;
};
Moments moments(const ApparatusWavefunction& psi);
Moments moments(const std::vector<double>& coord, const std::vector<double>& density, double measure);

struct Quadrature {
  std::vector<double> q;
  std::vector<char> valid;
};
// samples with a neighbour below `floor` are masked
Quadrature quadrature_profile(const ApparatusWavefunction& psi, double floor = 1e-14);

// sum_j w_j f_j over valid entries, w normalized over the same entries
double masked_average(const std::vector<double>& f, const std::vector<double>& w,
                      const std::vector<char>& valid);

// <a|b> on the grid
cplx overlap(const ApparatusWavefunction& a, const ApparatusWavefunction& b);
// min over global phase of ||a - e^{i t} b||
double l2_distance(const ApparatusWavefunction& a, const ApparatusWavefunction& b);

void write_csv(std::ostream& os, const ApparatusWavefunction& psi);

}  // namespace wv
