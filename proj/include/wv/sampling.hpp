#pragma once
// Superposition of weak measurements: chop a meter state into windows,
// shift each by its local weak value, reassemble.
#include <iosfwd>
#include <vector>

#include "wv/pointer.hpp"
#include "wv/transition.hpp"
#include "wv/weakvalues.hpp"

namespace wv {

struct WindowPartition {
  std::vector<double> centers;
  std::vector<double> half_widths;
  std::vector<double> weights;  // filled by chop
};

// contiguous windows of width `spacing` tiling the grid, one centred on `origin`
WindowPartition uniform_partition(const GridSpec& grid, double spacing, double origin = 0.0);

struct Piece {
  double weight = 0.0;
  WindowSnap snap;
  ApparatusWavefunction psi;  // normalized window of the input, zero if weight vanishes
};

std::vector<Piece> chop(const ApparatusWavefunction& phi, WindowPartition& partition);
// sum_n sqrt(P(n)) phi(x|n)
ApparatusWavefunction reassemble(const std::vector<Piece>& pieces, const GridSpec& grid);

struct ProfilePoint {
  double alpha = 0.0;
  double S = 0.0;
  bool valid = true;
};
// linear interpolation of alpha and S between grid samples
ProfilePoint profile_at(const LocalWeakValueProfile& prof, double x);

struct ShiftedPiece {
  ApparatusWavefunction psi;  // momentum representation
  double alpha = 0.0;
  double linearity = 0.0;     // |alpha'(x)| eps^2
  bool linearity_warning = false;
};
ShiftedPiece group_velocity_shift(const Piece& piece, const LocalWeakValueProfile& prof);

struct SuperpositionResult {
  ApparatusWavefunction approx;  // momentum rep
  ApparatusWavefunction exact;   // momentum rep
  double distance = 0.0;
  double norm = 0.0;             // squared norm of the approximation
  int warnings = 0;
  std::vector<double> centers, weights, alphas;
};
SuperpositionResult superpose_weak_measurements(const ApparatusWavefunction& phi_i, WindowPartition partition,
                                                const Transition& t);

void write_window_table(std::ostream& os, const SuperpositionResult& r);

// J_0..J_nmax(z) by downward recurrence, normalized by J0^2 + 2 sum J_m^2 = 1
std::vector<double> bessel_j_table(int nmax, double z);
double bessel_j(int n, double z);

struct BlochReport {
  double max_integer_error = 0.0;  // vs (-1)^p J_p(qk)
  double max_half_integer = 0.0;   // largest |integral| at half-integer p
  double min_integer_neighbor = 0.0;
  double sum_j2 = 0.0;             // sum_m J_m^2
  double sum_m2j2 = 0.0;           // sum_m m^2 J_m^2
};
// integer probes over one period; half-integer probes over two periods
BlochReport bloch_envelope_check(double qk, int pmax = -1);

}  // namespace wv
