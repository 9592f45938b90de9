#pragma once
// Impulsive coupling e^{iAx}: relative states per post-selection outcome,
// conditional and unconditional pointer distributions, sum-rule audit.
#include <vector>

#include <nlohmann/json.hpp>

#include "wv/hilbert.hpp"
#include "wv/pointer.hpp"
#include "wv/transition.hpp"

namespace wv {

constexpr double kOrthogonalP = 1e-14;

struct MeasurementSetup {
  KetVector psi1;
  HermitianObservable A;
  std::vector<KetVector> post_basis;
  ApparatusWavefunction phi_i;  // position representation

  // dims, position rep; BasisError if the post basis is not orthonormal and complete
  void validate() const;
  Transition transition(int mu) const;
};

struct AmplitudeFunction {
  GridSpec grid;
  std::vector<cplx> g;
};

AmplitudeFunction amplitude_function(const KetVector& psi1, const HermitianObservable& a,
                                     const KetVector& psi_mu, const GridSpec& grid);
AmplitudeFunction amplitude_function(const Transition& t, const GridSpec& grid);

struct ConditionalEnsemble {
  int mu = 0;
  double transition_prob = 0.0;
  // the same probability through sum_{a,a'} c_a^* c_a' int |phi_i|^2 e^{i(a'-a)x};
  // equals transition_prob when no spectral terms are available
  double spectral_normalizer = 0.0;
  ApparatusWavefunction phi_f_rel;  // position rep
  ApparatusWavefunction phi_i_rel;  // sqrt(L) phi_i
};

ConditionalEnsemble condition(const Transition& t, const ApparatusWavefunction& phi_i, int mu = 0);
ConditionalEnsemble relative_final_state(const MeasurementSetup& s, int mu);

// normalized densities on the momentum grid
std::vector<double> momentum_density(const ApparatusWavefunction& psi_x);
std::vector<double> conditional_distribution(const MeasurementSetup& s, int mu);
std::vector<double> unconditional_distribution(const MeasurementSetup& s);
std::vector<double> unconditional_distribution(const KetVector& psi1, const HermitianObservable& a,
                                               const ApparatusWavefunction& phi_i);

struct SumRuleReport {
  double max_deviation = 0.0;
  std::vector<double> probabilities;
  double total_probability = 0.0;
};
SumRuleReport sum_rule_report(const MeasurementSetup& s);
double verify_sum_rule(const MeasurementSetup& s);

struct SpectralShift {
  cplx coeff;
  double shift;
};
std::vector<SpectralShift> spectral_shift_decomposition(const MeasurementSetup& s, int mu);
// momentum-rep sum_a c_a phi_i(p - a) / sqrt(P)
ApparatusWavefunction reassemble_shifts(const std::vector<SpectralShift>& terms,
                                        const ApparatusWavefunction& phi_i, double prob);

struct AblEntry {
  double a;
  double p;
};
std::vector<AblEntry> abl_probability(const KetVector& psi1, const HermitianObservable& a,
                                      const KetVector& psi2);

// phi_i(x) e^{i w x}, renormalized
ApparatusWavefunction aav_weak_state(const ApparatusWavefunction& phi_i, cplx w);

// shift of the momentum representation by a, via the x-space phase e^{iax};
// the result is in the momentum representation
ApparatusWavefunction momentum_shifted(const ApparatusWavefunction& phi_x, double a);

nlohmann::json branches_json(const MeasurementSetup& s);

}  // namespace wv
