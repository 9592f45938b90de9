#pragma once
// Weak values, local weak-value profiles alpha(x), beta(x), S(x), L(x),
// error laws, pooling identities and the Omega operator.
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "wv/hilbert.hpp"
#include "wv/pointer.hpp"
#include "wv/transition.hpp"

namespace wv {

struct ComplexWeakValue {
  double alpha = 0.0;
  double beta = 0.0;
  cplx value() const { return {alpha, beta}; }
};

ComplexWeakValue weak_value(const KetVector& psi1, const HermitianObservable& a, const KetVector& psi2);

// Re of the weak values of (Sx, Sy, Sz)
Eigen::Vector3d weak_spin_vector(const KetVector& psi1, const KetVector& psi2, double j = 0.5);

struct LocalWeakValueProfile {
  GridSpec grid;
  std::vector<double> alpha, beta;
  std::vector<double> alpha_prime, beta_prime;
  std::vector<double> action_S;
  std::vector<double> likelihood_L;
  // +-|g(x)|, sign chosen so S stays continuous: g = sqrtP_signed * e^{iS}
  std::vector<double> sqrtP_signed;
  std::vector<char> valid;  // 0 at amplitude zeros
  double prob = 0.0;        // P(psi_mu | phi_i psi1)
};

LocalWeakValueProfile local_profile(const Transition& t, const ApparatusWavefunction& phi_i);
LocalWeakValueProfile local_profile(const KetVector& psi1, const HermitianObservable& a,
                                    const KetVector& psi_mu, const ApparatusWavefunction& phi_i);

struct Gradients {
  double alpha_prime = 0.0;
  double beta_prime = 0.0;
};
Gradients weak_value_gradients(const Transition& t, double x);
// local weak value W1(x) = <mu|A e^{iAx}|1>/<mu|e^{iAx}|1>
ComplexWeakValue local_weak_value(const Transition& t, double x);

// max imaginary residue of e^{-i p0 x} phi(x) after removing the global phase
struct RealStateFit {
  double p0 = 0.0;
  double residue = 0.0;
  bool real = false;
};
RealStateFit real_state_fit(const ApparatusWavefunction& phi);

struct ErrorLawMean {
  double value = 0.0;
  bool bias_warning = false;  // phi_i is not a real state up to e^{ip0x}
};
ErrorLawMean error_law_mean(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i);

struct ErrorLawVariance {
  double predicted = 0.0;
  double quadrature_term = 0.0;  // (1/4)<Q_i>
  double gradient_term = 0.0;    // (1/2)<beta'>
  double alpha_variance = 0.0;   // Var(alpha)
};
ErrorLawVariance error_law_variance(const LocalWeakValueProfile& prof, const ApparatusWavefunction& phi_i);

struct SamplingPoint {
  double x_mu = 0.0;          // posterior mode
  double x_first_order = 0.0; // x0 - 2 sigma^2 beta(x0)
  double beta_prime = 0.0;    // at x_mu
  std::optional<double> sigma_eff;
  int modes = 1;
};
// Gaussian prior of std sigma about x0; the posterior is L(x)|phi_i(x)|^2 on `grid`
SamplingPoint sampling_point(const Transition& t, double sigma, double x0, const GridSpec& grid,
                             bool allow_multimodal = false);

struct PooledReport {
  double expectation = 0.0;      // <psi1|A|psi1>
  double variance = 0.0;         // <psi1|dA^2|psi1>
  double alpha_bar = 0.0;
  double var_alpha_bar = 0.0;
  double var_beta_bar = 0.0;
  double varreim_deviation = 0.0;
  double mean_deviation = 0.0;
  // posterior-weighted decomposition; exact for real phi_i
  double breakvar_sum = 0.0;
  double breakvar_deviation = 0.0;
  std::vector<double> weights;   // |<psi_mu|psi1>|^2
};
PooledReport pooled_identities(const KetVector& psi1, const HermitianObservable& a,
                               const std::vector<KetVector>& post_basis,
                               const std::optional<ApparatusWavefunction>& phi_i = std::nullopt);

struct OmegaOperator {
  CMat matrix;
  cplx trace() const { return matrix.trace(); }
  double expect(const HermitianObservable& a) const { return (a.matrix() * matrix).trace().real(); }
  double trace_sq() const { return (matrix * matrix).trace().real(); }
};
OmegaOperator omega_operator(const KetVector& psi1, const KetVector& psi2);

void write_profile_csv(std::ostream& os, const LocalWeakValueProfile& prof);

// Overall distribution of weak values over Haar-random post-selections
struct OverallWeakValueDensity {
  double mean = 0.0;
  double delta_a = 0.0;
  double pdf(double alpha) const;
  double cdf(double alpha) const;
  // density in the (alpha, beta) plane
  double pdf2d(double alpha, double beta) const;
  // P(|alpha - mean| > a)
  double tail(double a) const;
};
OverallWeakValueDensity overall_weak_value_density(const KetVector& psi, const HermitianObservable& a);

struct OverallSamples {
  std::vector<cplx> values;
  long proposals = 0;
};
// rejection sampling: Haar psi_mu accepted with probability |<psi_mu|psi>|^2
OverallSamples sample_overall_weak_values(const KetVector& psi, const HermitianObservable& a, int n,
                                          std::mt19937_64& rng);
double ks_distance(std::vector<double> samples, const OverallWeakValueDensity& d);

}  // namespace wv
