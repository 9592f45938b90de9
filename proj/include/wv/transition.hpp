#pragma once
// Amplitude function of one transition psi1 -> psi_mu under e^{iAx}:
//   g(x) = <psi_mu|e^{iAx}|psi1>, plus the A and A^2 insertions
// needed for local weak values and their gradients.
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "wv/hilbert.hpp"

namespace wv {

struct AmplitudeTriple {
  cplx g;    // <mu|e^{iAx}|1>
  cplx ag;   // <mu|A e^{iAx}|1>
  cplx a2g;  // <mu|A^2 e^{iAx}|1>
  // magnitude scale of the terms summed into g; |g| < 1e-12 * scale counts as a zero
  double scale = 1.0;
};

class Transition {
 public:
  using Fn = std::function<AmplitudeTriple(double)>;

  Transition() = default;

  // g(x) = sum_a <mu|Pi(a)|1> e^{iax}
  static Transition spectral(const KetVector& psi1, const HermitianObservable& a,
                             const KetVector& psi_mu);
  static Transition from_terms(std::vector<double> eigenvalues, std::vector<cplx> coeffs);
  static Transition closed_form(Fn f);
  // n independent copies measured through the mean observable (1/n) sum_i A_i:
  // g_n(x) = g(x/n)^n
  static Transition mean_of_copies(const Transition& single, int n);

  AmplitudeTriple at(double x) const { return fn_(x); }
  cplx overlap() const { return fn_(0.0).g; }

  bool has_terms() const { return terms_ != nullptr; }
  const std::vector<double>& eigenvalues() const { return terms_->a; }
  const std::vector<cplx>& coefficients() const { return terms_->c; }

 private:
  struct Terms {
    std::vector<double> a;
    std::vector<cplx> c;
  };
  Fn fn_;
  std::shared_ptr<const Terms> terms_;
};

// <-l|N^k e^{iNx}|l> in closed form: g = exp(-|l|^2 - |l|^2 e^{ix}), W1 = -|l|^2 e^{ix}.
// The Fock sum cancels catastrophically for |l| >~ 2; this does not.
AmplitudeTriple coherent_pair_amplitude(double lambda_sq, double x);
Transition coherent_pair_transition(double lambda_sq);

// <mu|Pi(a)|1> for each merged eigenvalue
std::vector<cplx> spectral_coefficients(const KetVector& psi1, const HermitianObservable& a,
                                        const KetVector& psi_mu);

}  // namespace wv
