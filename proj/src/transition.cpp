#include "wv/transition.hpp"

#include <cmath>

namespace wv {

std::vector<cplx> spectral_coefficients(const KetVector& psi1, const HermitianObservable& a,
                                        const KetVector& psi_mu) {
  if (psi1.dim() != a.dim() || psi_mu.dim() != a.dim())
    throw DimError("transition: state and observable dimensions differ");
  const SpectralDecomposition& sd = a.spectrum();
  std::vector<cplx> c(sd.size());
  for (int k = 0; k < sd.size(); ++k) {
    const CMat& b = sd.bases[k];
    c[k] = (b.adjoint() * psi_mu.amplitudes()).dot(b.adjoint() * psi1.amplitudes());
  }
  return c;
}

Transition Transition::from_terms(std::vector<double> eigenvalues, std::vector<cplx> coeffs) {
  if (eigenvalues.size() != coeffs.size()) throw DimError("transition terms: size mismatch");
  Transition t;
  auto terms = std::make_shared<Terms>(Terms{std::move(eigenvalues), std::move(coeffs)});
  double scale = 0.0;
  for (const cplx& c : terms->c) scale += std::abs(c);
  t.terms_ = terms;
  t.fn_ = [terms, scale](double x) {
    AmplitudeTriple r{0.0, 0.0, 0.0, scale};
    for (size_t k = 0; k < terms->a.size(); ++k) {
      const double a = terms->a[k];
      const cplx v = terms->c[k] * std::polar(1.0, a * x);
      r.g += v;
      r.ag += a * v;
      r.a2g += a * a * v;
    }
    return r;
  };
  return t;
}

Transition Transition::spectral(const KetVector& psi1, const HermitianObservable& a,
                                const KetVector& psi_mu) {
  return from_terms(a.spectrum().eigenvalues, spectral_coefficients(psi1, a, psi_mu));
}

Transition Transition::closed_form(Fn f) {
  Transition t;
  t.fn_ = std::move(f);
  return t;
}

AmplitudeTriple coherent_pair_amplitude(double lambda_sq, double x) {
  const cplx w1 = -lambda_sq * std::polar(1.0, x);
  AmplitudeTriple r;
  r.g = std::exp(-lambda_sq + w1);
  r.ag = r.g * w1;
  r.a2g = r.g * (w1 + w1 * w1);
  r.scale = std::abs(r.g);  // no cancellation in the closed form
  return r;
}

Transition coherent_pair_transition(double lambda_sq) {
  return Transition::closed_form([lambda_sq](double x) { return coherent_pair_amplitude(lambda_sq, x); });
}

Transition Transition::mean_of_copies(const Transition& single, int n) {
  if (n < 1) throw DimError("mean_of_copies: n < 1");
  Transition t;
  Fn base = single.fn_;
  t.fn_ = [base, n](double x) {
    AmplitudeTriple s = base(x / n);
    const cplx w1 = s.ag / s.g, w2 = s.a2g / s.g;
    AmplitudeTriple r;
    r.g = std::pow(s.g, n);
    r.ag = r.g * w1;
    r.a2g = r.g * (w2 + (n - 1.0) * w1 * w1) / static_cast<double>(n);
    // zero only where the single-copy amplitude is
    r.scale = s.g != 0.0 && r.g != 0.0 ? std::abs(r.g) * s.scale / std::abs(s.g) : std::pow(s.scale, n);
    return r;
  };
  return t;
}

}  // namespace wv
