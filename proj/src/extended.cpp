#include "wv/extended.hpp"

#include <cmath>

namespace wv::ext {

Ket coherent_state(cplx lambda, int n_max) {
  if (n_max < coherent_truncation(lambda))
    throw TruncationError("n_max=" + std::to_string(n_max) + " below |l|^2+10|l|+10");
  Ket k;
  k.amp.resize(n_max + 1);
  real a = boost::multiprecision::sqrt(real(lambda.real()) * lambda.real() + real(lambda.imag()) * lambda.imag());
  complex u(1, 0);
  if (a > 0) u = complex(real(lambda.real()) / a, real(lambda.imag()) / a);
  real mag = boost::multiprecision::exp(-a * a / 2);
  complex ph(1, 0);
  real total = 0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      mag *= a / boost::multiprecision::sqrt(real(n));
      ph *= u;
    }
    k.amp[n] = ph * mag;
    total += mag * mag;
  }
  real s = boost::multiprecision::sqrt(total);
  for (auto& z : k.amp) z /= s;
  return k;
}

Ket from_double(const KetVector& psi) {
  Ket k;
  k.amp.reserve(psi.dim());
  for (int i = 0; i < psi.dim(); ++i) k.amp.emplace_back(real(psi[i].real()), real(psi[i].imag()));
  return k;
}

complex inner(const Ket& bra, const Ket& ket) {
  if (bra.dim() != ket.dim()) throw DimError("extended inner product: dimension mismatch");
  complex s(0, 0);
  for (int i = 0; i < bra.dim(); ++i) s += boost::multiprecision::conj(bra.amp[i]) * ket.amp[i];
  return s;
}

complex matrix_element(const Ket& bra, const HermitianObservable& a, const Ket& ket) {
  const int n = bra.dim();
  if (ket.dim() != n || a.dim() != n) throw DimError("extended matrix element: dimension mismatch");
  const CMat& m = a.matrix();
  complex s(0, 0);
  for (int i = 0; i < n; ++i) {
    complex row(0, 0);
    for (int j = 0; j < n; ++j) {
      if (m(i, j) == cplx(0.0)) continue;
      row += complex(real(m(i, j).real()), real(m(i, j).imag())) * ket.amp[j];
    }
    s += boost::multiprecision::conj(bra.amp[i]) * row;
  }
  return s;
}

cplx weak_value(const Ket& psi1, const HermitianObservable& a, const Ket& psi2) {
  complex den = inner(psi2, psi1);
  if (boost::multiprecision::abs(den) <= real(1e-14))
    throw OrthogonalPostSelection("<psi2|psi1> vanishes");
  return to_cplx(matrix_element(psi2, a, psi1) / den);
}

cplx diagonal_moment(const Ket& psi1, const std::vector<double>& diag, const Ket& psi2, double x,
                     int k) {
  if (psi1.dim() != psi2.dim() || static_cast<int>(diag.size()) != psi1.dim())
    throw DimError("diagonal_moment: dimension mismatch");
  complex s(0, 0);
  for (int i = 0; i < psi1.dim(); ++i) {
    real ax = real(diag[i]) * x;
    complex e(boost::multiprecision::cos(ax), boost::multiprecision::sin(ax));
    real ak = 1;
    for (int p = 0; p < k; ++p) ak *= diag[i];
    s += boost::multiprecision::conj(psi2.amp[i]) * psi1.amp[i] * e * ak;
  }
  return to_cplx(s);
}

}  // namespace wv::ext
