#pragma once
// 113-bit mantissa kets for overlaps that cancel catastrophically in double,
// e.g. <-l|l> = exp(-2|l|^2) as a sum of O(1) alternating terms.
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "wv/hilbert.hpp"

namespace wv::ext {

using real = boost::multiprecision::cpp_bin_float_quad;
using complex = boost::multiprecision::cpp_complex_quad;

struct Ket {
  std::vector<complex> amp;
  int dim() const { return static_cast<int>(amp.size()); }
};

Ket coherent_state(cplx lambda, int n_max);
Ket from_double(const KetVector& psi);
complex inner(const Ket& bra, const Ket& ket);
// <bra|A|ket> with the double matrix of A promoted entrywise
complex matrix_element(const Ket& bra, const HermitianObservable& a, const Ket& ket);
cplx weak_value(const Ket& psi1, const HermitianObservable& a, const Ket& psi2);

// sum_a a^k <psi2|Pi(a)|psi1> e^{iax} for a diagonal observable
cplx diagonal_moment(const Ket& psi1, const std::vector<double>& diag, const Ket& psi2, double x,
                     int k);

inline cplx to_cplx(const complex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace wv::ext
