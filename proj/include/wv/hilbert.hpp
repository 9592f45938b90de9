#pragma once
// Finite-dimensional state space: kets, Hermitian observables, spectral
// resolutions and e^{iAx}. Units with hbar = 1.
#include <complex>
#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "wv/errors.hpp"

namespace wv {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Normalized state vector. The constructor normalizes its argument.
class KetVector {
 public:
  KetVector() = default;
  explicit KetVector(const CVec& v);
  int dim() const { return static_cast<int>(amp_.size()); }
  const CVec& amplitudes() const { return amp_; }
  cplx operator[](int i) const { return amp_(i); }
  // <this|other>
  cplx inner(const KetVector& other) const;
  // global phase chosen so the largest-magnitude amplitude is real positive
  KetVector phase_fixed() const;

 private:
  CVec amp_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending, degeneracies merged
  std::vector<CMat> bases;          // orthonormal columns spanning each eigenspace
  int dim() const { return bases.empty() ? 0 : static_cast<int>(bases[0].rows()); }
  int size() const { return static_cast<int>(eigenvalues.size()); }
  CMat projector(int i) const { return bases[i] * bases[i].adjoint(); }
};

constexpr double kMergeTol = 1e-9;

SpectralDecomposition spectral(const CMat& m);

class HermitianObservable {
 public:
  HermitianObservable() = default;
  explicit HermitianObservable(const CMat& m);
  int dim() const { return static_cast<int>(m_.rows()); }
  const CMat& matrix() const { return m_; }
  const SpectralDecomposition& spectrum() const { return spec_; }
  double expectation(const KetVector& psi) const;
  double variance(const KetVector& psi) const;

 private:
  CMat m_;
  SpectralDecomposition spec_;
};

inline const SpectralDecomposition& spectral(const HermitianObservable& a) { return a.spectrum(); }

struct SpinTriple {
  HermitianObservable x, y, z;
};

// Basis order |j,j>, |j,j-1>, ..., |j,-j>.
SpinTriple spin_operators(double j);
// n.S for the unit vector at (polar, azimuth)
HermitianObservable spin_component(double j, double polar, double azimuth);
KetVector spin_coherent_state(double j, double polar, double azimuth);

// Fock basis truncated at n_max; A = number operator for the same dimension.
KetVector coherent_state(cplx lambda, int n_max);
int coherent_truncation(cplx lambda);
HermitianObservable number_operator(int n_max);

KetVector evolve(const HermitianObservable& a, double x, const KetVector& psi);

KetVector haar_random_state(int dim, std::uint64_t seed);
KetVector haar_random_state(int dim, std::mt19937_64& rng);

// random Hermitian matrix with i.i.d. complex Gaussian entries (GUE-like)
HermitianObservable random_observable(int dim, std::mt19937_64& rng);
// Haar-random orthonormal basis, returned as kets
std::vector<KetVector> random_basis(int dim, std::mt19937_64& rng);
std::vector<KetVector> eigenbasis(const HermitianObservable& a);

}  // namespace wv
