#include "wv/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wv {

KetVector::KetVector(const CVec& v) {
  if (v.size() < 1) throw DimError("ket of dimension 0");
  double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DimError("ket with zero or non-finite norm");
  amp_ = v / n;
}

cplx KetVector::inner(const KetVector& other) const {
  if (other.dim() != dim()) throw DimError("inner product of kets with different dimensions");
  return amp_.dot(other.amp_);  // Eigen's dot conjugates the left operand
}

KetVector KetVector::phase_fixed() const {
  Eigen::Index k = 0;
  amp_.cwiseAbs().maxCoeff(&k);
  cplx ph = std::abs(amp_(k)) > 0 ? std::conj(amp_(k)) / std::abs(amp_(k)) : cplx(1.0);
  KetVector out;
  out.amp_ = amp_ * ph;
  out.amp_(k) = std::abs(amp_(k));
  return out;
}

static bool is_hermitian(const CMat& m) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

static bool is_diagonal(const CMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != cplx(0.0)) return false;
  return true;
}

SpectralDecomposition spectral(const CMat& m) {
  if (m.rows() < 1 || !is_hermitian(m)) throw NotHermitian("matrix is not Hermitian within 1e-12");
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd evals(n);
  CMat evecs(n, n);
  if (is_diagonal(m)) {
    // exact path for diagonal observables (number, L_z, S_z)
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return m(a, a).real() < m(b, b).real(); });
    evecs.setZero();
    for (int k = 0; k < n; ++k) {
      evals(k) = m(order[k], order[k]).real();
      evecs(order[k], k) = 1.0;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
  }
  SpectralDecomposition sd;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && evals(end) - evals(end - 1) < kMergeTol) ++end;
    double mean = 0.0;
    for (int k = start; k < end; ++k) mean += evals(k);
    sd.eigenvalues.push_back(mean / (end - start));
    sd.bases.push_back(evecs.middleCols(start, end - start));
    start = end;
  }
  return sd;
}

HermitianObservable::HermitianObservable(const CMat& m) : m_(m), spec_(spectral(m)) {
  // symmetrize away rounding noise below the tolerance
  m_ = 0.5 * (m + m.adjoint());
}

double HermitianObservable::expectation(const KetVector& psi) const {
  if (psi.dim() != dim()) throw DimError("observable/state dimension mismatch");
  return psi.amplitudes().dot(m_ * psi.amplitudes()).real();
}

double HermitianObservable::variance(const KetVector& psi) const {
  double mean = expectation(psi);
  CVec v = m_ * psi.amplitudes();
  return std::max(0.0, v.squaredNorm() - mean * mean);
}

static int spin_dim(double j) {
  double twoj = 2.0 * j;
  if (!(j >= 0.0) || std::abs(twoj - std::round(twoj)) > 1e-12)
    throw InvalidSpin("2j must be a non-negative integer, got j=" + std::to_string(j));
  return static_cast<int>(std::lround(twoj)) + 1;
}

SpinTriple spin_operators(double j) {
  const int d = spin_dim(j);
  CMat sp = CMat::Zero(d, d), sz = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    double m = j - k;
    sz(k, k) = m;
    if (k > 0) sp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  CMat sm = sp.adjoint();
  const cplx i(0.0, 1.0);
  return {HermitianObservable(0.5 * (sp + sm)), HermitianObservable((sp - sm) / (2.0 * i)),
          HermitianObservable(sz)};
}

HermitianObservable spin_component(double j, double polar, double azimuth) {
  SpinTriple s = spin_operators(j);
  CMat m = std::sin(polar) * std::cos(azimuth) * s.x.matrix() +
           std::sin(polar) * std::sin(azimuth) * s.y.matrix() + std::cos(polar) * s.z.matrix();
  return HermitianObservable(m);
}

static double ipow(double b, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

KetVector spin_coherent_state(double j, double polar, double azimuth) {
  const int d = spin_dim(j);
  const int twoj = d - 1;
  const double c = std::cos(0.5 * polar), s = std::sin(0.5 * polar);
  CVec v(d);
  for (int k = 0; k < d; ++k) {
    double m = j - k;
    double binom = std::exp(std::lgamma(twoj + 1.0) - std::lgamma(twoj - k + 1.0) - std::lgamma(k + 1.0));
    v(k) = std::sqrt(binom) * ipow(c, twoj - k) * ipow(s, k) * std::polar(1.0, -m * azimuth);
  }
  return KetVector(v).phase_fixed();
}

int coherent_truncation(cplx lambda) {
  double a = std::abs(lambda);
  return static_cast<int>(std::ceil(a * a + 10.0 * a + 10.0));
}

KetVector coherent_state(cplx lambda, int n_max) {
  if (n_max < coherent_truncation(lambda))
    throw TruncationError("n_max=" + std::to_string(n_max) + " below |l|^2+10|l|+10");
  const double a = std::abs(lambda), ph = std::arg(lambda);
  CVec v = CVec::Zero(n_max + 1);
  if (a == 0.0) {
    v(0) = 1.0;
    return KetVector(v);
  }
  const double la = std::log(a);
  for (int n = 0; n <= n_max; ++n) {
    double lm = -0.5 * a * a + n * la - 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(lm), n * ph);
  }
  // Poisson tail beyond n_max
  double tail = 0.0;
  for (int n = n_max + 1; n < n_max + 2000; ++n) {
    double t = std::exp(-a * a + 2.0 * n * la - std::lgamma(n + 1.0));
    tail += t;
    if (t < 1e-30 && n > a * a) break;
  }
  if (tail > 1e-10) throw TruncationError("truncation loss " + std::to_string(tail));
  return KetVector(v);
}

HermitianObservable number_operator(int n_max) {
  CMat m = CMat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) m(n, n) = static_cast<double>(n);
  return HermitianObservable(m);
}

KetVector evolve(const HermitianObservable& a, double x, const KetVector& psi) {
  if (a.dim() != psi.dim()) throw DimError("evolve: dimension mismatch");
  const SpectralDecomposition& sd = a.spectrum();
  CVec out = CVec::Zero(psi.dim());
  for (int k = 0; k < sd.size(); ++k) {
    const CMat& b = sd.bases[k];
    out += std::polar(1.0, sd.eigenvalues[k] * x) * (b * (b.adjoint() * psi.amplitudes()));
  }
  return KetVector(out);
}

static CMat gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      double re = nd(rng);
      double im = nd(rng);
      g(r, c) = cplx(re, im);
    }
  return g;
}

KetVector haar_random_state(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DimError("haar_random_state: dim < 1");
  CMat g = gaussian_matrix(dim, 1, rng);
  return KetVector(g.col(0)).phase_fixed();
}

KetVector haar_random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_random_state(dim, rng);
}

HermitianObservable random_observable(int dim, std::mt19937_64& rng) {
  CMat g = gaussian_matrix(dim, dim, rng) / std::sqrt(2.0);
  return HermitianObservable(0.5 * (g + g.adjoint()));
}

std::vector<KetVector> random_basis(int dim, std::mt19937_64& rng) {
  CMat g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  std::vector<KetVector> out;
  for (int k = 0; k < dim; ++k) {
    cplx d = r(k, k);
    cplx ph = std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
    out.emplace_back(q.col(k) * ph);
  }
  return out;
}

std::vector<KetVector> eigenbasis(const HermitianObservable& a) {
  std::vector<KetVector> out;
  for (const CMat& b : a.spectrum().bases)
    for (Eigen::Index c = 0; c < b.cols(); ++c) out.emplace_back(b.col(c));
  return out;
}

}  // namespace wv
