#pragma once
// Classical Bayesian measurement for one degree of freedom: impulsive
// coupling x*A(q) at t_i, Dirichlet boundary data (q1, t1), (q2, t2).
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "wv/errors.hpp"

namespace wv {

enum class Potential { free, harmonic };
// kinetic: A = k^2 / 2m, a position kick q -= x k / m
enum class Coupling { none, linear, quadratic, kinetic };

struct Lagrangian1D {
  double m = 1.0;
  Potential potential = Potential::free;
  double omega = 0.0;
  Coupling coupling = Coupling::linear;
  double coeff = 1.0;  // a for linear, c for quadratic
  // every admitted combination has affine boundary maps
  bool closed_form() const { return m > 0 && (potential == Potential::free || omega > 0); }
  double measured(double q, double k) const;
};

struct BoundaryProblem {
  double q1 = 0.0, q2 = 0.0;
  double t1 = 0.0, ti = 0.5, t2 = 1.0;  // t1 <= ti <= t2
  double x = 0.0;
};

struct PhasePoint {
  double q = 0.0, k = 0.0;
};

// flow from t1 to t2 including the kick; also returns the state just before the kick
struct Flow {
  PhasePoint at_ti;
  PhasePoint final;
  double action = 0.0;
};
Flow propagate(const Lagrangian1D& L, PhasePoint start, double t1, double ti, double t2, double x);
// inverse flow from the final state back to t1
PhasePoint back_propagate(const Lagrangian1D& L, PhasePoint end, double t1, double ti, double t2, double x);

struct ExtremalResult {
  double S12 = 0.0;
  double alpha12 = 0.0;  // A along the extremal at t_i
  double vanvleck = 0.0; // |d^2 S / dq1 dq2|
  double k1 = 0.0, k2 = 0.0;
  double q_ti = 0.0;
};
ExtremalResult extremal_action(const Lagrangian1D& L, const BoundaryProblem& bp);

struct ClassicalPosterior {
  std::vector<double> x, prior_x, likelihood, posterior_x, alpha12;
  std::vector<double> p, posterior_p;
  double evidence = 0.0;  // int dP(x) vanvleck(x)
};
// prior_x is a density sampled on the uniform grid x; pointer prior is a density in p.
// Flat k prior bounded by |k1| <= k_max (likelihood zero outside).
ClassicalPosterior classical_posterior(const Lagrangian1D& L, const std::vector<double>& x,
                                       const std::vector<double>& prior_x,
                                       const std::function<double(double)>& prior_p,
                                       const std::vector<double>& p_grid, double q1, double q2, double t1,
                                       double ti, double t2, double k_max = 1e300);

struct McConfig {
  double q1 = 0.0, q2 = 1.0;
  double w1 = 0.05, w2 = 0.05;  // full window widths; w2 <= 0 accepts everything
  double t1 = 0.0, ti = 0.5, t2 = 1.0;
  double k_max = 3.0;
  long n_samples = 1000000;
  std::uint64_t seed = 1;
};

struct McSample {
  double x, p_final;
  PhasePoint initial, final;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<long> counts;
  long total = 0;
  std::vector<double> density() const;
  std::vector<double> stderr_density() const;
};
Histogram histogram(const std::vector<double>& values, double lo, double hi, int bins);
void write_histogram_csv(std::ostream& os, const Histogram& h);

struct McResult {
  std::vector<McSample> accepted;
  long proposals = 0;
  double acceptance = 0.0;
};
McResult monte_carlo_oracle(const Lagrangian1D& L, const std::function<double(std::mt19937_64&)>& sample_x,
                            const std::function<double(std::mt19937_64&)>& sample_p, const McConfig& cfg);

// per-bin binomial z-scores of the accepted-x histogram against a density on a fine grid
std::vector<double> bin_z_scores(const Histogram& h, const std::vector<double>& x,
                                 const std::vector<double>& density, double min_expected = 25.0);

// tau(x) and L(x) for a harmonic ground state whose kinetic energy is measured
// impulsively and then post-selected at position q
struct KineticOscillator {
  double m = 1.0, omega = 1.0, q = 3.0;
  double tau(double x) const;
  double likelihood(double x) const;  // unnormalized
  double action(double x) const;      // S(x) with S(0) = 0
  // classical counterparts with zero-length flights
  double tau_classical(double x) const { return m * q * q / (2.0 * x * x); }
  double vanvleck(double x) const { return m / std::abs(x); }
};

struct CorrespondencePoint {
  double parameter = 0.0;
  double dev_alpha = 0.0;
  double dev_likelihood = 0.0;
  double deviation = 0.0;  // max of the two
};
struct CorrespondenceReport {
  std::vector<CorrespondencePoint> points;
  bool monotone = false;
};
// sweep over omega on x in [x_lo, x_hi]; likelihoods normalized over the interval
CorrespondenceReport semiclassical_correspondence(const std::vector<double>& omegas, double m, double q,
                                                  double x_lo, double x_hi, int nx = 401);

// P(Z|Y) = sum_X P(Z|XY) P(X|Y); rows of p_z_given_xy indexed by X
std::vector<double> product_rule_marginal(const std::vector<std::vector<double>>& p_z_given_xy,
                                          const std::vector<double>& p_x_given_y);

}  // namespace wv
