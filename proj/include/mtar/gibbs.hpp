#ifndef MTAR_GIBBS_HPP
#define MTAR_GIBBS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mtar/model.hpp"

namespace mtar {

// Conjugate prior block. Per regime j: theta_j | Sigma_j is matrix normal
// with mean mu0_j and row covariance delta0_j, Sigma_j is inverse Wishart
// with scale omega0_j and dof tau0_j. The extra-parameter hyperpriors are
// interpreted per family: a uniform range (gamma0, eta0) for Student-t and
// hyperbolic, a Gamma(gamma0, eta0) for Slash, Beta(gamma01, eta01) and
// truncated Gamma(gamma02, eta02; (0,1)) for the contaminated normal.
struct Priors {
  std::vector<Eigen::MatrixXd> mu0;
  std::vector<Eigen::MatrixXd> delta0;
  std::vector<Eigen::MatrixXd> omega0;
  std::vector<double> tau0;

  double gamma0 = 2.0;
  double eta0 = 100.0;
  double gamma01 = 1.0;
  double eta01 = 1.0;
  double gamma02 = 1.0;
  double eta02 = 1.0;
  int grid_size = 1000;

  // Non-informative defaults: mu0 = 0, delta0 = 1e3 I, omega0 = I_k,
  // tau0 = k + 2, and the family's default extra-parameter hyperprior.
  static Priors noninformative(const ModelSpec& spec, int k, int r);

  void validate(const ModelSpec& spec, int k, int r) const;
};

// One Gibbs state. The latent scale u is indexed by time (entry t-1 for time
// point t); entries outside the eligible window stay at the neutral value 1.
struct ChainState {
  std::vector<Eigen::MatrixXd> theta;
  std::vector<Eigen::MatrixXd> sigma;
  Thresholds c;
  int h = 0;
  ExtraParam extra;
  Eigen::VectorXd u;
};

struct ChainControl {
  int iterations = 1500;
  int burn_in = 500;
  int thinning = 1;
  std::uint64_t seed = 0;
  double dirichlet_concentration = 100.0;  // zeta; 1 is the plain proposal
};

// Stored chain after burn-in and thinning, plus run metadata.
struct PosteriorDraws {
  std::vector<ChainState> states;
  ModelSpec spec;
  Priors priors;
  ChainControl control;
  double mh_acceptance = 0.0;  // threshold move acceptance rate

  int size() const { return static_cast<int>(states.size()); }
};

// Step 0: quantile-spaced thresholds, Gaussian MLE for theta/Sigma,
// near-Gaussian extra parameter, u = 1. Throws std::runtime_error when a
// starting regime has fewer than its minimum occupancy.
ChainState init_state(const MultivariateSeries& series, const ModelSpec& spec,
                      const Priors& priors, Rng& rng);

// Step 1: per-observation latent scale draws from the family's conditional.
void sample_latent_u(ChainState& state, const MultivariateSeries& series,
                     const ModelSpec& spec, Rng& rng);

// Step 2: matrix-normal regression draws per regime.
void sample_theta(ChainState& state, const std::vector<RegimeData>& regimes,
                  const ModelSpec& spec, const Priors& priors, Rng& rng);

// Step 3: inverse-Wishart scale draws per regime.
void sample_sigma(ChainState& state, const std::vector<RegimeData>& regimes,
                  const ModelSpec& spec, const Priors& priors, Rng& rng);

// Step 4: extra-parameter update (conjugate for Slash and contaminated
// normal, trapezoid-discretized grid for Student-t and hyperbolic).
void sample_extra(ChainState& state, const MultivariateSeries& series,
                  const ModelSpec& spec, const Priors& priors, Rng& rng);

// Step 5: Metropolis-Hastings threshold move through the Dirichlet
// gap-fraction proposal. Returns true if the proposal was accepted. Proposals
// leaving any regime under its minimum occupancy are rejected outright;
// min_occupancy_override < 0 keeps the default s_j + k + 1.
bool sample_thresholds(ChainState& state, const MultivariateSeries& series,
                       const ModelSpec& spec, double zeta, Rng& rng,
                       int min_occupancy_override = -1);

// Step 6: delay draw from its discrete full conditional.
void sample_delay(ChainState& state, const MultivariateSeries& series,
                  const ModelSpec& spec, Rng& rng);

// Full sampler: Steps 1-6 per sweep in that order, states stored after
// burn-in at the thinning stride. Deterministic given control.seed.
PosteriorDraws run_chain(const MultivariateSeries& series,
                         const ModelSpec& spec, const Priors& priors,
                         const ChainControl& control);

// Conditional-on-u log likelihood of the eligible window under (c, h): the
// product of Normal(y_t | M_t theta_j, kappa(u_t) Sigma_j) densities. Used by
// the threshold and delay steps and exposed for tests.
double augmented_loglik(const ChainState& state,
                        const MultivariateSeries& series,
                        const ModelSpec& spec, const Thresholds& c, int h);

}  // namespace mtar

#endif  // MTAR_GIBBS_HPP
