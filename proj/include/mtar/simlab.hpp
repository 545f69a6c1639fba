#ifndef MTAR_SIMLAB_HPP
#define MTAR_SIMLAB_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "mtar/forecast.hpp"
#include "mtar/gibbs.hpp"
#include "mtar/selection.hpp"

namespace mtar {

// Joint (X, Z) generator: stationary VAR(1) with Z as the last coordinate.
struct ExoVar1 {
  Eigen::MatrixXd coef;
  Eigen::MatrixXd noise_cov;
};

// Z-only generator: stationary AR(1) with unit Gaussian noise.
struct ExoAr1 {
  double intercept = 0.0;
  double slope = 0.0;
};

// Ground-truth data-generating model. spec.h_min..h_max is the candidate set
// handed to the fitters; the generating delay is `h`.
struct TrueModel {
  ModelSpec spec;
  std::vector<Eigen::MatrixXd> theta;
  std::vector<Eigen::MatrixXd> sigma;
  Thresholds c;
  int h = 0;
  int output_dim = 1;
  int covariate_dim = 0;
  std::variant<std::monostate, ExoVar1, ExoAr1> exogenous;
};

// Three-dimensional two-regime design with a jointly generated VAR(1)
// covariate/threshold process and threshold at the median of Z.
TrueModel make_m1();

// The same design restricted to first-order autoregression in both regimes
// (the order- and regime-count selection experiments use this truth).
TrueModel make_m1_first_order();

// Two-dimensional three-regime design with an AR(1) threshold process and
// thresholds at its 33% / 66% quantiles.
TrueModel make_m2();

// Simulates the exogenous processes and then the output recursion, drawing
// noise through the mixing representation. `burn` warm-up steps are
// discarded before the `length` recorded points.
MultivariateSeries simulate_mtar(const TrueModel& truth, int length,
                                 NoiseFamily family, const ExtraParam& extra,
                                 int burn, Rng& rng);

struct CoverageReport {
  int replications = 0;
  int failures = 0;
  int sample_length = 0;
  int horizon = 0;
  double level = 0.95;
  ChainControl control;

  // all coverages in percent
  std::vector<Eigen::MatrixXd> theta_coverage;
  std::vector<Eigen::MatrixXd> sigma_coverage;
  Eigen::VectorXd c_coverage;
  std::vector<double> extra_coverage;
  double delay_hit_rate = 0.0;
  Eigen::MatrixXd prediction_coverage;  // horizon x k

  Eigen::VectorXd threshold_bias;             // mean(c_hat - c_true)
  std::vector<double> extra_relative_bias;    // 100 * (nu_hat - nu) / nu
};

// Per replication: simulate, fit, summarize, forecast against the held-out
// tail; aggregate interval coverage, biases and the delay-mode hit rate.
// Failed replications are excluded and counted.
CoverageReport coverage_experiment(const TrueModel& truth, NoiseFamily family,
                                   const ExtraParam& extra, int sample_length,
                                   int replications,
                                   const ChainControl& control, double level,
                                   int horizon, std::uint64_t seed,
                                   int workers);

struct CandidateModel {
  ModelSpec spec;
  std::string label;
};

struct SelectionReport {
  int replications = 0;
  int failures = 0;
  int sample_length = 0;
  int true_index = 0;
  std::vector<std::string> labels;
  Eigen::VectorXd dic_pick_rate;    // fraction of replications won
  Eigen::VectorXd waic_pick_rate;
  double dic_true_rate = 0.0;       // true candidate ranked first
  double dic_second_rate = 0.0;     // true candidate ranked second
  double waic_true_rate = 0.0;
  double waic_second_rate = 0.0;
};

// Fits every candidate to each simulated series and tallies which one the
// criteria rank first (and where the true candidate lands).
SelectionReport selection_experiment(const TrueModel& truth,
                                     NoiseFamily family,
                                     const ExtraParam& extra,
                                     const std::vector<CandidateModel>& candidates,
                                     int true_index, int sample_length,
                                     int replications,
                                     const ChainControl& control,
                                     std::uint64_t seed, int workers);

}  // namespace mtar

#endif  // MTAR_SIMLAB_HPP
