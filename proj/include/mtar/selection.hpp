#ifndef MTAR_SELECTION_HPP
#define MTAR_SELECTION_HPP

#include <Eigen/Dense>
#include <vector>

#include "mtar/gibbs.hpp"

namespace mtar {

// How the discrete delay enters the plug-in deviance: posterior mode (the
// default; a delay must index lags) or the rounded posterior mean.
enum class DelaySummary { Mode, MeanRounded };

struct CriterionResult {
  double value = 0.0;   // DIC or WAIC
  double plug_in = 0.0; // D-hat / W-hat
  double average = 0.0; // D-bar / W-bar
};

// Deviance information criterion: plug-in deviance at the posterior means
// (delay summarized per `delay`), average deviance over the stored states
// with per-iteration regime membership.
CriterionResult dic(const PosteriorDraws& draws,
                    const MultivariateSeries& series, const ModelSpec& spec,
                    DelaySummary delay = DelaySummary::Mode);

// Watanabe-Akaike criterion from the per-observation log predictive terms;
// inner averages in log-sum-exp form.
CriterionResult waic(const PosteriorDraws& draws,
                     const MultivariateSeries& series, const ModelSpec& spec);

// Elementwise equal-tailed interval bounds.
struct IntervalMatrix {
  Eigen::MatrixXd lower;
  Eigen::MatrixXd upper;
};

// Posterior summaries: means of the continuous parameters, mode of the delay
// (ties toward the smaller value), equal-tailed credible intervals, and the
// criteria/acceptance fields filled in by summarize_fit.
struct FitSummary {
  std::vector<Eigen::MatrixXd> theta_mean;
  std::vector<Eigen::MatrixXd> sigma_mean;
  Eigen::VectorXd c_mean;
  ExtraParam extra_mean;
  int h_mode = 0;

  std::vector<IntervalMatrix> theta_ci;
  std::vector<IntervalMatrix> sigma_ci;
  Eigen::VectorXd c_lower, c_upper;
  std::vector<double> extra_lower, extra_upper;
  double level = 0.95;

  CriterionResult dic;
  CriterionResult waic;
  double mh_acceptance = 0.0;
};

FitSummary posterior_summary(const PosteriorDraws& draws, double level);

// posterior_summary plus both criteria and the recorded acceptance rate.
FitSummary summarize_fit(const PosteriorDraws& draws,
                         const MultivariateSeries& series,
                         const ModelSpec& spec, double level,
                         DelaySummary delay = DelaySummary::Mode);

// Transformed residuals r_t = Phi^{-1}(F_rho(q_t | nu)) from the plug-in
// posterior-mean parameters; approximately standard normal under a correct
// model. Stored in time order with the matching plotting-position normal
// quantiles of the sorted values.
struct ResidualSeries {
  std::vector<int> time_points;
  Eigen::VectorXd r;
};

ResidualSeries residual_transform(const FitSummary& summary,
                                  const MultivariateSeries& series,
                                  const ModelSpec& spec);

}  // namespace mtar

#endif  // MTAR_SELECTION_HPP
