#ifndef MTAR_FORECAST_HPP
#define MTAR_FORECAST_HPP

#include <Eigen/Dense>
#include <vector>

#include "mtar/gibbs.hpp"

namespace mtar {

// Known future paths of the exogenous processes over the forecast horizon.
struct ForecastInput {
  Eigen::VectorXd future_z;  // length m
  Eigen::MatrixXd future_x;  // m x r
  int horizon = 1;
};

// One simulated trajectory per stored posterior draw, so the draws form a
// size-G sample from the joint predictive distribution. Point forecasts are
// the per-step means, intervals the equal-tailed quantiles.
struct ForecastResult {
  std::vector<Eigen::MatrixXd> draws;  // G entries of m x k
  Eigen::MatrixXd point;               // m x k
  Eigen::MatrixXd lower;               // m x k
  Eigen::MatrixXd upper;               // m x k
  double level = 0.95;
};

ForecastResult forecast(const PosteriorDraws& draws,
                        const MultivariateSeries& history,
                        const ForecastInput& input, double level, Rng& rng);

}  // namespace mtar

#endif  // MTAR_FORECAST_HPP
