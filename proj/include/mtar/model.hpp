#ifndef MTAR_MODEL_HPP
#define MTAR_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "mtar/families.hpp"

namespace mtar {

// Aligned output series Y (T x k), covariates X (T x r, r >= 0) and the
// univariate threshold series Z. Row i holds time point t = i + 1.
struct MultivariateSeries {
  Eigen::MatrixXd y;
  Eigen::MatrixXd x;
  Eigen::VectorXd z;

  MultivariateSeries() = default;
  MultivariateSeries(Eigen::MatrixXd y_in, Eigen::MatrixXd x_in,
                     Eigen::VectorXd z_in);

  int length() const { return static_cast<int>(y.rows()); }
  int output_dim() const { return static_cast<int>(y.cols()); }
  int covariate_dim() const { return static_cast<int>(x.cols()); }
};

// Structural parameters: l regimes with per-regime autoregressive order p_j,
// covariate lag q_j and threshold lag d_j, the candidate delays, and the
// noise family. l = 1 is the plain VAR reduction (no thresholds).
struct ModelSpec {
  int regimes = 1;
  std::vector<int> p;
  std::vector<int> q;
  std::vector<int> d;
  int h_min = 0;
  int h_max = 0;
  NoiseFamily family = NoiseFamily::Gaussian;

  // s_j = 1 + p_j k + q_j r + d_j
  int design_width(int regime, int k, int r) const;
  int max_p() const;
  int max_q() const;
  int max_d() const;
  std::vector<int> delay_candidates() const;
  void validate(int k, int r) const;
};

// Strictly increasing threshold values c_1 < ... < c_{l-1}; with c_0 = -inf
// and c_l = +inf they cut the threshold range into l regimes.
using Thresholds = Eigen::VectorXd;

// Regime j owns the time points t with Z_{t-h} in (c_{j-1}, c_j].
int regime_of(double z_lagged, const Thresholds& c);

// Smallest usable one-based time point: all lags of every regime and
// every delay candidate must be available, so the likelihood window is
// identical across delays.
int effective_start(const ModelSpec& spec);

// Partition of {effective_start, ..., T} induced by (c, h); empty regimes are
// legal here and rejected by the callers that cannot handle them.
std::vector<std::vector<int>> assign_regimes(const MultivariateSeries& series,
                                             const Thresholds& c, int h,
                                             const ModelSpec& spec);

// Stacked per-regime design and response. Design rows follow the layout
// [1, y_{t-1}', ..., y_{t-p_j}', x_{t-1}', ..., x_{t-q_j}', z_{t-1}, ...,
// z_{t-d_j}]; response rows are y_t'.
struct RegimeData {
  Eigen::MatrixXd design;
  Eigen::MatrixXd response;
  std::vector<int> time_points;
};

RegimeData build_design(const MultivariateSeries& series,
                        const std::vector<int>& time_points,
                        const ModelSpec& spec, int regime);

// One design row for a single time point (one-based t).
Eigen::RowVectorXd design_row(const MultivariateSeries& series, int t,
                              const ModelSpec& spec, int regime);

// Gaussian maximum-likelihood fit of the per-regime linear model:
// theta = (M'M)^{-1} M'Y, sigma = (1/n)(Y - M theta)'(Y - M theta).
struct MleFit {
  Eigen::MatrixXd theta;
  Eigen::MatrixXd sigma;
  bool ridge_fallback = false;  // set when the design was rank deficient
};

MleFit mle_init(const RegimeData& reg);

// Minimum usable occupancy for regime j: enough rows for the conjugate
// updates to stay proper.
int min_regime_occupancy(const ModelSpec& spec, int regime, int k, int r);

}  // namespace mtar

#endif  // MTAR_MODEL_HPP
