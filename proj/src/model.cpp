#include "mtar/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mtar {

MultivariateSeries::MultivariateSeries(Eigen::MatrixXd y_in,
                                       Eigen::MatrixXd x_in,
                                       Eigen::VectorXd z_in)
    : y(std::move(y_in)), x(std::move(x_in)), z(std::move(z_in)) {
  if (y.cols() < 1 || y.rows() < 1) {
    throw std::invalid_argument("series: output matrix must be T x k, k >= 1");
  }
  if (x.rows() != 0 && x.rows() != y.rows()) {
    throw std::invalid_argument("series: covariate length differs from output");
  }
  if (x.rows() == 0) x.resize(y.rows(), 0);
  if (z.size() != y.rows()) {
    throw std::invalid_argument("series: threshold length differs from output");
  }
  if (!y.allFinite() || !x.allFinite() || !z.allFinite()) {
    throw std::invalid_argument("series: missing or non-finite values");
  }
}

int ModelSpec::design_width(int regime, int k, int r) const {
  return 1 + p[regime] * k + q[regime] * r + d[regime];
}

int ModelSpec::max_p() const { return *std::max_element(p.begin(), p.end()); }
int ModelSpec::max_q() const { return *std::max_element(q.begin(), q.end()); }
int ModelSpec::max_d() const { return *std::max_element(d.begin(), d.end()); }

std::vector<int> ModelSpec::delay_candidates() const {
  std::vector<int> out(h_max - h_min + 1);
  std::iota(out.begin(), out.end(), h_min);
  return out;
}

void ModelSpec::validate(int k, int r) const {
  if (regimes < 1) throw std::invalid_argument("spec: need at least 1 regime");
  const auto sz = static_cast<std::size_t>(regimes);
  if (p.size() != sz || q.size() != sz || d.size() != sz) {
    throw std::invalid_argument("spec: p, q, d must each have one entry per regime");
  }
  for (int j = 0; j < regimes; ++j) {
    if (p[j] < 0 || q[j] < 0 || d[j] < 0) {
      throw std::invalid_argument("spec: lags must be nonnegative");
    }
    if (q[j] > 0 && r == 0) {
      throw std::invalid_argument("spec: covariate lag set but series has no covariates");
    }
  }
  if (h_min < 0 || h_max < h_min) {
    throw std::invalid_argument("spec: delay candidates must satisfy 0 <= h_min <= h_max");
  }
  if (k < 1) throw std::invalid_argument("spec: k must be >= 1");
}

int regime_of(double z_lagged, const Thresholds& c) {
  // (c_{j-1}, c_j] intervals: half-open left, closed right
  int j = 0;
  while (j < c.size() && z_lagged > c[j]) ++j;
  return j;
}

int effective_start(const ModelSpec& spec) {
  int max_lag = std::max({spec.max_p(), spec.max_q(), spec.max_d(), spec.h_max});
  return max_lag + 1;
}

std::vector<std::vector<int>> assign_regimes(const MultivariateSeries& series,
                                             const Thresholds& c, int h,
                                             const ModelSpec& spec) {
  std::vector<std::vector<int>> sets(spec.regimes);
  const int start = effective_start(spec);
  for (int t = start; t <= series.length(); ++t) {
    const double z_lag = series.z[t - h - 1];
    sets[regime_of(z_lag, c)].push_back(t);
  }
  return sets;
}

Eigen::RowVectorXd design_row(const MultivariateSeries& series, int t,
                              const ModelSpec& spec, int regime) {
  const int k = series.output_dim();
  const int r = series.covariate_dim();
  Eigen::RowVectorXd row(spec.design_width(regime, k, r));
  int pos = 0;
  row[pos++] = 1.0;
  for (int i = 1; i <= spec.p[regime]; ++i) {
    row.segment(pos, k) = series.y.row(t - i - 1);
    pos += k;
  }
  for (int i = 1; i <= spec.q[regime]; ++i) {
    row.segment(pos, r) = series.x.row(t - i - 1);
    pos += r;
  }
  for (int i = 1; i <= spec.d[regime]; ++i) {
    row[pos++] = series.z[t - i - 1];
  }
  return row;
}

RegimeData build_design(const MultivariateSeries& series,
                        const std::vector<int>& time_points,
                        const ModelSpec& spec, int regime) {
  const int start = effective_start(spec);
  const int n = static_cast<int>(time_points.size());
  RegimeData reg;
  reg.time_points = time_points;
  reg.design.resize(n, spec.design_width(regime, series.output_dim(),
                                         series.covariate_dim()));
  reg.response.resize(n, series.output_dim());
  for (int i = 0; i < n; ++i) {
    const int t = time_points[i];
    if (t < start) {
      throw std::logic_error("build_design: time point precedes effective start");
    }
    reg.design.row(i) = design_row(series, t, spec, regime);
    reg.response.row(i) = series.y.row(t - 1);
  }
  return reg;
}

MleFit mle_init(const RegimeData& reg) {
  const Eigen::Index n = reg.design.rows();
  const Eigen::Index s = reg.design.cols();
  const Eigen::Index k = reg.response.cols();
  if (n < s) {
    throw std::invalid_argument("mle_init: fewer rows than design columns");
  }
  MleFit fit;
  Eigen::MatrixXd mtm = reg.design.transpose() * reg.design;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(mtm);
  Eigen::MatrixXd mty = reg.design.transpose() * reg.response;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      ldlt.vectorD().minCoeff() > 1e-10 * ldlt.vectorD().maxCoeff()) {
    fit.theta = ldlt.solve(mty);
  } else {
    const double ridge = 1e-8 * mtm.trace() / static_cast<double>(s) + 1e-12;
    mtm.diagonal().array() += ridge;
    fit.theta = mtm.ldlt().solve(mty);
    fit.ridge_fallback = true;
  }
  Eigen::MatrixXd resid = reg.response - reg.design * fit.theta;
  fit.sigma = resid.transpose() * resid / static_cast<double>(n);
  fit.sigma = 0.5 * (fit.sigma + fit.sigma.transpose());
  // Inflate a (near-)singular residual covariance to a usable PD start.
  Eigen::LLT<Eigen::MatrixXd> llt(fit.sigma);
  if (llt.info() != Eigen::Success ||
      fit.sigma.diagonal().minCoeff() <= 0.0) {
    double bump = 1e-6 * fit.sigma.diagonal().mean();
    if (!(bump > 0.0)) bump = 1e-6;
    fit.sigma.diagonal().array() += bump;
  }
  return fit;
}

int min_regime_occupancy(const ModelSpec& spec, int regime, int k, int r) {
  return spec.design_width(regime, k, r) + k + 1;
}

}  // namespace mtar
