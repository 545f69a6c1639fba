#include "mtar/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtar/samplers.hpp"

namespace mtar {

ForecastResult forecast(const PosteriorDraws& draws,
                        const MultivariateSeries& history,
                        const ForecastInput& input, double level, Rng& rng) {
  const ModelSpec& spec = draws.spec;
  const int m = input.horizon;
  const int k = history.output_dim();
  const int r = history.covariate_dim();
  const int t_obs = history.length();
  if (m < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
  if (input.future_z.size() != m) {
    throw std::invalid_argument("forecast: future_z length must equal horizon");
  }
  if (input.future_x.rows() != m || input.future_x.cols() != r) {
    throw std::invalid_argument("forecast: future_x must be horizon x r");
  }
  if (draws.size() < 1) throw std::invalid_argument("forecast: empty chain");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("forecast: level must be in (0,1)");
  }
  if (effective_start(spec) > t_obs) {
    throw std::invalid_argument("forecast: history shorter than lag structure");
  }

  // Extended series: history plus the known future exogenous paths; the
  // output rows past T are filled per draw as the recursion advances.
  Eigen::MatrixXd y_ext(t_obs + m, k);
  y_ext.topRows(t_obs) = history.y;
  y_ext.bottomRows(m).setZero();
  Eigen::MatrixXd x_ext(t_obs + m, r);
  if (r > 0) {
    x_ext.topRows(t_obs) = history.x;
    x_ext.bottomRows(m) = input.future_x;
  }
  Eigen::VectorXd z_ext(t_obs + m);
  z_ext.head(t_obs) = history.z;
  z_ext.tail(m) = input.future_z;
  MultivariateSeries ext(y_ext, x_ext, z_ext);

  const int g_total = draws.size();
  ForecastResult out;
  out.level = level;
  out.draws.reserve(g_total);

  for (int g = 0; g < g_total; ++g) {
    const ChainState& s = draws.states[g];
    std::vector<Eigen::MatrixXd> chol;
    chol.reserve(s.sigma.size());
    for (const auto& sig : s.sigma) {
      Eigen::LLT<Eigen::MatrixXd> llt(sig);
      if (llt.info() != Eigen::Success) {
        throw std::runtime_error("forecast: stored sigma not PD");
      }
      chol.emplace_back(llt.matrixL());
    }
    Eigen::MatrixXd traj(m, k);
    for (int step = 1; step <= m; ++step) {
      const int t = t_obs + step;
      const int j = regime_of(ext.z[t - s.h - 1], s.c);
      Eigen::RowVectorXd row = design_row(ext, t, spec, j);
      Eigen::VectorXd mean = s.theta[j].transpose() * row.transpose();
      Eigen::VectorXd eps =
          sample_standard_mixture(spec.family, k, s.extra, rng);
      Eigen::VectorXd y_next = mean + chol[j] * eps;
      ext.y.row(t - 1) = y_next.transpose();
      traj.row(step - 1) = y_next.transpose();
    }
    out.draws.push_back(std::move(traj));
  }

  out.point.setZero(m, k);
  for (const auto& traj : out.draws) out.point += traj;
  out.point /= static_cast<double>(g_total);

  out.lower.resize(m, k);
  out.upper.resize(m, k);
  const double lo_p = 0.5 * (1.0 - level);
  const double hi_p = 1.0 - lo_p;
  std::vector<double> buf(g_total);
  auto quantile_at = [&](double p) {
    const double pos = p * (g_total - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * buf[lo] + w * buf[hi];
  };
  for (int step = 0; step < m; ++step) {
    for (int col = 0; col < k; ++col) {
      for (int g = 0; g < g_total; ++g) buf[g] = out.draws[g](step, col);
      std::sort(buf.begin(), buf.end());
      out.lower(step, col) = quantile_at(lo_p);
      out.upper(step, col) = quantile_at(hi_p);
    }
  }
  return out;
}

}  // namespace mtar
