#include "mtar/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mtar/special.hpp"

namespace mtar {

namespace {

struct PlugInParams {
  std::vector<Eigen::MatrixXd> theta;
  std::vector<Eigen::MatrixXd> sigma;
  Thresholds c;
  ExtraParam extra;
  int h = 0;
};

int delay_mode(const PosteriorDraws& draws) {
  std::map<int, int> counts;
  for (const auto& s : draws.states) counts[s.h] += 1;
  int best = draws.states.front().h, best_count = -1;
  for (const auto& [h, n] : counts) {
    if (n > best_count) {  // map iterates ascending: ties go to the smaller h
      best = h;
      best_count = n;
    }
  }
  return best;
}

PlugInParams plug_in_means(const PosteriorDraws& draws, DelaySummary delay) {
  const int g_total = draws.size();
  if (g_total < 1) throw std::invalid_argument("need at least one stored state");
  PlugInParams out;
  const ChainState& first = draws.states.front();
  for (const auto& th : first.theta) out.theta.push_back(Eigen::MatrixXd::Zero(th.rows(), th.cols()));
  for (const auto& sg : first.sigma) out.sigma.push_back(Eigen::MatrixXd::Zero(sg.rows(), sg.cols()));
  out.c = Eigen::VectorXd::Zero(first.c.size());
  out.extra.values.assign(first.extra.values.size(), 0.0);
  double h_sum = 0.0;
  for (const auto& s : draws.states) {
    for (std::size_t j = 0; j < out.theta.size(); ++j) {
      out.theta[j] += s.theta[j];
      out.sigma[j] += s.sigma[j];
    }
    out.c += s.c;
    for (std::size_t i = 0; i < out.extra.values.size(); ++i) {
      out.extra.values[i] += s.extra.values[i];
    }
    h_sum += s.h;
  }
  const double inv_g = 1.0 / g_total;
  for (std::size_t j = 0; j < out.theta.size(); ++j) {
    out.theta[j] *= inv_g;
    out.sigma[j] *= inv_g;
  }
  out.c *= inv_g;
  for (double& v : out.extra.values) v *= inv_g;
  out.h = delay == DelaySummary::Mode
              ? delay_mode(draws)
              : static_cast<int>(std::lround(h_sum * inv_g));
  return out;
}

struct DensityContext {
  std::vector<Eigen::MatrixXd> chol;
  std::vector<double> log_det;
};

DensityContext density_context(const std::vector<Eigen::MatrixXd>& sigma) {
  DensityContext ctx;
  for (const auto& s : sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("criterion: sigma not positive definite");
    }
    Eigen::MatrixXd l = llt.matrixL();
    double ld = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) ld += 2.0 * std::log(l(i, i));
    ctx.chol.push_back(std::move(l));
    ctx.log_det.push_back(ld);
  }
  return ctx;
}

// Marginal (mixture) log density of observation t under regime membership
// induced by (c, h).
double observation_log_density(const MultivariateSeries& series,
                               const ModelSpec& spec, int t,
                               const std::vector<Eigen::MatrixXd>& theta,
                               const DensityContext& ctx, const Thresholds& c,
                               int h, const ExtraParam& extra) {
  const int j = regime_of(series.z[t - h - 1], c);
  Eigen::RowVectorXd row = design_row(series, t, spec, j);
  Eigen::VectorXd resid =
      series.y.row(t - 1).transpose() - theta[j].transpose() * row.transpose();
  const double q =
      ctx.chol[j].triangularView<Eigen::Lower>().solve(resid).squaredNorm();
  return mixture_log_density_q(spec.family, q, series.output_dim(),
                               ctx.log_det[j], extra);
}

}  // namespace

CriterionResult dic(const PosteriorDraws& draws,
                    const MultivariateSeries& series, const ModelSpec& spec,
                    DelaySummary delay) {
  const int start = effective_start(spec);
  const int t_max = series.length();

  const PlugInParams plug = plug_in_means(draws, delay);
  const DensityContext plug_ctx = density_context(plug.sigma);
  double d_hat = 0.0;
  for (int t = start; t <= t_max; ++t) {
    d_hat += -2.0 * observation_log_density(series, spec, t, plug.theta,
                                            plug_ctx, plug.c, plug.h,
                                            plug.extra);
  }

  double d_bar = 0.0;
  for (const auto& s : draws.states) {
    const DensityContext ctx = density_context(s.sigma);
    double dev = 0.0;
    for (int t = start; t <= t_max; ++t) {
      dev += -2.0 * observation_log_density(series, spec, t, s.theta, ctx, s.c,
                                            s.h, s.extra);
    }
    d_bar += dev;
  }
  d_bar /= draws.size();

  CriterionResult out;
  out.plug_in = d_hat;
  out.average = d_bar;
  out.value = d_hat + 2.0 * (d_bar - d_hat);
  return out;
}

CriterionResult waic(const PosteriorDraws& draws,
                     const MultivariateSeries& series, const ModelSpec& spec) {
  const int start = effective_start(spec);
  const int t_max = series.length();
  const int n = t_max - start + 1;
  const int g_total = draws.size();

  // lp(t, g) built draw-major so each state's Cholesky work happens once
  Eigen::MatrixXd lp(n, g_total);
  for (int g = 0; g < g_total; ++g) {
    const ChainState& s = draws.states[g];
    const DensityContext ctx = density_context(s.sigma);
    for (int t = start; t <= t_max; ++t) {
      lp(t - start, g) = observation_log_density(series, spec, t, s.theta, ctx,
                                                 s.c, s.h, s.extra);
    }
  }

  const double log_g = std::log(static_cast<double>(g_total));
  double w_hat = 0.0, w_bar = 0.0;
  std::vector<double> row(g_total);
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < g_total; ++g) row[g] = lp(i, g);
    w_hat += -2.0 * (log_sum_exp(row) - log_g);
    double mean_neg2 = 0.0;
    for (int g = 0; g < g_total; ++g) mean_neg2 += -2.0 * row[g];
    w_bar += mean_neg2 / g_total;
  }

  CriterionResult out;
  out.plug_in = w_hat;
  out.average = w_bar;
  out.value = w_hat + 2.0 * (w_bar - w_hat);
  return out;
}

FitSummary posterior_summary(const PosteriorDraws& draws, double level) {
  if (draws.size() < 1) {
    throw std::invalid_argument("posterior_summary: empty chain");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("posterior_summary: level must be in (0,1)");
  }
  FitSummary out;
  out.level = level;
  const PlugInParams plug = plug_in_means(draws, DelaySummary::Mode);
  out.theta_mean = plug.theta;
  out.sigma_mean = plug.sigma;
  out.c_mean = plug.c;
  out.extra_mean = plug.extra;
  out.h_mode = plug.h;
  out.mh_acceptance = 0.0;

  const int g_total = draws.size();
  const double lo_p = 0.5 * (1.0 - level);
  const double hi_p = 1.0 - lo_p;
  std::vector<double> buf(g_total);
  auto quantile_pair = [&](auto getter) {
    for (int g = 0; g < g_total; ++g) buf[g] = getter(draws.states[g]);
    std::sort(buf.begin(), buf.end());
    auto at = [&](double p) {
      const double pos = p * (g_total - 1.0);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const auto hi = static_cast<std::size_t>(std::ceil(pos));
      const double w = pos - static_cast<double>(lo);
      return (1.0 - w) * buf[lo] + w * buf[hi];
    };
    return std::pair<double, double>(at(lo_p), at(hi_p));
  };

  const ChainState& first = draws.states.front();
  for (std::size_t j = 0; j < first.theta.size(); ++j) {
    IntervalMatrix th{Eigen::MatrixXd(first.theta[j].rows(), first.theta[j].cols()),
                      Eigen::MatrixXd(first.theta[j].rows(), first.theta[j].cols())};
    for (Eigen::Index a = 0; a < th.lower.rows(); ++a) {
      for (Eigen::Index b = 0; b < th.lower.cols(); ++b) {
        auto [lo, hi] = quantile_pair(
            [&](const ChainState& s) { return s.theta[j](a, b); });
        th.lower(a, b) = lo;
        th.upper(a, b) = hi;
      }
    }
    out.theta_ci.push_back(std::move(th));

    IntervalMatrix sg{Eigen::MatrixXd(first.sigma[j].rows(), first.sigma[j].cols()),
                      Eigen::MatrixXd(first.sigma[j].rows(), first.sigma[j].cols())};
    for (Eigen::Index a = 0; a < sg.lower.rows(); ++a) {
      for (Eigen::Index b = 0; b < sg.lower.cols(); ++b) {
        auto [lo, hi] = quantile_pair(
            [&](const ChainState& s) { return s.sigma[j](a, b); });
        sg.lower(a, b) = lo;
        sg.upper(a, b) = hi;
      }
    }
    out.sigma_ci.push_back(std::move(sg));
  }

  out.c_lower.resize(first.c.size());
  out.c_upper.resize(first.c.size());
  for (Eigen::Index i = 0; i < first.c.size(); ++i) {
    auto [lo, hi] = quantile_pair([&](const ChainState& s) { return s.c[i]; });
    out.c_lower[i] = lo;
    out.c_upper[i] = hi;
  }
  for (std::size_t i = 0; i < first.extra.values.size(); ++i) {
    auto [lo, hi] =
        quantile_pair([&](const ChainState& s) { return s.extra.values[i]; });
    out.extra_lower.push_back(lo);
    out.extra_upper.push_back(hi);
  }
  return out;
}

FitSummary summarize_fit(const PosteriorDraws& draws,
                         const MultivariateSeries& series,
                         const ModelSpec& spec, double level,
                         DelaySummary delay) {
  FitSummary out = posterior_summary(draws, level);
  out.dic = dic(draws, series, spec, delay);
  out.waic = waic(draws, series, spec);
  out.mh_acceptance = draws.mh_acceptance;
  return out;
}

ResidualSeries residual_transform(const FitSummary& summary,
                                  const MultivariateSeries& series,
                                  const ModelSpec& spec) {
  const DensityContext ctx = density_context(summary.sigma_mean);
  const int start = effective_start(spec);
  const int k = series.output_dim();
  ResidualSeries out;
  const int n = series.length() - start + 1;
  out.r.resize(n);
  out.time_points.reserve(n);
  for (int t = start; t <= series.length(); ++t) {
    const int j = regime_of(series.z[t - summary.h_mode - 1], summary.c_mean);
    Eigen::RowVectorXd row = design_row(series, t, spec, j);
    Eigen::VectorXd resid = series.y.row(t - 1).transpose() -
                            summary.theta_mean[j].transpose() * row.transpose();
    const double q =
        ctx.chol[j].triangularView<Eigen::Lower>().solve(resid).squaredNorm();
    double p = quadform_cdf(spec.family, q, k, summary.extra_mean);
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    out.r[t - start] = normal_quantile(p);
    out.time_points.push_back(t);
  }
  return out;
}

}  // namespace mtar
