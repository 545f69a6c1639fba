#include "mtar/simlab.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "mtar/parallel.hpp"
#include "mtar/samplers.hpp"

namespace mtar {

namespace {

constexpr int kDefaultBurn = 200;

Eigen::MatrixXd stack_theta(const std::vector<Eigen::MatrixXd>& blocks) {
  // blocks hold [phi0', phi1', ..., beta1', ..., delta...] row groups
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Eigen::MatrixXd out(rows, blocks.front().cols());
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

int generation_start(const TrueModel& truth) {
  return std::max({truth.spec.max_p(), truth.spec.max_q(), truth.spec.max_d(),
                   truth.h}) +
         1;
}

}  // namespace

TrueModel make_m1() {
  TrueModel m;
  m.output_dim = 3;
  m.covariate_dim = 2;
  m.spec.regimes = 2;
  m.spec.p = {1, 2};
  m.spec.q = {1, 0};
  m.spec.d = {0, 0};
  m.spec.h_min = 0;
  m.spec.h_max = 3;
  m.h = 0;
  m.c = Thresholds::Constant(1, 0.0);

  Eigen::Matrix3d phi1_r1;
  phi1_r1 << 0.1, 0.6, 0.4,
            -0.4, 0.5, -0.7,
             0.2, 0.6, -0.3;
  Eigen::MatrixXd beta1_r1(3, 2);
  beta1_r1 << 0.6, -0.5,
             -0.4, 0.6,
              0.1, 0.3;
  Eigen::RowVector3d phi0_r1(1.0, -2.0, 6.0);
  m.theta.push_back(stack_theta({phi0_r1,
                                 Eigen::MatrixXd(phi1_r1.transpose()),
                                 Eigen::MatrixXd(beta1_r1.transpose())}));
  m.sigma.push_back(Eigen::Matrix3d::Identity());

  Eigen::Matrix3d phi1_r2;
  phi1_r2 << 0.3, 0.5, -0.5,
             0.2, 0.7, -0.1,
             0.3, -0.4, 0.6;
  Eigen::Matrix3d phi2_r2;
  phi2_r2 << 0.3, 0.0, 0.0,
             0.0, -0.6, 0.0,
             0.0, 0.0, 0.5;
  Eigen::RowVector3d phi0_r2(0.0, 0.0, 0.0);
  m.theta.push_back(stack_theta({phi0_r2,
                                 Eigen::MatrixXd(phi1_r2.transpose()),
                                 Eigen::MatrixXd(phi2_r2.transpose())}));
  m.sigma.push_back(Eigen::Vector3d(1.5, 1.0, 2.0).asDiagonal());

  ExoVar1 exo;
  exo.coef.resize(3, 3);
  exo.coef << 0.24, 0.48, -0.12,
              0.46, -0.36, 0.10,
             -0.12, -0.47, 0.58;
  exo.noise_cov = 2.0 * Eigen::Matrix3d::Identity();
  m.exogenous = exo;
  return m;
}

TrueModel make_m1_first_order() {
  TrueModel m = make_m1();
  m.spec.p = {1, 1};
  // regime 2 keeps the intercept and first-lag rows only
  m.theta[1] = m.theta[1].topRows(1 + m.output_dim).eval();
  return m;
}

TrueModel make_m2() {
  TrueModel m;
  m.output_dim = 2;
  m.covariate_dim = 0;
  m.spec.regimes = 3;
  m.spec.p = {1, 1, 1};
  m.spec.q = {0, 0, 0};
  m.spec.d = {0, 0, 0};
  m.spec.h_min = 0;
  m.spec.h_max = 3;
  m.h = 1;
  m.c = Thresholds(2);
  m.c << 1.95, 3.02;

  Eigen::Matrix2d phi1_r1;
  phi1_r1 << 0.8, 0.0,
            -0.2, 0.5;
  m.theta.push_back(stack_theta({Eigen::RowVector2d(2.0, 1.0),
                                 Eigen::MatrixXd(phi1_r1.transpose())}));
  m.sigma.push_back(Eigen::Vector2d(1.0, 4.0).asDiagonal());

  Eigen::Matrix2d phi1_r2;
  phi1_r2 << 0.3, 0.0,
             0.0, -0.6;
  m.theta.push_back(stack_theta({Eigen::RowVector2d(0.4, -0.2),
                                 Eigen::MatrixXd(phi1_r2.transpose())}));
  m.sigma.push_back(Eigen::Matrix2d::Identity());

  Eigen::Matrix2d phi1_r3;
  phi1_r3 << 0.6, 0.0,
            -0.2, 0.8;
  m.theta.push_back(stack_theta({Eigen::RowVector2d(-3.0, 0.0),
                                 Eigen::MatrixXd(phi1_r3.transpose())}));
  m.sigma.push_back(Eigen::Vector2d(2.0, 1.0).asDiagonal());

  m.exogenous = ExoAr1{1.0, 0.6};
  return m;
}

MultivariateSeries simulate_mtar(const TrueModel& truth, int length,
                                 NoiseFamily family, const ExtraParam& extra,
                                 int burn, Rng& rng) {
  validate_extra(family, extra);
  if (burn < 0) burn = kDefaultBurn;
  const int start = generation_start(truth);
  if (length < start + 10) {
    throw std::invalid_argument("simulate_mtar: length too short for the design");
  }
  const int total = burn + length;
  const int k = truth.output_dim;
  const int r = truth.covariate_dim;

  // Exogenous paths first; recursions start at their stationary means.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, r);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  if (const auto* var1 = std::get_if<ExoVar1>(&truth.exogenous)) {
    const Eigen::Index dim = var1->coef.rows();
    const Eigen::MatrixXd noise_chol =
        Eigen::LLT<Eigen::MatrixXd>(var1->noise_cov).matrixL();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);  // zero-mean design
    for (int t = 0; t < total; ++t) {
      w = var1->coef * w + noise_chol * sample_std_normal(static_cast<int>(dim), rng);
      x.row(t) = w.head(r).transpose();
      z[t] = w[dim - 1];
    }
  } else if (const auto* ar1 = std::get_if<ExoAr1>(&truth.exogenous)) {
    double zt = ar1->intercept / (1.0 - ar1->slope);
    for (int t = 0; t < total; ++t) {
      zt = ar1->intercept + ar1->slope * zt + rng.normal();
      z[t] = zt;
    }
  }

  MultivariateSeries series(Eigen::MatrixXd::Zero(total, k), x, z);
  std::vector<Eigen::MatrixXd> sigma_chol;
  for (const auto& s : truth.sigma) {
    sigma_chol.emplace_back(Eigen::LLT<Eigen::MatrixXd>(s).matrixL());
  }
  for (int t = start; t <= total; ++t) {
    const int j = regime_of(series.z[t - truth.h - 1], truth.c);
    Eigen::RowVectorXd row = design_row(series, t, truth.spec, j);
    Eigen::VectorXd mean = truth.theta[j].transpose() * row.transpose();
    Eigen::VectorXd eps = sample_standard_mixture(family, k, extra, rng);
    series.y.row(t - 1) = (mean + sigma_chol[j] * eps).transpose();
  }
  return MultivariateSeries(series.y.bottomRows(length),
                            series.x.bottomRows(length),
                            series.z.tail(length));
}

namespace {

struct ReplicationOutcome {
  bool ok = false;
  std::vector<Eigen::MatrixXd> theta_hit;
  std::vector<Eigen::MatrixXd> sigma_hit;
  Eigen::VectorXd c_hit;
  std::vector<double> extra_hit;
  double delay_hit = 0.0;
  Eigen::MatrixXd pred_hit;
  Eigen::VectorXd c_error;
  std::vector<double> extra_rel_error;
};

Eigen::MatrixXd indicator(const Eigen::MatrixXd& truth,
                          const IntervalMatrix& ci) {
  Eigen::MatrixXd hit(truth.rows(), truth.cols());
  for (Eigen::Index a = 0; a < truth.rows(); ++a) {
    for (Eigen::Index b = 0; b < truth.cols(); ++b) {
      hit(a, b) = (truth(a, b) >= ci.lower(a, b) &&
                   truth(a, b) <= ci.upper(a, b))
                      ? 1.0
                      : 0.0;
    }
  }
  return hit;
}

}  // namespace

CoverageReport coverage_experiment(const TrueModel& truth, NoiseFamily family,
                                   const ExtraParam& extra, int sample_length,
                                   int replications,
                                   const ChainControl& control, double level,
                                   int horizon, std::uint64_t seed,
                                   int workers) {
  if (replications < 1) {
    throw std::invalid_argument("coverage_experiment: replications must be >= 1");
  }
  ModelSpec fit_spec = truth.spec;
  fit_spec.family = family;
  const Rng master(seed);

  std::vector<ReplicationOutcome> outcomes(replications);
  parallel_for(replications, workers, [&](int rep) {
    ReplicationOutcome& out = outcomes[rep];
    try {
      Rng sim_rng = master.substream("replication", rep);
      const MultivariateSeries full = simulate_mtar(
          truth, sample_length + horizon, family, extra, -1, sim_rng);
      const MultivariateSeries fit_series(
          full.y.topRows(sample_length), full.x.topRows(sample_length),
          full.z.head(sample_length));

      ChainControl rep_control = control;
      rep_control.seed = master.substream("fit", rep).seed();
      const Priors priors = Priors::noninformative(
          fit_spec, truth.output_dim, truth.covariate_dim);
      const PosteriorDraws draws =
          run_chain(fit_series, fit_spec, priors, rep_control);
      const FitSummary summary = posterior_summary(draws, level);

      for (int j = 0; j < fit_spec.regimes; ++j) {
        out.theta_hit.push_back(indicator(truth.theta[j], summary.theta_ci[j]));
        out.sigma_hit.push_back(indicator(truth.sigma[j], summary.sigma_ci[j]));
      }
      out.c_hit.resize(truth.c.size());
      out.c_error.resize(truth.c.size());
      for (Eigen::Index i = 0; i < truth.c.size(); ++i) {
        out.c_hit[i] = (truth.c[i] >= summary.c_lower[i] &&
                        truth.c[i] <= summary.c_upper[i])
                           ? 1.0
                           : 0.0;
        out.c_error[i] = summary.c_mean[i] - truth.c[i];
      }
      for (std::size_t i = 0; i < extra.values.size(); ++i) {
        out.extra_hit.push_back((extra.values[i] >= summary.extra_lower[i] &&
                                 extra.values[i] <= summary.extra_upper[i])
                                    ? 1.0
                                    : 0.0);
        out.extra_rel_error.push_back(
            100.0 * (summary.extra_mean.values[i] - extra.values[i]) /
            extra.values[i]);
      }
      out.delay_hit = summary.h_mode == truth.h ? 1.0 : 0.0;

      if (horizon > 0) {
        ForecastInput fin;
        fin.horizon = horizon;
        fin.future_z = full.z.tail(horizon);
        fin.future_x = full.x.bottomRows(horizon);
        Rng fc_rng = master.substream("forecast", rep);
        const ForecastResult fc =
            forecast(draws, fit_series, fin, level, fc_rng);
        out.pred_hit.resize(horizon, truth.output_dim);
        for (int step = 0; step < horizon; ++step) {
          for (int col = 0; col < truth.output_dim; ++col) {
            const double actual = full.y(sample_length + step, col);
            out.pred_hit(step, col) = (actual >= fc.lower(step, col) &&
                                       actual <= fc.upper(step, col))
                                          ? 1.0
                                          : 0.0;
          }
        }
      }
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;
    }
  });

  CoverageReport report;
  report.replications = replications;
  report.sample_length = sample_length;
  report.horizon = horizon;
  report.level = level;
  report.control = control;
  for (int j = 0; j < fit_spec.regimes; ++j) {
    report.theta_coverage.push_back(
        Eigen::MatrixXd::Zero(truth.theta[j].rows(), truth.theta[j].cols()));
    report.sigma_coverage.push_back(
        Eigen::MatrixXd::Zero(truth.sigma[j].rows(), truth.sigma[j].cols()));
  }
  report.c_coverage = Eigen::VectorXd::Zero(truth.c.size());
  report.threshold_bias = Eigen::VectorXd::Zero(truth.c.size());
  report.extra_coverage.assign(extra.values.size(), 0.0);
  report.extra_relative_bias.assign(extra.values.size(), 0.0);
  report.prediction_coverage =
      Eigen::MatrixXd::Zero(std::max(horizon, 0), truth.output_dim);

  int ok_count = 0;
  for (const auto& out : outcomes) {
    if (!out.ok) {
      report.failures += 1;
      continue;
    }
    ok_count += 1;
    for (int j = 0; j < fit_spec.regimes; ++j) {
      report.theta_coverage[j] += out.theta_hit[j];
      report.sigma_coverage[j] += out.sigma_hit[j];
    }
    report.c_coverage += out.c_hit;
    report.threshold_bias += out.c_error;
    for (std::size_t i = 0; i < extra.values.size(); ++i) {
      report.extra_coverage[i] += out.extra_hit[i];
      report.extra_relative_bias[i] += out.extra_rel_error[i];
    }
    report.delay_hit_rate += out.delay_hit;
    if (horizon > 0) report.prediction_coverage += out.pred_hit;
  }
  if (ok_count > 0) {
    const double pct = 100.0 / ok_count;
    for (int j = 0; j < fit_spec.regimes; ++j) {
      report.theta_coverage[j] *= pct;
      report.sigma_coverage[j] *= pct;
    }
    report.c_coverage *= pct;
    report.threshold_bias /= ok_count;
    for (std::size_t i = 0; i < extra.values.size(); ++i) {
      report.extra_coverage[i] *= pct;
      report.extra_relative_bias[i] /= ok_count;
    }
    report.delay_hit_rate *= pct;
    report.prediction_coverage *= pct;
  }
  return report;
}

SelectionReport selection_experiment(const TrueModel& truth,
                                     NoiseFamily family,
                                     const ExtraParam& extra,
                                     const std::vector<CandidateModel>& candidates,
                                     int true_index, int sample_length,
                                     int replications,
                                     const ChainControl& control,
                                     std::uint64_t seed, int workers) {
  if (candidates.empty()) {
    throw std::invalid_argument("selection_experiment: no candidates");
  }
  if (true_index < 0 || true_index >= static_cast<int>(candidates.size())) {
    throw std::invalid_argument("selection_experiment: bad true_index");
  }
  if (replications < 1) {
    throw std::invalid_argument("selection_experiment: replications must be >= 1");
  }
  const int n_cand = static_cast<int>(candidates.size());
  const Rng master(seed);

  struct Outcome {
    bool ok = false;
    int dic_pick = -1;
    int waic_pick = -1;
    int dic_true_rank = -1;   // 0 = ranked first, 1 = second, ...
    int waic_true_rank = -1;
  };
  std::vector<Outcome> outcomes(replications);

  parallel_for(replications, workers, [&](int rep) {
    Outcome& out = outcomes[rep];
    try {
      Rng sim_rng = master.substream("replication", rep);
      const MultivariateSeries series =
          simulate_mtar(truth, sample_length, family, extra, -1, sim_rng);

      std::vector<double> dic_vals(n_cand), waic_vals(n_cand);
      for (int ci = 0; ci < n_cand; ++ci) {
        const ModelSpec& cand = candidates[ci].spec;
        const Priors priors = Priors::noninformative(
            cand, series.output_dim(), series.covariate_dim());
        ChainControl cand_control = control;
        cand_control.seed =
            master.substream("fit", static_cast<std::uint64_t>(rep) * n_cand + ci)
                .seed();
        const PosteriorDraws draws =
            run_chain(series, cand, priors, cand_control);
        dic_vals[ci] = dic(draws, series, cand).value;
        waic_vals[ci] = waic(draws, series, cand).value;
      }
      auto rank_of = [&](const std::vector<double>& vals, int index) {
        int rank = 0;
        for (int ci = 0; ci < n_cand; ++ci) {
          if (ci != index && vals[ci] < vals[index]) ++rank;
        }
        return rank;
      };
      out.dic_pick = static_cast<int>(
          std::min_element(dic_vals.begin(), dic_vals.end()) - dic_vals.begin());
      out.waic_pick = static_cast<int>(std::min_element(waic_vals.begin(),
                                                        waic_vals.end()) -
                                       waic_vals.begin());
      out.dic_true_rank = rank_of(dic_vals, true_index);
      out.waic_true_rank = rank_of(waic_vals, true_index);
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;
    }
  });

  SelectionReport report;
  report.replications = replications;
  report.sample_length = sample_length;
  report.true_index = true_index;
  for (const auto& cand : candidates) report.labels.push_back(cand.label);
  report.dic_pick_rate = Eigen::VectorXd::Zero(n_cand);
  report.waic_pick_rate = Eigen::VectorXd::Zero(n_cand);

  int ok_count = 0;
  for (const auto& out : outcomes) {
    if (!out.ok) {
      report.failures += 1;
      continue;
    }
    ok_count += 1;
    report.dic_pick_rate[out.dic_pick] += 1.0;
    report.waic_pick_rate[out.waic_pick] += 1.0;
    if (out.dic_true_rank == 0) report.dic_true_rate += 1.0;
    if (out.dic_true_rank == 1) report.dic_second_rate += 1.0;
    if (out.waic_true_rank == 0) report.waic_true_rate += 1.0;
    if (out.waic_true_rank == 1) report.waic_second_rate += 1.0;
  }
  if (ok_count > 0) {
    report.dic_pick_rate /= ok_count;
    report.waic_pick_rate /= ok_count;
    report.dic_true_rate /= ok_count;
    report.dic_second_rate /= ok_count;
    report.waic_true_rate /= ok_count;
    report.waic_second_rate /= ok_count;
  }
  return report;
}

}  // namespace mtar
