#include "mtar/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtar/samplers.hpp"
#include "mtar/special.hpp"

namespace mtar {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SigmaCache {
  std::vector<Eigen::MatrixXd> chol;   // lower factors
  std::vector<double> log_det;
};

SigmaCache make_sigma_cache(const std::vector<Eigen::MatrixXd>& sigma) {
  SigmaCache cache;
  cache.chol.reserve(sigma.size());
  cache.log_det.reserve(sigma.size());
  for (const auto& s : sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("gibbs: scale matrix lost positive definiteness");
    }
    Eigen::MatrixXd l = llt.matrixL();
    double ld = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) ld += 2.0 * std::log(l(i, i));
    cache.chol.push_back(std::move(l));
    cache.log_det.push_back(ld);
  }
  return cache;
}

// Squared Mahalanobis norm of (y_t' - M_t theta_j) under Sigma_j.
double observation_quadform(const MultivariateSeries& series,
                            const ModelSpec& spec, int t, int regime,
                            const Eigen::MatrixXd& theta,
                            const Eigen::MatrixXd& chol) {
  Eigen::RowVectorXd row = design_row(series, t, spec, regime);
  Eigen::VectorXd resid =
      series.y.row(t - 1).transpose() - theta.transpose() * row.transpose();
  return chol.triangularView<Eigen::Lower>().solve(resid).squaredNorm();
}

// Quantile of a sorted copy (linear interpolation between order statistics).
double empirical_quantile(std::vector<double> v, double prob) {
  std::sort(v.begin(), v.end());
  const double pos = prob * (static_cast<double>(v.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

std::pair<double, double> threshold_window(const MultivariateSeries& series,
                                           const ModelSpec& spec, int h) {
  const int start = effective_start(spec);
  double z0 = kInf, z1 = -kInf;
  for (int t = start; t <= series.length(); ++t) {
    const double z = series.z[t - h - 1];
    z0 = std::min(z0, z);
    z1 = std::max(z1, z);
  }
  return {z0, z1};
}

// Gap fractions of c within [z0, z1]; entries clamped away from zero so the
// Dirichlet parameters stay valid even when a window shift after a delay move
// leaves c outside the current range.
Eigen::VectorXd gap_fractions(const Thresholds& c, double z0, double z1) {
  const int l = static_cast<int>(c.size()) + 1;
  Eigen::VectorXd r(l);
  const double span = z1 - z0;
  double prev = z0;
  for (int j = 0; j < l - 1; ++j) {
    r[j] = (c[j] - prev) / span;
    prev = c[j];
  }
  r[l - 1] = (z1 - prev) / span;
  const double floor_frac = 1e-8;
  for (int j = 0; j < l; ++j) r[j] = std::max(r[j], floor_frac);
  r /= r.sum();
  return r;
}

double log_dirichlet_density(const Eigen::VectorXd& alphas,
                             const Eigen::VectorXd& x) {
  double lp = std::lgamma(alphas.sum());
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    lp -= std::lgamma(alphas[i]);
    lp += (alphas[i] - 1.0) * std::log(x[i]);
  }
  return lp;
}

bool occupancy_ok(const MultivariateSeries& series, const ModelSpec& spec,
                  const Thresholds& c, int h, int min_override) {
  const auto sets = assign_regimes(series, c, h, spec);
  for (int j = 0; j < spec.regimes; ++j) {
    const int need =
        min_override >= 0
            ? min_override
            : min_regime_occupancy(spec, j, series.output_dim(),
                                   series.covariate_dim());
    if (static_cast<int>(sets[j].size()) < need) return false;
  }
  return true;
}

// Sufficient statistics of u for the grid families.
struct MixingStats {
  int count = 0;
  double sum_u = 0.0;
  double sum_log_u_minus_u = 0.0;
};

MixingStats mixing_stats(const ChainState& state,
                         const MultivariateSeries& series,
                         const ModelSpec& spec) {
  MixingStats stats;
  const int start = effective_start(spec);
  for (int t = start; t <= series.length(); ++t) {
    const double u = state.u[t - 1];
    stats.count += 1;
    stats.sum_u += u;
    stats.sum_log_u_minus_u += std::log(u) - u;
  }
  return stats;
}

// Draws one atom of the trapezoid-discretized conditional: log weights are
// log(pi(l_r) + pi(l_{r+1})) over the m grid cells, values are midpoints.
double sample_grid(const std::vector<double>& log_pi_endpoints,
                   double lo, double hi, Rng& rng) {
  const int m = static_cast<int>(log_pi_endpoints.size()) - 1;
  std::vector<double> log_w(m);
  double max_w = -kInf;
  for (int r = 0; r < m; ++r) {
    log_w[r] = log_add_exp(log_pi_endpoints[r], log_pi_endpoints[r + 1]);
    max_w = std::max(max_w, log_w[r]);
  }
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    log_w[r] = std::exp(log_w[r] - max_w);
    total += log_w[r];
  }
  double target = rng.uniform() * total;
  int pick = m - 1;
  for (int r = 0; r < m; ++r) {
    target -= log_w[r];
    if (target <= 0.0) {
      pick = r;
      break;
    }
  }
  const double width = (hi - lo) / m;
  return lo + (pick + 0.5) * width;
}

}  // namespace

Priors Priors::noninformative(const ModelSpec& spec, int k, int r) {
  Priors priors;
  for (int j = 0; j < spec.regimes; ++j) {
    const int s = spec.design_width(j, k, r);
    priors.mu0.push_back(Eigen::MatrixXd::Zero(s, k));
    priors.delta0.push_back(1e3 * Eigen::MatrixXd::Identity(s, s));
    priors.omega0.push_back(Eigen::MatrixXd::Identity(k, k));
    priors.tau0.push_back(static_cast<double>(k) + 2.0);
  }
  switch (spec.family) {
    case NoiseFamily::StudentT:
      priors.gamma0 = 2.0;
      priors.eta0 = 100.0;
      break;
    case NoiseFamily::SymmetricHyperbolic:
      priors.gamma0 = 0.01;
      priors.eta0 = 20.0;
      break;
    case NoiseFamily::Slash:
      priors.gamma0 = 1.0;
      priors.eta0 = 0.1;
      break;
    default:
      break;
  }
  return priors;
}

void Priors::validate(const ModelSpec& spec, int k, int r) const {
  const auto l = static_cast<std::size_t>(spec.regimes);
  if (mu0.size() != l || delta0.size() != l || omega0.size() != l ||
      tau0.size() != l) {
    throw std::invalid_argument("priors: need one block per regime");
  }
  for (int j = 0; j < spec.regimes; ++j) {
    const int s = spec.design_width(j, k, r);
    if (mu0[j].rows() != s || mu0[j].cols() != k) {
      throw std::invalid_argument("priors: mu0 dimension mismatch");
    }
    if (delta0[j].rows() != s || delta0[j].cols() != s) {
      throw std::invalid_argument("priors: delta0 dimension mismatch");
    }
    if (Eigen::LLT<Eigen::MatrixXd>(delta0[j]).info() != Eigen::Success) {
      throw std::invalid_argument("priors: delta0 must be positive definite");
    }
    if (omega0[j].rows() != k || omega0[j].cols() != k) {
      throw std::invalid_argument("priors: omega0 dimension mismatch");
    }
    if (Eigen::LLT<Eigen::MatrixXd>(omega0[j]).info() != Eigen::Success) {
      throw std::invalid_argument("priors: omega0 must be positive definite");
    }
    if (!(tau0[j] > static_cast<double>(k) - 1.0)) {
      throw std::invalid_argument("priors: tau0 must exceed k - 1");
    }
  }
  const bool uniform_range = spec.family == NoiseFamily::StudentT ||
                             spec.family == NoiseFamily::SymmetricHyperbolic;
  if (uniform_range && !(gamma0 < eta0)) {
    throw std::invalid_argument("priors: need gamma0 < eta0 for the nu range");
  }
  if (grid_size < 2) {
    throw std::invalid_argument("priors: grid size must be at least 2");
  }
}

ChainState init_state(const MultivariateSeries& series, const ModelSpec& spec,
                      const Priors& priors, Rng& rng) {
  (void)rng;  // Step 0 is deterministic; the handle keeps the call symmetric
  spec.validate(series.output_dim(), series.covariate_dim());
  priors.validate(spec, series.output_dim(), series.covariate_dim());
  if (effective_start(spec) + 10 > series.length()) {
    throw std::runtime_error("init_state: series too short for the lag structure");
  }

  ChainState state;
  state.h = spec.h_min;
  state.u = Eigen::VectorXd::Ones(series.length());
  state.extra = near_gaussian_extra(spec.family);
  // Grid families must start inside the prior range; clamp to the range
  // interior when the default falls outside it.
  if ((spec.family == NoiseFamily::StudentT ||
       spec.family == NoiseFamily::SymmetricHyperbolic) &&
      !state.extra.values.empty()) {
    const double width = priors.eta0 - priors.gamma0;
    const double lo = priors.gamma0 + 1e-3 * width;
    const double hi = priors.eta0 - 1e-3 * width;
    state.extra.values[0] = std::clamp(state.extra.values[0], lo, hi);
  }

  // Thresholds at the 100(j/l)% quantiles of the lagged threshold variable.
  if (spec.regimes > 1) {
    const int start = effective_start(spec);
    std::vector<double> z_lagged;
    z_lagged.reserve(series.length() - start + 1);
    for (int t = start; t <= series.length(); ++t) {
      z_lagged.push_back(series.z[t - state.h - 1]);
    }
    state.c.resize(spec.regimes - 1);
    for (int j = 1; j < spec.regimes; ++j) {
      state.c[j - 1] = empirical_quantile(
          z_lagged, static_cast<double>(j) / spec.regimes);
    }
    for (int j = 1; j < spec.regimes - 1; ++j) {
      if (!(state.c[j] > state.c[j - 1])) {
        throw std::runtime_error(
            "init_state: threshold variable quantiles are not distinct");
      }
    }
  }

  const auto sets = assign_regimes(series, state.c, state.h, spec);
  for (int j = 0; j < spec.regimes; ++j) {
    const int need = min_regime_occupancy(spec, j, series.output_dim(),
                                          series.covariate_dim());
    if (static_cast<int>(sets[j].size()) < need) {
      throw std::runtime_error("init_state: regime " + std::to_string(j + 1) +
                               " holds " + std::to_string(sets[j].size()) +
                               " points, needs " + std::to_string(need));
    }
    const RegimeData reg = build_design(series, sets[j], spec, j);
    MleFit fit = mle_init(reg);
    state.theta.push_back(std::move(fit.theta));
    state.sigma.push_back(std::move(fit.sigma));
  }
  return state;
}

void sample_latent_u(ChainState& state, const MultivariateSeries& series,
                     const ModelSpec& spec, Rng& rng) {
  if (spec.family == NoiseFamily::Gaussian) return;  // u = 1 with probability 1
  const SigmaCache cache = make_sigma_cache(state.sigma);
  const int k = series.output_dim();
  const int start = effective_start(spec);
  for (int t = start; t <= series.length(); ++t) {
    const int j = regime_of(series.z[t - state.h - 1], state.c);
    const double q = observation_quadform(series, spec, t, j, state.theta[j],
                                          cache.chol[j]);
    double u = 1.0;
    switch (spec.family) {
      case NoiseFamily::StudentT: {
        const double nu = state.extra.nu();
        u = sample_gamma(0.5 * (nu + k), 0.5 * (nu + q), rng);
        break;
      }
      case NoiseFamily::Slash: {
        const double nu = state.extra.nu();
        u = sample_truncated_gamma(0.5 * (nu + k), 0.5 * q, 0.0, 1.0, rng);
        break;
      }
      case NoiseFamily::ContaminatedNormal: {
        const double nu1 = state.extra.nu1();
        const double nu2 = state.extra.nu2();
        const double log_tau =
            std::log(nu1) + 0.5 * k * std::log(nu2) - 0.5 * nu2 * q;
        const double log_one_minus = std::log1p(-nu1) - 0.5 * q;
        const double p =
            1.0 / (1.0 + std::exp(log_one_minus - log_tau));
        u = rng.uniform() < p ? nu2 : 1.0;
        break;
      }
      case NoiseFamily::SymmetricHyperbolic: {
        const double nu = state.extra.nu();
        u = sample_gig(0.5 * (2.0 - k), 1.0 + q, nu * nu, rng);
        break;
      }
      case NoiseFamily::Laplace: {
        // chi = q is almost surely positive; clamp the measure-zero exact fit
        u = sample_gig(0.5 * (2.0 - k), std::max(q, 1e-12), 0.25, rng);
        break;
      }
      default:
        break;
    }
    state.u[t - 1] = u;
  }
}

namespace {

// Inverse of the per-observation scale multiplier: entries of kappa(u)^{-1}.
Eigen::VectorXd inverse_kappa_weights(const ChainState& state,
                                      const ModelSpec& spec,
                                      const RegimeData& reg) {
  Eigen::VectorXd w(reg.time_points.size());
  for (std::size_t i = 0; i < reg.time_points.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] =
        1.0 / kappa(spec.family, state.u[reg.time_points[i] - 1]);
  }
  return w;
}

}  // namespace

void sample_theta(ChainState& state, const std::vector<RegimeData>& regimes,
                  const ModelSpec& spec, const Priors& priors, Rng& rng) {
  for (int j = 0; j < spec.regimes; ++j) {
    const RegimeData& reg = regimes[j];
    const Eigen::Index s = priors.mu0[j].rows();
    Eigen::MatrixXd delta0_inv = priors.delta0[j].llt().solve(
        Eigen::MatrixXd::Identity(s, s));
    Eigen::MatrixXd precision = delta0_inv;
    Eigen::MatrixXd rhs = delta0_inv * priors.mu0[j];
    if (reg.design.rows() > 0) {
      const Eigen::VectorXd w = inverse_kappa_weights(state, spec, reg);
      const Eigen::MatrixXd wm = w.asDiagonal() * reg.design;
      precision += reg.design.transpose() * wm;
      rhs += wm.transpose() * reg.response;
    }
    precision = 0.5 * (precision + precision.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("sample_theta: solve failed in regime " +
                               std::to_string(j + 1));
    }
    const Eigen::MatrixXd mean = llt.solve(rhs);
    // Row covariance is precision^{-1}; with precision = L L', the factor
    // L^{-T} satisfies L^{-T} L^{-1} = precision^{-1}.
    Eigen::MatrixXd z(s, state.sigma[j].rows());
    for (Eigen::Index a = 0; a < z.rows(); ++a) {
      for (Eigen::Index b = 0; b < z.cols(); ++b) z(a, b) = rng.normal();
    }
    const Eigen::MatrixXd col_chol =
        Eigen::LLT<Eigen::MatrixXd>(state.sigma[j]).matrixL();
    Eigen::MatrixXd shift =
        llt.matrixL().transpose().solve(z * col_chol.transpose());
    state.theta[j] = mean + shift;
  }
}

void sample_sigma(ChainState& state, const std::vector<RegimeData>& regimes,
                  const ModelSpec& spec, const Priors& priors, Rng& rng) {
  for (int j = 0; j < spec.regimes; ++j) {
    const RegimeData& reg = regimes[j];
    const Eigen::Index s = priors.mu0[j].rows();
    Eigen::MatrixXd delta0_inv = priors.delta0[j].llt().solve(
        Eigen::MatrixXd::Identity(s, s));
    const Eigen::MatrixXd dev = state.theta[j] - priors.mu0[j];
    Eigen::MatrixXd scale = priors.omega0[j] + dev.transpose() * delta0_inv * dev;
    if (reg.design.rows() > 0) {
      const Eigen::VectorXd w = inverse_kappa_weights(state, spec, reg);
      const Eigen::MatrixXd resid = reg.response - reg.design * state.theta[j];
      scale += resid.transpose() * (w.asDiagonal() * resid);
    }
    scale = 0.5 * (scale + scale.transpose());
    const double dof = priors.tau0[j] + static_cast<double>(reg.design.rows()) +
                       static_cast<double>(s);
    if (Eigen::LLT<Eigen::MatrixXd>(scale).info() != Eigen::Success) {
      throw std::runtime_error("sample_sigma: scale not PD in regime " +
                               std::to_string(j + 1));
    }
    state.sigma[j] = sample_inverse_wishart(scale, dof, rng);
  }
}

void sample_extra(ChainState& state, const MultivariateSeries& series,
                  const ModelSpec& spec, const Priors& priors, Rng& rng) {
  switch (spec.family) {
    case NoiseFamily::Gaussian:
    case NoiseFamily::Laplace:
      return;  // no extra parameter
    case NoiseFamily::Slash: {
      const int start = effective_start(spec);
      double count = 0.0, sum_log_u = 0.0;
      for (int t = start; t <= series.length(); ++t) {
        count += 1.0;
        sum_log_u += std::log(state.u[t - 1]);
      }
      const double shape = priors.gamma0 + count;
      const double rate = priors.eta0 - 0.5 * sum_log_u;
      state.extra.values[0] = sample_gamma(shape, rate, rng);
      return;
    }
    case NoiseFamily::ContaminatedNormal: {
      // Counts and quadratic forms of the contaminated points, matched
      // against the nu2 value that generated the current u draws.
      const SigmaCache cache = make_sigma_cache(state.sigma);
      const int start = effective_start(spec);
      const int k = series.output_dim();
      double n_contaminated = 0.0, n_clean = 0.0, sum_q = 0.0;
      for (int t = start; t <= series.length(); ++t) {
        if (state.u[t - 1] == 1.0) {
          n_clean += 1.0;
          continue;
        }
        n_contaminated += 1.0;
        const int j = regime_of(series.z[t - state.h - 1], state.c);
        sum_q += observation_quadform(series, spec, t, j, state.theta[j],
                                      cache.chol[j]);
      }
      const double nu1 = sample_beta(priors.gamma01 + n_contaminated,
                                     priors.eta01 + n_clean, rng);
      const double nu2 = sample_truncated_gamma(
          priors.gamma02 + 0.5 * k * n_contaminated,
          priors.eta02 + 0.5 * sum_q, 0.0, 1.0, rng);
      // Keep the latent draws tied to the new atom so the next conditional
      // sees a consistent two-point support.
      const double old_nu2 = state.extra.nu2();
      const int total = series.length();
      for (int t = start; t <= total; ++t) {
        if (state.u[t - 1] == old_nu2) state.u[t - 1] = nu2;
      }
      state.extra.values[0] = nu1;
      state.extra.values[1] = nu2;
      return;
    }
    case NoiseFamily::StudentT: {
      const MixingStats stats = mixing_stats(state, series, spec);
      const int m = priors.grid_size;
      std::vector<double> log_pi(m + 1);
      const double width = (priors.eta0 - priors.gamma0) / m;
      for (int r = 0; r <= m; ++r) {
        const double nu = priors.gamma0 + r * width;
        const double half = 0.5 * nu;
        if (!(half > 0.0)) {
          log_pi[r] = -kInf;
          continue;
        }
        log_pi[r] = stats.count * (half * std::log(half) - std::lgamma(half)) +
                    half * stats.sum_log_u_minus_u;
      }
      state.extra.values[0] =
          sample_grid(log_pi, priors.gamma0, priors.eta0, rng);
      return;
    }
    case NoiseFamily::SymmetricHyperbolic: {
      const MixingStats stats = mixing_stats(state, series, spec);
      const int m = priors.grid_size;
      std::vector<double> log_pi(m + 1);
      const double width = (priors.eta0 - priors.gamma0) / m;
      for (int r = 0; r <= m; ++r) {
        const double nu = priors.gamma0 + r * width;
        if (!(nu > 0.0)) {
          log_pi[r] = -kInf;
          continue;
        }
        log_pi[r] = stats.count * (std::log(nu) - log_bessel_k(1.0, nu)) -
                    0.5 * nu * nu * stats.sum_u;
      }
      state.extra.values[0] =
          sample_grid(log_pi, priors.gamma0, priors.eta0, rng);
      return;
    }
  }
}

double augmented_loglik(const ChainState& state,
                        const MultivariateSeries& series,
                        const ModelSpec& spec, const Thresholds& c, int h) {
  const SigmaCache cache = make_sigma_cache(state.sigma);
  const int k = series.output_dim();
  const int start = effective_start(spec);
  double lp = 0.0;
  for (int t = start; t <= series.length(); ++t) {
    const int j = regime_of(series.z[t - h - 1], c);
    const double q = observation_quadform(series, spec, t, j, state.theta[j],
                                          cache.chol[j]);
    const double kap = kappa(spec.family, state.u[t - 1]);
    lp += -0.5 * k * (kLog2Pi + std::log(kap)) - 0.5 * cache.log_det[j] -
          0.5 * q / kap;
  }
  return lp;
}

bool sample_thresholds(ChainState& state, const MultivariateSeries& series,
                       const ModelSpec& spec, double zeta, Rng& rng,
                       int min_occupancy_override) {
  if (spec.regimes < 2) return false;
  const auto [z0, z1] = threshold_window(series, spec, state.h);
  if (!(z1 > z0)) return false;

  const Eigen::VectorXd frac_current = gap_fractions(state.c, z0, z1);
  const Eigen::VectorXd proposal_alphas = zeta * frac_current;
  const Eigen::VectorXd r = sample_dirichlet(proposal_alphas, rng);
  if (r.minCoeff() <= 0.0) return false;

  Thresholds c_new(spec.regimes - 1);
  double cum = 0.0;
  for (int j = 0; j < spec.regimes - 1; ++j) {
    cum += r[j];
    c_new[j] = z0 + cum * (z1 - z0);
  }
  if (!occupancy_ok(series, spec, c_new, state.h, min_occupancy_override)) {
    return false;
  }

  const Eigen::VectorXd frac_new = gap_fractions(c_new, z0, z1);
  const double log_target_new = augmented_loglik(state, series, spec, c_new,
                                                 state.h);
  const double log_target_old = augmented_loglik(state, series, spec, state.c,
                                                 state.h);
  // Forward density at the drawn fractions, reverse density at the current
  // ones; the constant Jacobian of the linear map cancels.
  const double log_q_fwd = log_dirichlet_density(proposal_alphas, frac_new);
  const double log_q_rev =
      log_dirichlet_density(zeta * frac_new, frac_current);

  const double log_alpha =
      log_target_new + log_q_rev - log_target_old - log_q_fwd;
  if (std::log(rng.uniform()) <= log_alpha) {
    state.c = c_new;
    return true;
  }
  return false;
}

void sample_delay(ChainState& state, const MultivariateSeries& series,
                  const ModelSpec& spec, Rng& rng) {
  const auto candidates = spec.delay_candidates();
  if (candidates.size() == 1) {
    state.h = candidates.front();
    return;
  }
  std::vector<double> log_w(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    log_w[i] = augmented_loglik(state, series, spec, state.c, candidates[i]);
  }
  const double max_w = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  for (double& w : log_w) {
    w = std::exp(w - max_w);
    total += w;
  }
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    target -= log_w[i];
    if (target <= 0.0) {
      state.h = candidates[i];
      return;
    }
  }
  state.h = candidates.back();
}

PosteriorDraws run_chain(const MultivariateSeries& series,
                         const ModelSpec& spec, const Priors& priors,
                         const ChainControl& control) {
  if (!(control.iterations > control.burn_in) || control.burn_in < 0) {
    throw std::invalid_argument("run_chain: need iterations > burn_in >= 0");
  }
  if (control.thinning < 1) {
    throw std::invalid_argument("run_chain: thinning must be >= 1");
  }
  Rng master(control.seed);
  Rng rng = master.substream("estimation");

  PosteriorDraws draws;
  draws.spec = spec;
  draws.priors = priors;
  draws.control = control;

  ChainState state = init_state(series, spec, priors, rng);
  long accepted = 0;
  long proposals = 0;
  for (int iter = 0; iter < control.iterations; ++iter) {
    const auto sets = assign_regimes(series, state.c, state.h, spec);
    std::vector<RegimeData> regimes;
    regimes.reserve(sets.size());
    for (int j = 0; j < spec.regimes; ++j) {
      regimes.push_back(build_design(series, sets[j], spec, j));
    }
    sample_latent_u(state, series, spec, rng);
    sample_theta(state, regimes, spec, priors, rng);
    sample_sigma(state, regimes, spec, priors, rng);
    sample_extra(state, series, spec, priors, rng);
    if (spec.regimes > 1) {
      accepted += sample_thresholds(state, series, spec,
                                    control.dirichlet_concentration, rng)
                      ? 1
                      : 0;
      proposals += 1;
    }
    sample_delay(state, series, spec, rng);
    if (iter >= control.burn_in &&
        (iter - control.burn_in) % control.thinning == 0) {
      draws.states.push_back(state);
    }
  }
  draws.mh_acceptance =
      proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  return draws;
}

}  // namespace mtar
