#include "mtar/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtar/special.hpp"

namespace mtar {

namespace {

// Marsaglia-Tsang squeeze method, shape >= 1.
double gamma_shape_ge1(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Two-parameter GIG kernel x^{lambda-1} exp(-(omega/2)(x + 1/x)), lambda >= 0.
double log_gig_kernel(double lambda, double omega, double x) {
  return (lambda - 1.0) * std::log(x) - 0.5 * omega * (x + 1.0 / x);
}

double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0) {
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) +
            (lambda - 1.0)) /
           omega;
  }
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) +
                  (1.0 - lambda));
}

// Ratio-of-uniforms without shift (Dagpunar 1988; Lehner 1989). Efficient for
// moderate omega or lambda in [1 - 2.25 omega^2, 2].
double gig_rou_noshift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  // maximum of x*sqrt(kernel): positive root of omega/2 y^2 -(lambda+1)y -omega/2
  const double ym =
      ((lambda + 1.0) +
       std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) /
      omega;
  const double um =
      std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Ratio-of-uniforms shifted by the mode (Dagpunar 1989; Hoermann & Leydold
// 2014). Used for lambda > 2 or omega > 3.
double gig_rou_shift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // Bounding-rectangle abscissae: roots of the cubic y^3 + a y^2 + b y + c
  // locating the extrema of (x - xm) sqrt(kernel(x)).
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  // Cardano, trigonometric form: three real roots, we need the outer two.
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * M_PI) - a / 3.0;

  const double uplus =
      (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus =
      (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) {
      return x;
    }
  }
}

// Rejection with a three-piece hat, for the concentrated case
// 0 <= lambda < 1 and small omega (Hoermann & Leydold 2014, Algorithm 1).
double gig_concentrated(double lambda, double omega, Rng& rng) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);

  // constant hat over [0, x0]
  const double k0 = std::exp(log_gig_kernel(lambda, omega, xm));
  const double area0 = k0 * x0;

  double k1 = 0.0, k2, area1 = 0.0, area2;
  if (x0 >= 2.0 / omega) {
    k2 = std::pow(x0, lambda - 1.0);
    area2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    // power hat over [x0, 2/omega], exponential tail beyond
    k1 = std::exp(-omega);
    area1 = (lambda == 0.0)
                ? k1 * std::log(2.0 / (omega * omega))
                : k1 / lambda *
                      (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area2 = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area0 + area1 + area2;

  for (;;) {
    double v = total * rng.uniform();
    double x, hx;
    if (v <= area0) {
      x = x0 * v / area0;
      hx = k0;
    } else {
      v -= area0;
      if (v <= area1) {
        if (lambda == 0.0) {
          x = omega * std::exp(std::exp(omega) * v);
          hx = k1 / x;
        } else {
          x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
          hx = k1 * std::pow(x, lambda - 1.0);
        }
      } else {
        v -= area1;
        const double tail_lo = std::max(x0, 2.0 / omega);
        x = -2.0 / omega *
            std::log(std::exp(-omega / 2.0 * tail_lo) - omega / (2.0 * k2) * v);
        hx = k2 * std::exp(-omega / 2.0 * x);
      }
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= log_gig_kernel(lambda, omega, x)) return x;
  }
}

}  // namespace

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("sample_gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    // Gamma(shape) = Gamma(shape+1) * U^{1/shape}
    const double g = gamma_shape_ge1(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape) / rate;
  }
  return gamma_shape_ge1(shape, rng) / rate;
}

double sample_beta(double a, double b, Rng& rng) {
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  return x / (x + y);
}

double sample_truncated_gamma(double shape, double rate, double lo, double hi,
                              Rng& rng) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("sample_truncated_gamma: shape must be positive");
  }
  if (rate < 0.0) {
    throw std::invalid_argument("sample_truncated_gamma: rate must be nonnegative");
  }
  if (!(lo >= 0.0) || !(lo < hi)) {
    throw std::invalid_argument("sample_truncated_gamma: empty interval");
  }
  if (rate == 0.0) {
    if (!std::isfinite(hi)) {
      throw std::invalid_argument(
          "sample_truncated_gamma: rate 0 needs a bounded interval");
    }
    // pure power law u^{shape-1} on (lo, hi]
    const double pl = std::pow(lo, shape);
    const double ph = std::pow(hi, shape);
    return std::pow(pl + rng.uniform() * (ph - pl), 1.0 / shape);
  }
  const double plo = lo > 0.0 ? gamma_p(shape, rate * lo) : 0.0;
  const double phi = std::isfinite(hi) ? gamma_p(shape, rate * hi) : 1.0;
  const double mass = phi - plo;
  if (mass > 1e-12) {
    const double target = plo + rng.uniform() * mass;
    double x = gamma_p_inv(shape, std::min(target, 1.0));
    return std::clamp(x / rate, lo, hi);
  }
  // Interval mass below inversion accuracy (large shape pushing all mass to
  // one side): rejection against a uniform envelope scaled by the kernel
  // maximum on the interval.
  const double mode = std::clamp((shape - 1.0) / rate, lo, hi);
  const double log_kmax = (shape - 1.0) * std::log(mode) - rate * mode;
  for (;;) {
    const double x = lo + rng.uniform() * (hi - lo);
    const double log_k = (shape - 1.0) * std::log(x) - rate * x;
    if (std::log(rng.uniform()) <= log_k - log_kmax) return x;
  }
}

double sample_gig(double lambda, double chi, double psi, Rng& rng) {
  if (!(chi > 0.0) || !(psi > 0.0)) {
    throw std::invalid_argument("sample_gig: chi and psi must be positive");
  }
  // Reduce to the two-parameter form gig(|lambda|, omega) via scaling and the
  // reciprocal identity 1/GIG(lambda, chi, psi) ~ GIG(-lambda, psi, chi).
  const double omega = std::sqrt(chi * psi);
  const double alpha = std::sqrt(chi / psi);
  const double alam = std::fabs(lambda);

  double x;
  if (alam > 2.0 || omega > 3.0) {
    x = gig_rou_shift(alam, omega, rng);
  } else if (alam >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    x = gig_rou_noshift(alam, omega, rng);
  } else {
    x = gig_concentrated(alam, omega, rng);
  }
  return lambda < 0.0 ? alpha / x : alpha * x;
}

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alphas, Rng& rng) {
  if (alphas.size() < 2) {
    throw std::invalid_argument("sample_dirichlet: need at least 2 components");
  }
  Eigen::VectorXd g(alphas.size());
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) {
      throw std::invalid_argument("sample_dirichlet: alphas must be positive");
    }
    g[i] = sample_gamma(alphas[i], 1.0, rng);
  }
  const double s = g.sum();
  if (s <= 0.0) {
    // all gammas underflowed (tiny concentrations); fall back to the argmax
    Eigen::VectorXd out = Eigen::VectorXd::Zero(alphas.size());
    Eigen::Index imax;
    alphas.maxCoeff(&imax);
    out[imax] = 1.0;
    return out;
  }
  return g / s;
}

Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& scale, double dof,
                                       Rng& rng) {
  const Eigen::Index k = scale.rows();
  if (scale.cols() != k) {
    throw std::invalid_argument("sample_inverse_wishart: scale must be square");
  }
  if (!(dof > static_cast<double>(k) - 1.0)) {
    throw std::invalid_argument("sample_inverse_wishart: dof must exceed k-1");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "sample_inverse_wishart: scale must be positive definite");
  }
  // W ~ Wishart(scale^{-1}, dof) by Bartlett decomposition; return W^{-1}.
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    bartlett(i, i) =
        std::sqrt(2.0 * sample_gamma(0.5 * (dof - static_cast<double>(i)), 1.0, rng));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  // With L = chol(scale), chol(scale^{-1}) = L^{-T}; W = L^{-T} A A^T L^{-1}.
  Eigen::MatrixXd la = llt.matrixL().transpose().solve(bartlett);
  Eigen::MatrixXd w = la * la.transpose();
  Eigen::MatrixXd inv = w.llt().solve(Eigen::MatrixXd::Identity(k, k));
  return 0.5 * (inv + inv.transpose());  // enforce exact symmetry
}

Eigen::MatrixXd sample_matrix_normal(const Eigen::MatrixXd& mean,
                                     const Eigen::MatrixXd& row_cov,
                                     const Eigen::MatrixXd& col_cov, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> lr(row_cov), lc(col_cov);
  if (lr.info() != Eigen::Success || lc.info() != Eigen::Success) {
    throw std::invalid_argument(
        "sample_matrix_normal: covariances must be positive definite");
  }
  return sample_matrix_normal_chol(mean, lr.matrixL(), lc.matrixL(), rng);
}

Eigen::MatrixXd sample_matrix_normal_chol(const Eigen::MatrixXd& mean,
                                          const Eigen::MatrixXd& row_chol,
                                          const Eigen::MatrixXd& col_chol,
                                          Rng& rng) {
  Eigen::MatrixXd z(mean.rows(), mean.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
  }
  return mean + row_chol * z * col_chol.transpose();
}

Eigen::VectorXd sample_std_normal(int size, Rng& rng) {
  Eigen::VectorXd z(size);
  for (int i = 0; i < size; ++i) z[i] = rng.normal();
  return z;
}

}  // namespace mtar
