#include "mtar/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mtar/samplers.hpp"
#include "mtar/special.hpp"

namespace mtar {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kInf = std::numeric_limits<double>::infinity();

double quadratic_form(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                      const Eigen::LLT<Eigen::MatrixXd>& llt) {
  Eigen::VectorXd w = llt.matrixL().solve(y - mu);
  return w.squaredNorm();
}

double adaptive_01(const std::function<double(double)>& f, double tol) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, 1.0, 12, tol);
}

}  // namespace

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::StudentT: return "student_t";
    case NoiseFamily::Slash: return "slash";
    case NoiseFamily::ContaminatedNormal: return "contaminated_normal";
    case NoiseFamily::SymmetricHyperbolic: return "hyperbolic";
    case NoiseFamily::Laplace: return "laplace";
  }
  return "unknown";
}

NoiseFamily family_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::Gaussian;
  if (name == "student_t") return NoiseFamily::StudentT;
  if (name == "slash") return NoiseFamily::Slash;
  if (name == "contaminated_normal") return NoiseFamily::ContaminatedNormal;
  if (name == "hyperbolic") return NoiseFamily::SymmetricHyperbolic;
  if (name == "laplace") return NoiseFamily::Laplace;
  throw std::invalid_argument("unknown noise family: " + name);
}

int extra_dimension(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian:
    case NoiseFamily::Laplace: return 0;
    case NoiseFamily::ContaminatedNormal: return 2;
    default: return 1;
  }
}

void validate_extra(NoiseFamily family, const ExtraParam& extra) {
  const int want = extra_dimension(family);
  if (static_cast<int>(extra.values.size()) != want) {
    throw std::invalid_argument("extra parameter must have " +
                                std::to_string(want) + " value(s) for " +
                                to_string(family));
  }
  switch (family) {
    case NoiseFamily::StudentT:
    case NoiseFamily::Slash:
    case NoiseFamily::SymmetricHyperbolic:
      if (!(extra.nu() > 0.0)) {
        throw std::invalid_argument("nu must be positive for " +
                                    to_string(family));
      }
      break;
    case NoiseFamily::ContaminatedNormal:
      if (!(extra.nu1() > 0.0 && extra.nu1() < 1.0) ||
          !(extra.nu2() > 0.0 && extra.nu2() < 1.0)) {
        throw std::invalid_argument(
            "contaminated normal requires nu1, nu2 in (0,1)");
      }
      break;
    default: break;
  }
}

bool inverse_mixing(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::StudentT:
    case NoiseFamily::Slash:
    case NoiseFamily::ContaminatedNormal: return true;
    default: return false;
  }
}

double kappa(NoiseFamily family, double u) {
  if (family == NoiseFamily::Gaussian) return 1.0;
  return inverse_mixing(family) ? 1.0 / u : u;
}

double mixture_log_density(NoiseFamily family, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma,
                           const ExtraParam& extra) {
  validate_extra(family, extra);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("mixture_log_density: sigma must be PD");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  const double q = quadratic_form(y, mu, llt);
  return mixture_log_density_q(family, q, static_cast<int>(y.size()), log_det,
                               extra);
}

double mixture_log_density_q(NoiseFamily family, double q, int k,
                             double log_det_sigma, const ExtraParam& extra) {
  const double base = -0.5 * (k * kLog2Pi + log_det_sigma);
  switch (family) {
    case NoiseFamily::Gaussian:
      return base - 0.5 * q;
    case NoiseFamily::StudentT: {
      const double nu = extra.nu();
      return std::lgamma(0.5 * (nu + k)) - std::lgamma(0.5 * nu) -
             0.5 * k * std::log(nu * M_PI) - 0.5 * log_det_sigma -
             0.5 * (nu + k) * std::log1p(q / nu);
    }
    case NoiseFamily::Slash: {
      const double nu = extra.nu();
      if (q == 0.0) return base + std::log(nu) - std::log(nu + k);
      const double a = 0.5 * (k + nu);
      const double b = 0.5 * q;
      return base + std::log(0.5 * nu) + log_lower_incomplete_gamma(a, b) -
             a * std::log(b);
    }
    case NoiseFamily::ContaminatedNormal: {
      const double nu1 = extra.nu1();
      const double nu2 = extra.nu2();
      const double contaminated =
          std::log(nu1) + 0.5 * k * std::log(nu2) - 0.5 * nu2 * q;
      const double clean = std::log1p(-nu1) - 0.5 * q;
      return base + log_add_exp(contaminated, clean);
    }
    case NoiseFamily::SymmetricHyperbolic: {
      const double nu = extra.nu();
      const double w = std::sqrt(1.0 + q);
      return base + 0.5 * k * std::log(nu) +
             log_bessel_k(0.5 * (2.0 - k), nu * w) +
             0.5 * (2.0 - k) * std::log(w) - log_bessel_k(1.0, nu);
    }
    case NoiseFamily::Laplace: {
      // Closed Bessel form; at q = 0 the k = 1 limit is 1/(4 |sigma|^{1/2}),
      // every k >= 2 diverges.
      if (q == 0.0) {
        if (k == 1) return -std::log(4.0) - 0.5 * log_det_sigma;
        return kInf;
      }
      const double r = std::sqrt(q);
      return -(k + 1) * M_LN2 - 0.5 * k * std::log(M_PI) -
             0.5 * log_det_sigma + 0.5 * (2.0 - k) * std::log(r) +
             log_bessel_k(0.5 * (2.0 - k), 0.5 * r);
    }
  }
  return -kInf;
}

double mixing_log_density(NoiseFamily family, double u,
                          const ExtraParam& extra) {
  validate_extra(family, extra);
  switch (family) {
    case NoiseFamily::Gaussian:
      return u == 1.0 ? 0.0 : -kInf;
    case NoiseFamily::StudentT: {
      if (u <= 0.0) return -kInf;
      const double h = 0.5 * extra.nu();
      return h * std::log(h) - std::lgamma(h) + (h - 1.0) * std::log(u) - h * u;
    }
    case NoiseFamily::Slash: {
      if (u <= 0.0 || u >= 1.0) return -kInf;
      const double h = 0.5 * extra.nu();
      return std::log(h) + (h - 1.0) * std::log(u);
    }
    case NoiseFamily::ContaminatedNormal:
      if (u == extra.nu2()) return std::log(extra.nu1());
      if (u == 1.0) return std::log1p(-extra.nu1());
      return -kInf;
    case NoiseFamily::SymmetricHyperbolic: {
      if (u <= 0.0) return -kInf;
      const double nu = extra.nu();
      return std::log(nu) - M_LN2 - log_bessel_k(1.0, nu) -
             0.5 * (1.0 / u + nu * nu * u);
    }
    case NoiseFamily::Laplace:
      if (u <= 0.0) return -kInf;
      return -std::log(8.0) - u / 8.0;
  }
  return -kInf;
}

double sample_mixing(NoiseFamily family, const ExtraParam& extra, Rng& rng) {
  validate_extra(family, extra);
  switch (family) {
    case NoiseFamily::Gaussian:
      return 1.0;
    case NoiseFamily::StudentT:
      return sample_gamma(0.5 * extra.nu(), 0.5 * extra.nu(), rng);
    case NoiseFamily::Slash:
      // Beta(nu/2, 1) by inversion
      return std::pow(rng.uniform(), 2.0 / extra.nu());
    case NoiseFamily::ContaminatedNormal:
      return rng.uniform() < extra.nu1() ? extra.nu2() : 1.0;
    case NoiseFamily::SymmetricHyperbolic:
      return sample_gig(1.0, 1.0, extra.nu() * extra.nu(), rng);
    case NoiseFamily::Laplace:
      return -8.0 * std::log(rng.uniform());
  }
  return 1.0;
}

double variance_factor(NoiseFamily family, const ExtraParam& extra) {
  validate_extra(family, extra);
  switch (family) {
    case NoiseFamily::Gaussian:
      return 1.0;
    case NoiseFamily::StudentT:
    case NoiseFamily::Slash: {
      const double nu = extra.nu();
      if (!(nu > 2.0)) {
        throw std::invalid_argument("variance requires nu > 2");
      }
      return nu / (nu - 2.0);
    }
    case NoiseFamily::ContaminatedNormal:
      return extra.nu1() / extra.nu2() + 1.0 - extra.nu1();
    case NoiseFamily::SymmetricHyperbolic: {
      const double nu = extra.nu();
      return std::exp(log_bessel_k(2.0, nu) - log_bessel_k(1.0, nu)) / nu;
    }
    case NoiseFamily::Laplace:
      return 8.0;
  }
  return 1.0;
}

double quadform_cdf(NoiseFamily family, double x, int k,
                    const ExtraParam& extra) {
  validate_extra(family, extra);
  if (x < 0.0) {
    throw std::invalid_argument("quadform_cdf: argument must be nonnegative");
  }
  if (x == 0.0) return 0.0;
  const double dof = static_cast<double>(k);
  switch (family) {
    case NoiseFamily::Gaussian:
      return chi_squared_cdf(x, dof);
    case NoiseFamily::StudentT:
      // rho / k is F-distributed with (k, nu) degrees of freedom
      return fisher_f_cdf(x / dof, dof, extra.nu());
    case NoiseFamily::ContaminatedNormal:
      return extra.nu1() * chi_squared_cdf(extra.nu2() * x, dof) +
             (1.0 - extra.nu1()) * chi_squared_cdf(x, dof);
    case NoiseFamily::Slash: {
      // E_U[chi2cdf(x U)] for U ~ Beta(nu/2, 1); the substitution w = u^{nu/2}
      // flattens the beta weight to Lebesgue measure on (0,1).
      const double e = 2.0 / extra.nu();
      const double p = adaptive_01(
          [&](double w) { return chi_squared_cdf(x * std::pow(w, e), dof); },
          1e-8);
      return std::clamp(p, 0.0, 1.0);
    }
    case NoiseFamily::SymmetricHyperbolic:
    case NoiseFamily::Laplace: {
      // E_U[chi2cdf(x / U)] over (0, inf), mapped to (0,1) by u = t/(1-t).
      const double p = adaptive_01(
          [&](double t) {
            const double u = t / (1.0 - t);
            if (u <= 0.0 || !std::isfinite(u)) return 0.0;
            const double w = mixing_log_density(family, u, extra);
            if (w == -kInf) return 0.0;
            return chi_squared_cdf(x / u, dof) * std::exp(w) /
                   ((1.0 - t) * (1.0 - t));
          },
          1e-8);
      return std::clamp(p, 0.0, 1.0);
    }
  }
  return 0.0;
}

Eigen::VectorXd sample_standard_mixture(NoiseFamily family, int k,
                                        const ExtraParam& extra, Rng& rng) {
  const double u = sample_mixing(family, extra, rng);
  const double scale = std::sqrt(kappa(family, u));
  return scale * sample_std_normal(k, rng);
}

ExtraParam near_gaussian_extra(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::StudentT:
    case NoiseFamily::Slash: return ExtraParam(100.0);
    case NoiseFamily::ContaminatedNormal: return ExtraParam(0.01, 0.99);
    case NoiseFamily::SymmetricHyperbolic: return ExtraParam(1.85);
    default: return ExtraParam();
  }
}

}  // namespace mtar
