#include "mtar/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace mtar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log K_a(x) from the large-argument expansion; accurate to machine precision
// for x > ~500 with the small orders used here.
double log_bessel_k_asymptotic(double a, double x) {
  const double mu = 4.0 * a * a;
  const double t1 = (mu - 1.0) / (8.0 * x);
  const double t2 = t1 * (mu - 9.0) / (16.0 * x);
  const double t3 = t2 * (mu - 25.0) / (24.0 * x);
  const double t4 = t3 * (mu - 49.0) / (32.0 * x);
  return 0.5 * std::log(M_PI / (2.0 * x)) - x + std::log1p(t1 + t2 + t3 + t4);
}

}  // namespace

double log_bessel_k(double order, double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("log_bessel_k: argument must be positive");
  }
  const double a = std::fabs(order);  // K_{-a} = K_a
  if (x > 500.0) {
    return log_bessel_k_asymptotic(a, x);
  }
  // Small argument with non-tiny order: K_a(x) ~ Gamma(a)/2 * (2/x)^a, which
  // overflows double long before the log does.
  if (a > 0.0 && x < 1e-4 * std::sqrt(a + 1.0)) {
    return std::lgamma(a) - M_LN2 + a * (M_LN2 - std::log(x));
  }
  const double k = boost::math::cyl_bessel_k(a, x);
  if (std::isfinite(k) && k > 0.0) {
    return std::log(k);
  }
  // Overflow fallback (large order, moderate argument): leading-order term.
  return std::lgamma(a) - M_LN2 + a * (M_LN2 - std::log(x));
}

double lower_incomplete_gamma(double a, double b) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("lower_incomplete_gamma: a must be positive");
  }
  if (b < 0.0) {
    throw std::invalid_argument("lower_incomplete_gamma: b must be nonnegative");
  }
  if (b == 0.0) return 0.0;
  return boost::math::tgamma_lower(a, b);
}

double log_lower_incomplete_gamma(double a, double b) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("log_lower_incomplete_gamma: a must be positive");
  }
  if (b < 0.0) {
    throw std::invalid_argument("log_lower_incomplete_gamma: b must be nonnegative");
  }
  if (b == 0.0) return -kInf;
  if (b < 0.8 * (a + 1.0)) {
    // gamma(a,b) = b^a * sum_{n>=0} (-b)^n / (n! (a+n)); the series keeps the
    // b^a factor out of the floating-point range problem.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 200; ++n) {
      term *= -b / n;
      const double add = term / (a + n);
      sum += add;
      if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
    }
    return a * std::log(b) + std::log(sum);
  }
  const double p = boost::math::gamma_p(a, b);
  return std::lgamma(a) + std::log(p);
}

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double gamma_p_inv(double a, double p) { return boost::math::gamma_p_inv(a, p); }

double chi_squared_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared(dof), x);
}

double fisher_f_cdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::fisher_f(d1, d2), x);
}

double normal_cdf(double x) {
  return boost::math::cdf(boost::math::normal(), x);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal(), p);
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -kInf;
  const double m = *std::max_element(values.begin(), values.end());
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace mtar
