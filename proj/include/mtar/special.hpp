#ifndef MTAR_SPECIAL_HPP
#define MTAR_SPECIAL_HPP

#include <span>
#include <vector>

namespace mtar {

// log K_a(x) for the modified Bessel function of the second kind, standard
// convention K_a(x) = (1/2) * Integral_0^inf t^{a-1} exp(-(x/2)(t+1/t)) dt.
// Symmetric in the order (K_{-a} = K_a); safe in log scale for arguments far
// beyond the range where K itself underflows.
double log_bessel_k(double order, double x);

// gamma(a,b) = Integral_0^b t^{a-1} e^{-t} dt (lower incomplete gamma).
double lower_incomplete_gamma(double a, double b);

// log gamma(a,b), stable for small b and for a large enough that gamma(a,b)
// overflows.
double log_lower_incomplete_gamma(double a, double b);

// Regularized P(a,x) = gamma(a,x)/Gamma(a) and its inverse in x.
double gamma_p(double a, double x);
double gamma_p_inv(double a, double p);

double chi_squared_cdf(double x, double dof);
double fisher_f_cdf(double x, double d1, double d2);

double normal_cdf(double x);
double normal_quantile(double p);

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);
// log(sum_i exp(v_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> values);

}  // namespace mtar

#endif  // MTAR_SPECIAL_HPP
