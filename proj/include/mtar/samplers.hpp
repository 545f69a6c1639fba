#ifndef MTAR_SAMPLERS_HPP
#define MTAR_SAMPLERS_HPP

#include <Eigen/Dense>
#include <vector>

#include "mtar/rng.hpp"

namespace mtar {

// Gamma draw in the shape-rate parameterization: density proportional to
// u^{shape-1} exp(-rate*u), mean shape/rate.
double sample_gamma(double shape, double rate, Rng& rng);

// Beta(a, b) via two gammas.
double sample_beta(double a, double b, Rng& rng);

// Gamma(shape, rate) restricted to (lo, hi], by inversion of the regularized
// incomplete gamma. rate == 0 with a bounded interval is the power law
// u^{shape-1}.
double sample_truncated_gamma(double shape, double rate, double lo, double hi,
                              Rng& rng);

// Generalized inverse Gaussian with density proportional to
// u^{lambda-1} exp(-(chi/u + psi*u)/2), chi > 0, psi > 0, any real lambda.
double sample_gig(double lambda, double chi, double psi, Rng& rng);

// Probability vector with component means alpha_i / sum(alpha).
Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alphas, Rng& rng);

// Inverse Wishart draw with the given scale matrix and degrees of freedom;
// mean scale/(dof - k - 1) when dof > k + 1.
Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& scale, double dof,
                                       Rng& rng);

// Matrix normal draw: mean + L_r Z L_c^T with Cholesky factors of the row and
// column covariances; vec(draw) has covariance col_cov (x) row_cov.
Eigen::MatrixXd sample_matrix_normal(const Eigen::MatrixXd& mean,
                                     const Eigen::MatrixXd& row_cov,
                                     const Eigen::MatrixXd& col_cov, Rng& rng);

// As above but with the factors precomputed (hot path in the sweep loop).
Eigen::MatrixXd sample_matrix_normal_chol(const Eigen::MatrixXd& mean,
                                          const Eigen::MatrixXd& row_chol,
                                          const Eigen::MatrixXd& col_chol,
                                          Rng& rng);

// Standard-normal vector of the given size.
Eigen::VectorXd sample_std_normal(int size, Rng& rng);

}  // namespace mtar

#endif  // MTAR_SAMPLERS_HPP
