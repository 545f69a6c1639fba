#ifndef MTAR_FAMILIES_HPP
#define MTAR_FAMILIES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mtar/rng.hpp"

namespace mtar {

// The six noise families: Gaussian plus five scale mixtures of normals. A
// mixture member is mu + sqrt(kappa(U)) * e0 with e0 Gaussian and U the
// latent mixing variable.
enum class NoiseFamily {
  Gaussian,
  StudentT,
  Slash,
  ContaminatedNormal,
  SymmetricHyperbolic,
  Laplace,
};

std::string to_string(NoiseFamily family);
NoiseFamily family_from_string(const std::string& name);

// Extra (mixing-law) parameter: empty for Gaussian/Laplace, one scalar for
// Student-t/Slash/hyperbolic, the contamination pair for contaminated normal.
struct ExtraParam {
  std::vector<double> values;

  ExtraParam() = default;
  explicit ExtraParam(double nu) : values{nu} {}
  ExtraParam(double nu1, double nu2) : values{nu1, nu2} {}

  double nu() const { return values.at(0); }
  double nu1() const { return values.at(0); }
  double nu2() const { return values.at(1); }
};

// Number of extra parameters carried by a family (0, 1 or 2).
int extra_dimension(NoiseFamily family);

// Throws std::invalid_argument when the extra parameter is malformed for the
// family (wrong arity or outside its support).
void validate_extra(NoiseFamily family, const ExtraParam& extra);

// true when kappa(u) = 1/u (Student-t, Slash, contaminated normal); false for
// kappa(u) = u (hyperbolic, Laplace) and the Gaussian identity.
bool inverse_mixing(NoiseFamily family);

// Per-observation scale multiplier kappa(u).
double kappa(NoiseFamily family, double u);

// log f_Y(y | mu, sigma, extra) of the k-dimensional mixture.
double mixture_log_density(NoiseFamily family, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma,
                           const ExtraParam& extra);

// Same density given the quadratic form q = (y-mu)' sigma^{-1} (y-mu) and
// log|sigma| (hot path in criteria evaluation).
double mixture_log_density_q(NoiseFamily family, double q, int k,
                             double log_det_sigma, const ExtraParam& extra);

// log density (or log mass) of the mixing variable U at u; -inf off support.
double mixing_log_density(NoiseFamily family, double u,
                          const ExtraParam& extra);

// Draw of the mixing variable U.
double sample_mixing(NoiseFamily family, const ExtraParam& extra, Rng& rng);

// E[kappa(U)], the variance inflation factor of the standardized family.
double variance_factor(NoiseFamily family, const ExtraParam& extra);

// CDF of rho = e'e for a standardized mixture vector e in dimension k;
// conditional on U, rho/kappa(U) is chi-squared with k dof. Closed form for
// Gaussian / Student-t / contaminated normal, adaptive quadrature otherwise.
double quadform_cdf(NoiseFamily family, double x, int k,
                    const ExtraParam& extra);

// Standardized mixture draw sqrt(kappa(u)) * z with z ~ Normal_k(0, I).
Eigen::VectorXd sample_standard_mixture(NoiseFamily family, int k,
                                        const ExtraParam& extra, Rng& rng);

// Step-0 starting value for the extra parameter, chosen so the family starts
// as close to Gaussian as its support allows (nu = 100 for Student-t/Slash,
// (0.01, 0.99) for contaminated normal, nu = 1.85 for hyperbolic).
ExtraParam near_gaussian_extra(NoiseFamily family);

}  // namespace mtar

#endif  // MTAR_FAMILIES_HPP
