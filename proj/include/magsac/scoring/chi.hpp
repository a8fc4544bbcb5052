#ifndef MAGSAC_SCORING_CHI_HPP_
#define MAGSAC_SCORING_CHI_HPP_

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "magsac/core/errors.hpp"

namespace magsac::scoring {

/// Normalizing constant C(rho) = 1 / (2^(rho/2) Gamma(rho/2)).
inline double chi_norm_constant(int rho) {
  if (rho < 1) throw Error(ErrorCode::kInvalidArgument, "rho must be >= 1");
  return 1.0 / (std::pow(2.0, 0.5 * rho) * std::tgamma(0.5 * rho));
}

/// sqrt of the chi-squared inverse CDF; the slope of tau(sigma).
inline double chi_quantile(int rho, double quantile) {
  if (rho < 1) throw Error(ErrorCode::kInvalidArgument, "rho must be >= 1");
  if (!(quantile > 0.0 && quantile < 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile must lie in (0, 1)");
  return std::sqrt(boost::math::quantile(boost::math::chi_squared_distribution<double>(rho), quantile));
}

/// Inlier-outlier threshold implied by noise scale sigma.
inline double tau(double sigma, int rho, double quantile) { return sigma * chi_quantile(rho, quantile); }

/// Density of inlier residuals g(r | sigma) for a rho-dimensional residual.
inline double inlier_density(double r, double sigma, int rho) {
  return 2.0 * chi_norm_constant(rho) * std::pow(sigma, -rho) * std::exp(-r * r / (2.0 * sigma * sigma)) *
         std::pow(r, rho - 1);
}

}  // namespace magsac::scoring

#endif  // MAGSAC_SCORING_CHI_HPP_
