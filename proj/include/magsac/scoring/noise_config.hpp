#ifndef MAGSAC_SCORING_NOISE_CONFIG_HPP_
#define MAGSAC_SCORING_NOISE_CONFIG_HPP_

#include <algorithm>
#include <cmath>
#include <limits>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/chi.hpp"

namespace magsac {

/// Parameters of the noise-scale marginalization.
struct NoiseConfig {
  double sigma_max = 10.0;   // upper bound of the noise scale, pixels
  int partitions = 10;       // d, number of sigma partitions
  double quantile = 0.99;    // quantile of the residual distribution defining tau
  double outlier_bound = 0;  // l, support of the uniform outlier residual distribution
  int rho = 2;               // residual-space dimension

  double tau_slope() const { return scoring::chi_quantile(rho, quantile); }
  double tau(double sigma) const { return sigma * tau_slope(); }

  void validate() const {
    if (!(sigma_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma_max must be positive");
    if (partitions < 2) throw Error(ErrorCode::kInvalidArgument, "partition count must be >= 2");
    if (!(quantile > 0.0 && quantile < 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile must lie in (0, 1)");
    if (rho < 1) throw Error(ErrorCode::kInvalidArgument, "rho must be >= 1");
    if (!(outlier_bound > 0.0)) throw Error(ErrorCode::kInvalidArgument, "outlier bound l must be positive");
    if (tau(sigma_max) > outlier_bound) {
      throw Error(ErrorCode::kInvalidArgument, "tau(sigma_max) exceeds the outlier bound l");
    }
  }
};

/// Default l: the residual-bearing image diagonal when known, else the
/// bounding-box diagonal of that image's observed points.
inline double default_outlier_bound(const PointSet& points) {
  const bool two_view = points.dim() == 4;
  const auto& diag = two_view ? points.image2_diag() : points.image1_diag();
  if (diag && *diag > 0.0) return *diag;
  const std::size_t off = two_view ? 2 : 0;
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (std::size_t i = 0; i < points.size(); ++i) {
    minx = std::min(minx, points(i, off));
    maxx = std::max(maxx, points(i, off));
    miny = std::min(miny, points(i, off + 1));
    maxy = std::max(maxy, points(i, off + 1));
  }
  return std::hypot(maxx - minx, maxy - miny);
}

/// NoiseConfig with the problem's default rho and the dataset's default l.
/// l is raised to tau(sigma_max) if the data extent is smaller than that.
template <Problem P>
NoiseConfig default_noise_config(const PointSet& points, double sigma_max = 10.0, int partitions = 10,
                                 double quantile = 0.99) {
  NoiseConfig cfg;
  cfg.sigma_max = sigma_max;
  cfg.partitions = partitions;
  cfg.quantile = quantile;
  cfg.rho = P::kDefaultRho;
  cfg.outlier_bound = std::max(default_outlier_bound(points), cfg.tau(sigma_max));
  return cfg;
}

}  // namespace magsac

#endif  // MAGSAC_SCORING_NOISE_CONFIG_HPP_
