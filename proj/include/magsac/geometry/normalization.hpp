#ifndef MAGSAC_GEOMETRY_NORMALIZATION_HPP_
#define MAGSAC_GEOMETRY_NORMALIZATION_HPP_

#include <cmath>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"

namespace magsac::geometry {

/// Isotropic (Hartley) normalization: translate the weighted centroid to the
/// origin and scale so the weighted mean distance from it is sqrt(2).
///
/// `offset` selects the image: 0 for (x1, y1), 2 for (x2, y2). An empty
/// weight span means unit weights. Zero-weight points do not influence the
/// transform, so integer weights behave exactly like replicated points.
inline Eigen::Matrix3d hartley_transform(const PointSet& points, std::span<const std::size_t> indices,
                                         std::span<const double> weights, std::size_t offset) {
  double sw = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    sw += w;
    cx += w * points(indices[k], offset);
    cy += w * points(indices[k], offset + 1);
  }
  if (!(sw > 0.0)) throw Error(ErrorCode::kInsufficientSupport, "no positive weight");
  cx /= sw;
  cy /= sw;
  double mean_dist = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    mean_dist += w * std::hypot(points(indices[k], offset) - cx, points(indices[k], offset + 1) - cy);
  }
  mean_dist /= sw;
  if (!(mean_dist > 1e-12)) throw Error(ErrorCode::kDegenerateSample, "all points coincide");
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0;
  return t;
}

inline Eigen::Vector2d apply(const Eigen::Matrix3d& t, double x, double y) {
  return {t(0, 0) * x + t(0, 2), t(1, 1) * y + t(1, 2)};
}

}  // namespace magsac::geometry

#endif  // MAGSAC_GEOMETRY_NORMALIZATION_HPP_
