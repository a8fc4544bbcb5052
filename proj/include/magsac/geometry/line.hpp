#ifndef MAGSAC_GEOMETRY_LINE_HPP_
#define MAGSAC_GEOMETRY_LINE_HPP_

#include <cmath>
#include <cstddef>
#include <span>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"

namespace magsac::geometry {

inline constexpr double kCoincidenceTolerance = 1e-12;

/// Line through two distinct points.
inline Line2D line_from_two_points(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2) {
  const Eigen::Vector2d d = p2 - p1;
  if (d.norm() <= kCoincidenceTolerance) {
    throw Error(ErrorCode::kDegenerateSample, "line sample points coincide");
  }
  // Normal is the direction rotated by 90 degrees.
  const double a = -d.y();
  const double b = d.x();
  return make_line(a, b, -(a * p1.x() + b * p1.y()));
}

/// Perpendicular point-to-line distance in pixels.
inline double line_residual(const Line2D& line, double x, double y) noexcept {
  return std::abs(line.a * x + line.b * y + line.c);
}

/// Weighted total least-squares line fit over `indices` of a 2D point set.
inline Line2D line_weighted(const PointSet& points, std::span<const std::size_t> indices,
                            std::span<const double> weights) {
  std::size_t positive = 0;
  double sw = 0.0;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kInvalidArgument, "weights must be finite and >= 0");
    if (w > 0.0) ++positive;
    sw += w;
    c += w * Eigen::Vector2d(points(indices[k], 0), points(indices[k], 1));
  }
  if (positive < 2) throw Error(ErrorCode::kInsufficientSupport, "line fit needs two positive-weight points");
  c /= sw;
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    const Eigen::Vector2d d = Eigen::Vector2d(points(indices[k], 0), points(indices[k], 1)) - c;
    scatter += w * d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  if (!(eig.eigenvalues()(1) > kCoincidenceTolerance * kCoincidenceTolerance * sw)) {
    throw Error(ErrorCode::kDegenerateSample, "all weighted points coincide");
  }
  const Eigen::Vector2d n = eig.eigenvectors().col(0);
  return make_line(n.x(), n.y(), -n.dot(c));
}

}  // namespace magsac::geometry

#endif  // MAGSAC_GEOMETRY_LINE_HPP_
