#ifndef MAGSAC_HARNESS_EVALUATE_HPP_
#define MAGSAC_HARNESS_EVALUATE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/homography.hpp"
#include "magsac/geometry/problems.hpp"

namespace magsac::harness {

inline constexpr double kDefaultFailureThreshold = 45.0;  // pixels

struct Evaluation {
  double error_rms = std::numeric_limits<double>::quiet_NaN();
  bool failed = true;
};

/// RMS of the problem residual over the ground-truth inliers. A run fails
/// when no model was returned or the error exceeds `failure_threshold`.
template <Problem P>
Evaluation evaluate(const std::optional<typename P::Model>& model, const PointSet& points,
                    double failure_threshold = kDefaultFailureThreshold) {
  const auto inliers = points.gt_inlier_indices();
  Evaluation ev;
  if (!model) return ev;
  if (inliers.empty()) throw Error(ErrorCode::kMissingGroundTruth, "ground truth has no inliers");
  double sum = 0.0;
  for (std::size_t i : inliers) {
    const double r = P::residual(*model, points.point(i));
    sum += r * r;
  }
  ev.error_rms = std::sqrt(sum / static_cast<double>(inliers.size()));
  ev.failed = !(ev.error_rms <= failure_threshold);
  return ev;
}

template <Problem P>
Evaluation evaluate(const typename P::Model& model, const PointSet& points,
                    double failure_threshold = kDefaultFailureThreshold) {
  return evaluate<P>(std::optional<typename P::Model>(model), points, failure_threshold);
}

/// Symmetric-transfer RMS over the ground-truth inliers; an alternative
/// homography metric.
inline double symmetric_transfer_rms(const Homography& model, const PointSet& points) {
  const auto inliers = points.gt_inlier_indices();
  if (inliers.empty()) throw Error(ErrorCode::kMissingGroundTruth, "ground truth has no inliers");
  double sum = 0.0;
  for (std::size_t i : inliers) {
    const double r = geometry::homography_symmetric_transfer(model, points.point(i));
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(inliers.size()));
}

}  // namespace magsac::harness

#endif  // MAGSAC_HARNESS_EVALUATE_HPP_
