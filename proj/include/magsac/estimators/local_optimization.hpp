#ifndef MAGSAC_ESTIMATORS_LOCAL_OPTIMIZATION_HPP_
#define MAGSAC_ESTIMATORS_LOCAL_OPTIMIZATION_HPP_

#include <algorithm>
#include <cstddef>
#include <vector>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/estimators/config.hpp"
#include "magsac/estimators/sampling.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/quality.hpp"

namespace magsac {

enum class QualityKind { kRansac, kMsac };

/// Inlier selector of the baselines: D < sigma (RANSAC), D^2 < 9/4 sigma^2 (MSAC).
inline double inlier_threshold(QualityKind kind, double sigma) {
  return kind == QualityKind::kRansac ? sigma : 1.5 * sigma;
}

template <Problem P>
double baseline_quality(const typename P::Model& m, const PointSet& points, QualityKind kind, double sigma) {
  const auto r = residuals<P>(m, points);
  return kind == QualityKind::kRansac ? scoring::ransac_quality(r, sigma) : scoring::msac_quality(r, sigma);
}

template <Problem P>
std::vector<std::size_t> select_inliers(const typename P::Model& m, const PointSet& points, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (P::residual(m, points.point(i)) < threshold) out.push_back(i);
  }
  return out;
}

template <class Model>
struct LocalOptimizationResult {
  Model model;
  double quality = 0.0;
  bool improved = false;
};

/// Inner RANSAC over the inliers of `best`: r non-minimal subsets of size
/// min(7m, ceil(|I|/2)) are refit and the best one by the outer quality kept.
template <Problem P>
LocalOptimizationResult<typename P::Model> local_optimization(const PointSet& points,
                                                              const typename P::Model& best, double best_quality,
                                                              const SolverConfig& cfg, QualityKind kind, Rng& rng) {
  LocalOptimizationResult<typename P::Model> out{best, best_quality, false};
  const double thr = inlier_threshold(kind, cfg.loop_sigma);
  const auto inliers = select_inliers<P>(best, points, thr);
  const std::size_t floor = std::max(P::kSampleSize, P::kNonMinimalFloor);
  if (inliers.size() < floor) return out;
  std::size_t subset = std::min<std::size_t>(7 * P::kSampleSize, (inliers.size() + 1) / 2);
  subset = std::clamp(subset, floor, inliers.size());
  for (std::size_t it = 0; it < cfg.inner_iterations; ++it) {
    const auto idx = draw_subset(rng, inliers, subset);
    typename P::Model cand;
    try {
      cand = P::weighted(points, idx, {});
    } catch (const Error&) {
      continue;
    }
    if (!P::is_valid(cand, points, select_inliers<P>(cand, points, thr))) continue;
    const double q = baseline_quality<P>(cand, points, kind, cfg.loop_sigma);
    if (q > out.quality) {
      out.model = cand;
      out.quality = q;
      out.improved = true;
    }
  }
  return out;
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_LOCAL_OPTIMIZATION_HPP_
