#ifndef MAGSAC_ESTIMATORS_RANSAC_HPP_
#define MAGSAC_ESTIMATORS_RANSAC_HPP_

#include <chrono>
#include <cstddef>
#include <limits>
#include <vector>

#include "magsac/consensus/sigma_consensus.hpp"
#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/estimators/config.hpp"
#include "magsac/estimators/local_optimization.hpp"
#include "magsac/estimators/sampling.hpp"
#include "magsac/estimators/termination.hpp"
#include "magsac/geometry/problems.hpp"

namespace magsac {

// Local optimization draws from its own stream so that LO and non-LO
// variants with the same seed see the same minimal samples.
inline constexpr std::uint64_t kLocalOptimizationStream = 0x9e3779b97f4a7c15ULL;

/// RANSAC / MSAC (optionally LO-) loop with the standard termination
/// criterion, a final least-squares polish on the inliers, and optional
/// sigma-consensus post-processing.
template <Problem P>
EstimationResult<typename P::Model> ransac_family(const PointSet& points, const SolverConfig& cfg, QualityKind kind) {
  using Model = typename P::Model;
  cfg.validate();
  const std::size_t n = points.size();
  const std::size_t m = P::kSampleSize;
  if (n < m) throw Error(ErrorCode::kInsufficientSupport, "fewer points than the minimal sample size");
  const auto start = std::chrono::steady_clock::now();

  EstimationResult<Model> res;
  Rng rng(cfg.seed);
  Rng lo_rng(cfg.seed ^ kLocalOptimizationStream);
  const double thr = inlier_threshold(kind, cfg.loop_sigma);
  double best_q = -std::numeric_limits<double>::infinity();
  std::size_t required = cfg.max_iterations;
  std::vector<std::size_t> sample;

  auto update_required = [&](const Model& model) {
    required = standard_iteration_bound(select_inliers<P>(model, points, thr).size(), n, m, cfg.confidence,
                                        cfg.max_iterations);
  };

  while (res.iterations < std::max(required, cfg.min_iterations) && res.iterations < cfg.max_iterations) {
    ++res.iterations;
    draw_minimal_sample(rng, n, m, sample);
    ++res.samples_drawn;
    if (!degeneracy_test<P>(points, sample)) continue;
    std::vector<Model> models;
    try {
      models = P::minimal(points, sample);
    } catch (const Error&) {
      continue;
    }
    for (const Model& model : models) {
      if (!P::is_valid(model, points, sample)) continue;
      const double q = baseline_quality<P>(model, points, kind, cfg.loop_sigma);
      if (!(q > best_q)) continue;
      if (!P::is_valid(model, points, select_inliers<P>(model, points, thr))) continue;
      best_q = q;
      res.model = model;
      res.failed = false;
      update_required(model);
      if (cfg.enable_lo && res.iterations >= cfg.min_iterations) {
        const auto lo = local_optimization<P>(points, res.model, best_q, cfg, kind, lo_rng);
        if (lo.improved) {
          best_q = lo.quality;
          res.model = lo.model;
          update_required(lo.model);
        }
      }
      if (cfg.record_trace) res.trace.push_back({res.iterations, best_q, required});
    }
  }

  if (!res.failed) {
    const auto inliers = select_inliers<P>(res.model, points, thr);
    if (inliers.size() >= std::max(m, P::kNonMinimalFloor)) {
      try {
        const Model polished = P::weighted(points, inliers, {});
        if (P::is_valid(polished, points, select_inliers<P>(polished, points, thr))) res.model = polished;
      } catch (const Error&) {
      }
    }
    if (cfg.enable_post_sigma) {
      const auto sc = sigma_consensus<P>(points, res.model, cfg.noise, {cfg.threads});
      if (!sc.refinement_skipped &&
          P::is_valid(sc.refined_model, points, select_inliers<P>(sc.refined_model, points, thr))) {
        res.model = sc.refined_model;
        res.weights = sc.weights;
      }
    }
    res.quality = baseline_quality<P>(res.model, points, kind, cfg.loop_sigma);
    res.inliers = select_inliers<P>(res.model, points, thr);
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_RANSAC_HPP_
