#ifndef MAGSAC_ESTIMATORS_MAGSAC_HPP_
#define MAGSAC_ESTIMATORS_MAGSAC_HPP_

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
#include "magsac/estimators/validation.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/quality.hpp"

namespace magsac {

/// MAGSAC: every minimal-sample model that survives validation is refined by
/// sigma-consensus and scored by the marginalized quality. The iteration
/// bound is recomputed from the marginalized criterion on each improvement.
template <Problem P>
EstimationResult<typename P::Model> magsac(const PointSet& points, const SolverConfig& cfg) {
  using Model = typename P::Model;
  cfg.validate();
  const std::size_t n = points.size();
  const std::size_t m = P::kSampleSize;
  if (n < m) throw Error(ErrorCode::kInsufficientSupport, "fewer points than the minimal sample size");
  const auto start = std::chrono::steady_clock::now();

  EstimationResult<Model> res;
  Rng rng(cfg.seed);
  const double reference_threshold = cfg.noise.tau(cfg.reference_sigma);
  const SigmaConsensusOptions sc_opts{cfg.threads};
  BestContext best;
  double best_q = -std::numeric_limits<double>::infinity();
  std::size_t required = cfg.max_iterations;
  std::vector<std::size_t> sample;

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
      const auto check = validate_model<P>(model, points, sample, reference_threshold, best);
      if (!check.valid) continue;
      auto sc = sigma_consensus<P>(points, model, cfg.noise, sc_opts);
      const auto profile = scoring::build_residual_profile<P>(sc.refined_model, points, cfg.noise);
      const double q = scoring::magsac_quality(profile, cfg.noise);
      if (!(q > best_q)) continue;
      auto support = select_inliers<P>(sc.refined_model, points, reference_threshold);
      if (!P::is_valid(sc.refined_model, points, support)) continue;
      best_q = q;
      best.reference_count = check.reference_count;
      res.model = sc.refined_model;
      res.quality = q;
      res.weights = std::move(sc.weights);
      res.inliers = std::move(support);
      res.failed = false;
      required = marginalized_iteration_bound(profile, m, cfg.confidence, cfg.noise, cfg.max_iterations);
      if (cfg.record_trace) res.trace.push_back({res.iterations, best_q, required});
    }
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_MAGSAC_HPP_
