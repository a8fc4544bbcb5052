#ifndef MAGSAC_CONSENSUS_SIGMA_CONSENSUS_HPP_
#define MAGSAC_CONSENSUS_SIGMA_CONSENSUS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/chi.hpp"
#include "magsac/scoring/noise_config.hpp"
#include "magsac/scoring/quality.hpp"

namespace magsac {

/// Uniform partition of (0, sigma_max] into d bins.
struct PartitionSchedule {
  double delta_sigma = 0.0;
  std::vector<double> bin_uppers;
};

inline PartitionSchedule make_partition_schedule(double sigma_max, int partitions) {
  if (partitions < 1 || !(sigma_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "invalid partition schedule");
  PartitionSchedule s;
  s.delta_sigma = sigma_max / partitions;
  s.bin_uppers.resize(static_cast<std::size_t>(partitions));
  for (int b = 0; b < partitions; ++b) s.bin_uppers[static_cast<std::size_t>(b)] = (b + 1) * s.delta_sigma;
  s.bin_uppers.back() = sigma_max;
  return s;
}

/// One summand of the marginalized point likelihood, without the global
/// 1/sigma_max factor: 2 C(rho) delta sigma^-rho D^(rho-1) exp(-D^2 / 2 sigma^2).
inline double point_weight_contribution(double residual, double sigma, double delta, int rho) {
  if (!std::isfinite(residual)) return 0.0;
  return 2.0 * scoring::chi_norm_constant(rho) * delta * std::pow(sigma, -rho) * std::pow(residual, rho - 1) *
         std::exp(-residual * residual / (2.0 * sigma * sigma));
}

template <class Model>
struct SigmaConsensusResult {
  Model refined_model;
  std::vector<double> weights;                   // one per input point; zero outside the gate
  std::size_t bins_used = 0;                     // partitions that produced a fit
  std::vector<std::size_t> gated_inlier_indices; // residual < tau(sigma_max) under the input model
  bool refinement_skipped = false;               // input model returned unchanged
};

struct SigmaConsensusOptions {
  unsigned threads = 1;
};

/// Noise-marginalized refinement of `theta`.
///
/// Points within tau(sigma_max) of theta are sorted by residual. For each of
/// the d partitions of (0, max sigma_i], the points below the partition's
/// upper sigma are refit with unit weights and every gated point accumulates
/// its likelihood under that fit. The accumulated likelihoods are the weights
/// of the final weighted least-squares fit. Per-bin contributions are summed
/// in bin order, so the threaded path is bit-identical to the serial one.
template <Problem P>
SigmaConsensusResult<typename P::Model> sigma_consensus(const PointSet& points, const typename P::Model& theta,
                                                        const NoiseConfig& cfg,
                                                        const SigmaConsensusOptions& opts = {}) {
  using Model = typename P::Model;
  SigmaConsensusResult<Model> out;
  out.refined_model = theta;
  out.weights.assign(points.size(), 0.0);

  const double slope = cfg.tau_slope();
  const double gate = cfg.sigma_max * slope;
  std::vector<std::pair<double, std::size_t>> gated;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = P::residual(theta, points.point(i));
    if (d < gate) gated.emplace_back(d, i);
  }
  std::sort(gated.begin(), gated.end());
  out.gated_inlier_indices.reserve(gated.size());
  for (const auto& g : gated) out.gated_inlier_indices.push_back(g.second);
  if (gated.size() < P::kSampleSize || gated.size() < P::kNonMinimalFloor) {
    out.refinement_skipped = true;
    return out;
  }

  const double sigma_top = std::max(gated.back().first, scoring::kResidualFloor) / slope;
  const PartitionSchedule schedule = make_partition_schedule(sigma_top, cfg.partitions);
  const std::size_t bins = schedule.bin_uppers.size();
  const std::size_t gated_n = gated.size();

  // Prefix sizes per bin: points with sigma_i <= bin upper.
  std::vector<std::size_t> prefix(bins);
  std::size_t c = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double upper = schedule.bin_uppers[b];
    while (c < gated_n && gated[c].first / slope <= upper) ++c;
    prefix[b] = b + 1 == bins ? gated_n : c;
  }
  const std::vector<std::size_t>& order = out.gated_inlier_indices;

  std::vector<std::vector<double>> bin_weights(bins);
  std::vector<char> bin_ok(bins, 0);
  auto run_bin = [&](std::size_t b) {
    if (prefix[b] < P::kNonMinimalFloor) return;
    Model fit;
    try {
      fit = P::weighted(points, std::span<const std::size_t>(order.data(), prefix[b]), {});
    } catch (const Error&) {
      return;
    }
    const double sigma = schedule.bin_uppers[b];
    auto& w = bin_weights[b];
    w.resize(gated_n);
    for (std::size_t k = 0; k < gated_n; ++k) {
      const double d = P::residual(fit, points.point(order[k]));
      w[k] = point_weight_contribution(d, sigma, schedule.delta_sigma, cfg.rho) / sigma_top;
    }
    bin_ok[b] = 1;
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(bins)));
  if (threads == 1) {
    for (std::size_t b = 0; b < bins; ++b) run_bin(b);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t b = t; b < bins; b += threads) run_bin(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> weights(gated_n, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    if (!bin_ok[b]) continue;
    ++out.bins_used;
    for (std::size_t k = 0; k < gated_n; ++k) weights[k] += bin_weights[b][k];
  }

  std::size_t positive = 0;
  for (double w : weights) positive += w > 0.0 ? 1 : 0;
  if (positive < P::kSampleSize || positive < P::kNonMinimalFloor) {
    out.refinement_skipped = true;
    return out;
  }
  try {
    Model refined = P::weighted(points, order, weights);
    if (!satisfies_invariants(refined)) {
      out.refinement_skipped = true;
      return out;
    }
    out.refined_model = refined;
  } catch (const Error&) {
    out.refinement_skipped = true;
    return out;
  }
  for (std::size_t k = 0; k < gated_n; ++k) out.weights[order[k]] = weights[k];
  return out;
}

/// sigma-consensus applied once to a finished estimate.
template <Problem P>
typename P::Model post_process(const PointSet& points, const typename P::Model& theta, const NoiseConfig& cfg,
                               const SigmaConsensusOptions& opts = {}) {
  return sigma_consensus<P>(points, theta, cfg, opts).refined_model;
}

}  // namespace magsac

#endif  // MAGSAC_CONSENSUS_SIGMA_CONSENSUS_HPP_
