#ifndef MAGSAC_ESTIMATORS_TERMINATION_HPP_
#define MAGSAC_ESTIMATORS_TERMINATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "magsac/scoring/noise_config.hpp"
#include "magsac/scoring/quality.hpp"

namespace magsac {

inline constexpr double kMinInlierRatio = 1e-9;

namespace detail {

// Unrounded ln(1 - eta) / ln(1 - ratio^m) with the ratio kept off 0 and 1.
inline double raw_iterations(double inlier_count, double n, std::size_t m, double confidence) {
  const double ratio = std::clamp(inlier_count / n, kMinInlierRatio, 1.0 - kMinInlierRatio);
  return std::log1p(-confidence) / std::log1p(-std::pow(ratio, static_cast<double>(m)));
}

inline std::size_t round_and_clamp(double k, std::size_t max_iterations) {
  if (!(k < static_cast<double>(max_iterations))) return std::max<std::size_t>(max_iterations, 1);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(k)));
}

}  // namespace detail

/// Number of samples needed to draw an all-inlier sample with confidence eta.
inline std::size_t standard_iteration_bound(std::size_t inlier_count, std::size_t n, std::size_t m,
                                            double confidence, std::size_t max_iterations = 100000) {
  return detail::round_and_clamp(
      detail::raw_iterations(static_cast<double>(inlier_count), static_cast<double>(n), m, confidence),
      max_iterations);
}

/// Iteration bound averaged over sigma ~ U(0, sigma_max). The interval
/// (sigma_{i-1}, sigma_i] counts i inliers; (sigma_K, sigma_max] counts K.
inline std::size_t marginalized_iteration_bound(const scoring::ResidualProfile& prof, std::size_t m,
                                                double confidence, const NoiseConfig& cfg,
                                                std::size_t max_iterations = 100000) {
  const double n = static_cast<double>(prof.point_count);
  double sum = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < prof.K; ++k) {
    const double s = std::min(prof.sigma[k], cfg.sigma_max);
    sum += (s - prev) * detail::raw_iterations(static_cast<double>(k + 1), n, m, confidence);
    prev = s;
  }
  sum += (cfg.sigma_max - prev) * detail::raw_iterations(static_cast<double>(prof.K), n, m, confidence);
  return detail::round_and_clamp(sum / cfg.sigma_max, max_iterations);
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_TERMINATION_HPP_
