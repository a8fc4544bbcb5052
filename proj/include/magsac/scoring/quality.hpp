#ifndef MAGSAC_SCORING_QUALITY_HPP_
#define MAGSAC_SCORING_QUALITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "magsac/core/types.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/chi.hpp"
#include "magsac/scoring/noise_config.hpp"

namespace magsac::scoring {

/// Floor applied to residuals before taking their logarithm.
inline constexpr double kResidualFloor = 1e-9;

// Residual-level quality functions. The model-level overloads below evaluate
// the problem residual and forward here.

inline double ransac_quality(std::span<const double> residuals, double sigma) {
  double q = 0.0;
  for (double d : residuals) q += d < sigma ? 1.0 : 0.0;
  return q;
}

/// Truncated quadratic: sum of 1 - D^2 / (9/4 sigma^2) over D^2 < 9/4 sigma^2.
inline double msac_quality(std::span<const double> residuals, double sigma) {
  const double t2 = 2.25 * sigma * sigma;
  double q = 0.0;
  for (double d : residuals) {
    const double d2 = d * d;
    if (d2 < t2) q += 1.0 - d2 / t2;
  }
  return q;
}

/// Inlier count marginalized over sigma ~ U(0, sigma_max).
inline double marginal_ransac_quality(std::span<const double> residuals, double sigma_max) {
  double q = 0.0;
  for (double d : residuals) {
    if (d < sigma_max) q += 1.0 - d / sigma_max;
  }
  return q;
}

/// Log-likelihood of uniform inlier/outlier models marginalized over sigma.
inline double uniform_loglik_quality(std::span<const double> residuals, double sigma_max, double l) {
  double k = 0.0, sum = 0.0;
  for (double d : residuals) {
    if (d < sigma_max) {
      const double dc = std::max(d, kResidualFloor);
      k += 1.0;
      sum += dc * (1.0 + std::log(l / dc));
    }
  }
  return k * (std::log(l / sigma_max) + 1.0) - sum / sigma_max -
         static_cast<double>(residuals.size()) * std::log(l);
}

/// Sorted residuals below tau(sigma_max) with the prefix sums used by the
/// marginalized quality and iteration bound.
struct ResidualProfile {
  std::vector<std::pair<double, std::size_t>> sorted;  // (residual, point index), all points, ascending
  std::size_t point_count = 0;
  std::size_t K = 0;            // residuals strictly below tau(sigma_max)
  std::vector<double> sigma;    // sigma_i = D_i / tau slope, i < K (floored residual)
  std::vector<double> R;        // 1/2 sum_{j<=i} D_j^2
  std::vector<double> Lr;       // sum_{j<=i} ln max(D_j, floor)
};

inline ResidualProfile build_residual_profile(std::span<const double> residuals, const NoiseConfig& cfg) {
  ResidualProfile prof;
  prof.point_count = residuals.size();
  prof.sorted.reserve(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); ++i) prof.sorted.emplace_back(residuals[i], i);
  std::sort(prof.sorted.begin(), prof.sorted.end());
  const double slope = cfg.tau_slope();
  const double limit = cfg.sigma_max * slope;
  while (prof.K < prof.sorted.size() && prof.sorted[prof.K].first < limit) ++prof.K;
  prof.sigma.resize(prof.K);
  prof.R.resize(prof.K);
  prof.Lr.resize(prof.K);
  double r = 0.0, lr = 0.0;
  for (std::size_t i = 0; i < prof.K; ++i) {
    const double d = prof.sorted[i].first;
    const double dc = std::max(d, kResidualFloor);
    r += 0.5 * d * d;
    lr += std::log(dc);
    prof.R[i] = r;
    prof.Lr[i] = lr;
    prof.sigma[i] = dc / slope;
  }
  return prof;
}

/// Marginalized log-likelihood quality; higher is better.
///
/// Averages ln L(theta, P | sigma) over sigma in (0, sigma_max]. Between two
/// consecutive residual-induced grid points sigma_i < sigma_{i+1} the inlier
/// set is exactly the first i sorted points, so each interval is integrated in
/// closed form from R_i, Lr_i and i. The last interval ends at sigma_max.
inline double magsac_quality(const ResidualProfile& prof, const NoiseConfig& cfg) {
  const double rho = cfg.rho;
  const double log_2cl = std::log(2.0 * chi_norm_constant(cfg.rho) * cfg.outlier_bound);
  auto x_log_x = [](double s) { return s * std::log(s) - s; };
  double sum = 0.0;
  for (std::size_t k = 0; k < prof.K; ++k) {
    const double i = static_cast<double>(k + 1);
    const double a = prof.sigma[k];
    const double b = k + 1 < prof.K ? prof.sigma[k + 1] : cfg.sigma_max;
    if (!(b > a)) continue;
    sum += (b - a) * (i * log_2cl + (rho - 1.0) * prof.Lr[k]) - i * rho * (x_log_x(b) - x_log_x(a)) -
           prof.R[k] * (1.0 / a - 1.0 / b);
  }
  return -static_cast<double>(prof.point_count) * std::log(cfg.outlier_bound) + sum / cfg.sigma_max;
}

template <Problem P>
double ransac_quality(const typename P::Model& m, double sigma, const PointSet& pts) {
  return ransac_quality(residuals<P>(m, pts), sigma);
}

template <Problem P>
double msac_quality(const typename P::Model& m, double sigma, const PointSet& pts) {
  return msac_quality(residuals<P>(m, pts), sigma);
}

template <Problem P>
double marginal_ransac_quality(const typename P::Model& m, const PointSet& pts, const NoiseConfig& cfg) {
  return marginal_ransac_quality(residuals<P>(m, pts), cfg.sigma_max);
}

template <Problem P>
double uniform_loglik_quality(const typename P::Model& m, const PointSet& pts, const NoiseConfig& cfg) {
  return uniform_loglik_quality(residuals<P>(m, pts), cfg.sigma_max, cfg.outlier_bound);
}

template <Problem P>
ResidualProfile build_residual_profile(const typename P::Model& m, const PointSet& pts, const NoiseConfig& cfg) {
  return build_residual_profile(residuals<P>(m, pts), cfg);
}

template <Problem P>
double magsac_quality(const typename P::Model& m, const PointSet& pts, const NoiseConfig& cfg) {
  return magsac_quality(build_residual_profile<P>(m, pts, cfg), cfg);
}

}  // namespace magsac::scoring

#endif  // MAGSAC_SCORING_QUALITY_HPP_
