#ifndef MAGSAC_SYNTHETIC_SCENES_HPP_
#define MAGSAC_SYNTHETIC_SCENES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/homography.hpp"
#include "magsac/geometry/line.hpp"
#include "magsac/scoring/chi.hpp"

namespace magsac::synthetic {

inline constexpr double kImageSize = 600.0;
inline constexpr double kFocal = 600.0;
inline constexpr double kPrincipal = 300.0;
inline constexpr int kMaxRetries = 100;
// Each of the three camera-2 rotation angles is drawn from [0, pi/2] degrees.
inline constexpr double kDefaultMaxRotation = std::numbers::pi / 2.0 * std::numbers::pi / 180.0;

template <class ModelT>
struct SyntheticScene {
  PointSet points;  // inliers first, then outliers; gt mask attached
  ModelT gt_model;
  double noise_sigma = 0.0;
  double outlier_ratio = 0.0;
  std::uint64_t seed = 0;

  const std::vector<bool>& gt_inlier_mask() const { return *points.gt_inlier_mask(); }
};

struct TwoViewSetup {
  Eigen::Matrix3d K;
  Eigen::Matrix3d R2;
  Eigen::Vector3d t2;  // second camera centre
};

/// Outliers closer than this to the ground-truth homography are redrawn:
/// tau(sigma_max = 10 px) for a 2D residual at the 0.99 quantile.
inline double outlier_exclusion_radius() { return scoring::tau(10.0, 2, 0.99); }

inline Eigen::Matrix3d intrinsics() {
  Eigen::Matrix3d k;
  k << kFocal, 0.0, kPrincipal, 0.0, kFocal, kPrincipal, 0.0, 0.0, 1.0;
  return k;
}

namespace detail {

inline Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

inline Eigen::Vector3d random_in_unit_ball(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(u(rng), u(rng), u(rng));
  } while (v.squaredNorm() > 1.0);
  return v;
}

inline Eigen::Vector2d random_in_unit_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Vector2d v;
  do {
    v = Eigen::Vector2d(u(rng), u(rng));
  } while (v.squaredNorm() > 1.0);
  return v;
}

inline Eigen::Matrix3d rotation_xyz(double alpha, double beta, double gamma) {
  return (Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitX()) * Eigen::AngleAxisd(beta, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(gamma, Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

inline std::size_t outlier_count(double outlier_ratio, std::size_t n_total) {
  return static_cast<std::size_t>(std::llround(outlier_ratio * static_cast<double>(n_total)));
}

}  // namespace detail

/// Two cameras observing a random plane through (0, 0, 5).
///
/// P1 = K[I|0], P2 = K[R2 | -R2 t2] with |t2| <= 1 and R2 = Rx Ry Rz over
/// angles in [0, max_rotation] radians (default pi/2 degrees). Inliers are
/// plane points within unit distance of the plane origin projected into both
/// views plus N(0, sigma) pixel noise;
/// outliers are uniform over [0, 600]^2 in each image. Configurations with a
/// point behind (or within 1e-3 of) camera 2, or a plane passing within 0.25
/// of either camera centre, are redrawn.
inline SyntheticScene<Homography> generate_homography_scene(double noise_sigma, double outlier_ratio,
                                                            std::size_t n_total, std::uint64_t seed,
                                                            double max_rotation = kDefaultMaxRotation) {
  if (n_total < 8) throw Error(ErrorCode::kInvalidArgument, "need at least 8 points");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0)) throw Error(ErrorCode::kInvalidArgument, "outlier ratio in [0,1)");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise must be >= 0");
  std::mt19937_64 rng(seed);
  const std::size_t n_out = detail::outlier_count(outlier_ratio, n_total);
  const std::size_t n_in = n_total - n_out;
  const Eigen::Matrix3d K = intrinsics();
  const Eigen::Vector3d origin(0.0, 0.0, 5.0);
  if (!(max_rotation >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "rotation range must be >= 0");
  std::uniform_real_distribution<double> angle(0.0, max_rotation);

  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    const Eigen::Vector3d t2 = detail::random_in_unit_ball(rng);
    const double a = angle(rng), b = angle(rng), g = angle(rng);
    const Eigen::Matrix3d R2 = detail::rotation_xyz(a, b, g);
    const Eigen::Vector3d u0 = detail::random_unit_vector(rng);
    Eigen::Vector3d v0 = detail::random_unit_vector(rng);
    v0 -= v0.dot(u0) * u0;
    if (v0.norm() < 1e-6) continue;
    const Eigen::Vector3d u = u0, v = v0.normalized();
    const Eigen::Vector3d normal = u.cross(v);
    const double d0 = normal.dot(origin);
    if (std::abs(d0) < 0.25 || std::abs(normal.dot(t2) - d0) < 0.25) continue;

    std::vector<Eigen::Vector3d> world(n_in);
    bool visible = true;
    for (auto& X : world) {
      const Eigen::Vector2d c = detail::random_in_unit_disk(rng);
      X = origin + c.x() * u + c.y() * v;
      if ((R2 * (X - t2)).z() <= 1e-3) visible = false;
    }
    if (!visible) continue;

    const Eigen::Matrix3d H = K * R2 * (Eigen::Matrix3d::Identity() - t2 * normal.transpose() / d0) * K.inverse();
    SyntheticScene<Homography> scene;
    scene.gt_model = make_homography(H);
    scene.noise_sigma = noise_sigma;
    scene.outlier_ratio = outlier_ratio;
    scene.seed = seed;

    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> coords;
    coords.reserve(4 * n_total);
    for (const auto& X : world) {
      const Eigen::Vector3d p1 = K * X;
      const Eigen::Vector3d p2 = K * (R2 * (X - t2));
      coords.push_back(p1.x() / p1.z() + noise_sigma * noise(rng));
      coords.push_back(p1.y() / p1.z() + noise_sigma * noise(rng));
      coords.push_back(p2.x() / p2.z() + noise_sigma * noise(rng));
      coords.push_back(p2.y() / p2.z() + noise_sigma * noise(rng));
    }
    std::uniform_real_distribution<double> img(0.0, kImageSize);
    const double exclusion = outlier_exclusion_radius();
    for (std::size_t k = 0; k < n_out; ++k) {
      double c[4];
      for (int tries = 0;; ++tries) {
        for (double& x : c) x = img(rng);
        if (geometry::homography_residual(scene.gt_model, c) > exclusion || tries >= 1000) break;
      }
      coords.insert(coords.end(), c, c + 4);
    }
    scene.points = PointSet(4, std::move(coords));
    const double diag = kImageSize * std::sqrt(2.0);
    scene.points.set_image_diags(diag, diag);
    std::vector<bool> mask(n_total, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_in), true);
    scene.points.set_gt_inlier_mask(std::move(mask));
    return scene;
  }
  throw Error(ErrorCode::kRetryExhausted, "no valid camera/plane configuration in 100 attempts");
}

/// Random line through a width x height box; inliers spread along its chord
/// and displaced perpendicularly by N(0, sigma); outliers uniform in the box.
inline SyntheticScene<Line2D> generate_line_scene(double noise_sigma, double outlier_ratio, std::size_t n_total,
                                                  double width, double height, std::uint64_t seed) {
  if (n_total < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 points");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0)) throw Error(ErrorCode::kInvalidArgument, "outlier ratio in [0,1)");
  if (!(width > 0.0 && height > 0.0)) throw Error(ErrorCode::kInvalidArgument, "box must be non-empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  Eigen::Vector2d p0, p1;
  do {
    p0 = {ux(rng), uy(rng)};
    p1 = {ux(rng), uy(rng)};
  } while ((p1 - p0).norm() < 0.1 * std::min(width, height));
  const Line2D line = geometry::line_from_two_points(p0, p1);
  const Eigen::Vector2d dir = (p1 - p0).normalized();
  const Eigen::Vector2d normal(line.a, line.b);

  // Chord of the line inside the box: p0 + t * dir.
  double tmin = -std::numeric_limits<double>::infinity(), tmax = std::numeric_limits<double>::infinity();
  const double lo[2] = {0.0, 0.0}, hi[2] = {width, height};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(dir(k)) < 1e-12) continue;
    double ta = (lo[k] - p0(k)) / dir(k), tb = (hi[k] - p0(k)) / dir(k);
    if (ta > tb) std::swap(ta, tb);
    tmin = std::max(tmin, ta);
    tmax = std::min(tmax, tb);
  }
  std::uniform_real_distribution<double> along(tmin, tmax);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t n_out = detail::outlier_count(outlier_ratio, n_total);
  const std::size_t n_in = n_total - n_out;
  std::vector<double> coords;
  coords.reserve(2 * n_total);
  for (std::size_t k = 0; k < n_in; ++k) {
    const Eigen::Vector2d q = p0 + along(rng) * dir + noise_sigma * noise(rng) * normal;
    coords.push_back(q.x());
    coords.push_back(q.y());
  }
  for (std::size_t k = 0; k < n_out; ++k) {
    coords.push_back(ux(rng));
    coords.push_back(uy(rng));
  }
  SyntheticScene<Line2D> scene;
  scene.points = PointSet(2, std::move(coords));
  scene.points.set_image_diags(std::hypot(width, height), std::nullopt);
  std::vector<bool> mask(n_total, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_in), true);
  scene.points.set_gt_inlier_mask(std::move(mask));
  scene.gt_model = line;
  scene.noise_sigma = noise_sigma;
  scene.outlier_ratio = outlier_ratio;
  scene.seed = seed;
  return scene;
}

}  // namespace magsac::synthetic

#endif  // MAGSAC_SYNTHETIC_SCENES_HPP_
