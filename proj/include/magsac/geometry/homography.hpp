#ifndef MAGSAC_GEOMETRY_HOMOGRAPHY_HPP_
#define MAGSAC_GEOMETRY_HOMOGRAPHY_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/normalization.hpp"

namespace magsac::geometry {

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kCollinearityArea = 1e-9;
inline constexpr double kInfiniteDepth = 1e-12;

namespace detail {

// The two DLT rows of a normalized correspondence (x, y) -> (u, v) for the
// row-major vector of H.
inline void homography_rows(double x, double y, double u, double v, Eigen::Matrix<double, 9, 1>& r1,
                            Eigen::Matrix<double, 9, 1>& r2) {
  r1 << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
  r2 << x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u;
}

inline Eigen::Matrix3d denormalize_homography(const Eigen::Matrix<double, 9, 1>& h, const Eigen::Matrix3d& t1,
                                              const Eigen::Matrix3d& t2) {
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return t2.inverse() * hn * t1;
}

}  // namespace detail

inline double triangle_area(double ax, double ay, double bx, double by, double cx, double cy) noexcept {
  return 0.5 * std::abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

/// True when no three of the four sample points are collinear in either image.
inline bool homography_sample_ok(const PointSet& points, std::span<const std::size_t> sample) {
  if (sample.size() != 4) return false;
  for (std::size_t offset : {std::size_t{0}, std::size_t{2}}) {
    for (std::size_t skip = 0; skip < 4; ++skip) {
      std::size_t tri[3];
      for (std::size_t k = 0, j = 0; k < 4; ++k) {
        if (k != skip) tri[j++] = sample[k];
      }
      const double area = triangle_area(points(tri[0], offset), points(tri[0], offset + 1), points(tri[1], offset),
                                        points(tri[1], offset + 1), points(tri[2], offset), points(tri[2], offset + 1));
      if (area <= kCollinearityArea) return false;
    }
  }
  return true;
}

/// Normalized four-point DLT.
inline Homography homography_minimal(const PointSet& points, std::span<const std::size_t> sample) {
  if (sample.size() != 4) throw Error(ErrorCode::kInvalidArgument, "homography sample needs 4 correspondences");
  if (!homography_sample_ok(points, sample)) throw Error(ErrorCode::kDegenerateSample, "collinear homography sample");
  const Eigen::Matrix3d t1 = hartley_transform(points, sample, {}, 0);
  const Eigen::Matrix3d t2 = hartley_transform(points, sample, {}, 2);
  Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 1> r1, r2;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t i = sample[k];
    const Eigen::Vector2d p = apply(t1, points(i, 0), points(i, 1));
    const Eigen::Vector2d q = apply(t2, points(i, 2), points(i, 3));
    detail::homography_rows(p.x(), p.y(), q.x(), q.y(), r1, r2);
    a.row(2 * k) = r1.transpose();
    a.row(2 * k + 1) = r2.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(7) > 0.0) || s(0) / s(7) > kConditionLimit) {
    throw Error(ErrorCode::kNumericalFailure, "ill-conditioned DLT nullspace");
  }
  return make_homography(detail::denormalize_homography(svd.matrixV().col(8), t1, t2));
}

/// Weighted normalized DLT minimizing sum_i w_i * |A_i h|^2.
inline Homography homography_weighted(const PointSet& points, std::span<const std::size_t> indices,
                                      std::span<const double> weights) {
  if (!weights.empty() && weights.size() != indices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weight count differs from index count");
  }
  std::size_t positive = 0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kInvalidArgument, "weights must be finite and >= 0");
    if (w > 0.0) ++positive;
  }
  if (positive < 4) throw Error(ErrorCode::kInsufficientSupport, "homography fit needs 4 positive-weight points");
  const Eigen::Matrix3d t1 = hartley_transform(points, indices, weights, 0);
  const Eigen::Matrix3d t2 = hartley_transform(points, indices, weights, 2);
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 1> r1, r2;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (w == 0.0) continue;
    const std::size_t i = indices[k];
    const Eigen::Vector2d p = apply(t1, points(i, 0), points(i, 1));
    const Eigen::Vector2d q = apply(t2, points(i, 2), points(i, 3));
    detail::homography_rows(p.x(), p.y(), q.x(), q.y(), r1, r2);
    m.noalias() += w * (r1 * r1.transpose() + r2 * r2.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(m);
  const auto& ev = eig.eigenvalues();
  // Singular values of the stacked system are the square roots of these.
  if (!(ev(1) > 0.0) || std::sqrt(ev(8) / ev(1)) > kConditionLimit) {
    throw Error(ErrorCode::kNumericalFailure, "ill-conditioned weighted DLT");
  }
  return make_homography(detail::denormalize_homography(eig.eigenvectors().col(0), t1, t2));
}

/// One-directional re-projection error |H p1 - p2| in image-2 pixels.
/// Returns +inf when p1 maps to infinity.
inline double homography_residual(const Homography& model, std::span<const double> p) noexcept {
  const auto& h = model.H;
  const double z = h(2, 0) * p[0] + h(2, 1) * p[1] + h(2, 2);
  if (std::abs(z) <= kInfiniteDepth) return std::numeric_limits<double>::infinity();
  const double u = (h(0, 0) * p[0] + h(0, 1) * p[1] + h(0, 2)) / z;
  const double v = (h(1, 0) * p[0] + h(1, 1) * p[1] + h(1, 2)) / z;
  return std::hypot(u - p[2], v - p[3]);
}

/// Symmetric transfer error sqrt((|H p1 - p2|^2 + |H^-1 p2 - p1|^2) / 2).
inline double homography_symmetric_transfer(const Homography& model, std::span<const double> p) {
  const double fwd = homography_residual(model, p);
  Homography inv{model.H.inverse()};
  const double q[4] = {p[2], p[3], p[0], p[1]};
  const double bwd = homography_residual(inv, q);
  return std::sqrt(0.5 * (fwd * fwd + bwd * bwd));
}

}  // namespace magsac::geometry

#endif  // MAGSAC_GEOMETRY_HOMOGRAPHY_HPP_
