#ifndef MAGSAC_GEOMETRY_FUNDAMENTAL_HPP_
#define MAGSAC_GEOMETRY_FUNDAMENTAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/homography.hpp"
#include "magsac/geometry/normalization.hpp"

namespace magsac::geometry {

inline constexpr double kImaginaryTolerance = 1e-9;
inline constexpr double kVanishingGradient = 1e-15;

namespace detail {

inline Eigen::Matrix<double, 9, 1> epipolar_row(double x, double y, double u, double v) {
  Eigen::Matrix<double, 9, 1> r;
  r << u * x, u * y, u, v * x, v * y, v, x, y, 1.0;
  return r;
}

inline Eigen::Matrix3d reshape(const Eigen::Matrix<double, 9, 1>& f) {
  Eigen::Matrix3d m;
  m << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
  return m;
}

inline Eigen::Matrix3d enforce_rank2(const Eigen::Matrix3d& f) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d s = svd.singularValues();
  s(2) = 0.0;
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

inline bool collinear_run(const PointSet& points, std::span<const std::size_t> sample, std::size_t offset,
                          std::size_t run) {
  const std::size_t n = sample.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ax = points(sample[i], offset), ay = points(sample[i], offset + 1);
      const double bx = points(sample[j], offset), by = points(sample[j], offset + 1);
      if (std::hypot(bx - ax, by - ay) <= 1e-12) continue;
      std::size_t count = 2;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (triangle_area(ax, ay, bx, by, points(sample[k], offset), points(sample[k], offset + 1)) <=
            kCollinearityArea) {
          ++count;
        }
      }
      if (count >= run) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, accepting complex pairs whose
/// imaginary part is within kImaginaryTolerance. Falls back to the quadratic
/// or linear case when leading coefficients vanish.
inline std::vector<double> solve_cubic(double c3, double c2, double c1, double c0) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0.0) return roots;
  if (std::abs(c3) <= 1e-14 * scale) {
    if (std::abs(c2) <= 1e-14 * scale) {
      if (std::abs(c1) > 0.0) roots.push_back(-c0 / c1);
      return roots;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
      roots.push_back(q / c2);
      if (q != 0.0) roots.push_back(c0 / q);
    } else if (std::sqrt(-disc) / (2.0 * std::abs(c2)) <= kImaginaryTolerance) {
      roots.push_back(-c1 / (2.0 * c2));
    }
    return roots;
  }
  const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  const double shift = -b / 3.0;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v + shift);
    // Complex pair -(u+v)/2 +- i*sqrt(3)/2*(u-v).
    if (std::sqrt(3.0) / 2.0 * std::abs(u - v) <= kImaginaryTolerance) roots.push_back(-(u + v) / 2.0 + shift);
  } else if (p == 0.0) {
    roots.push_back(shift);
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
  }
  // Newton polish on the monic polynomial.
  for (double& x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3.0 * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      const double step = f / df;
      if (!std::isfinite(step)) break;
      x -= step;
    }
  }
  return roots;
}

/// True when no five of the seven sample points are collinear in either image.
inline bool fundamental_sample_ok(const PointSet& points, std::span<const std::size_t> sample) {
  if (sample.size() != 7) return false;
  return !detail::collinear_run(points, sample, 0, 5) && !detail::collinear_run(points, sample, 2, 5);
}

/// Normalized seven-point solver; returns every real solution of the
/// determinant cubic (one to three models).
inline std::vector<FundamentalMatrix> fundamental_minimal(const PointSet& points,
                                                          std::span<const std::size_t> sample) {
  if (sample.size() != 7) throw Error(ErrorCode::kInvalidArgument, "fundamental sample needs 7 correspondences");
  if (!fundamental_sample_ok(points, sample)) throw Error(ErrorCode::kDegenerateSample, "collinear F sample");
  const Eigen::Matrix3d t1 = hartley_transform(points, sample, {}, 0);
  const Eigen::Matrix3d t2 = hartley_transform(points, sample, {}, 2);
  Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
  for (std::size_t k = 0; k < 7; ++k) {
    const std::size_t i = sample[k];
    const Eigen::Vector2d p = apply(t1, points(i, 0), points(i, 1));
    const Eigen::Vector2d q = apply(t2, points(i, 2), points(i, 3));
    a.row(k) = detail::epipolar_row(p.x(), p.y(), q.x(), q.y()).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(6) > 0.0) || s(0) / s(6) > kConditionLimit) {
    throw Error(ErrorCode::kDegenerateSample, "seven-point nullspace is not two-dimensional");
  }
  const Eigen::Matrix3d f1 = detail::reshape(svd.matrixV().col(7));
  const Eigen::Matrix3d f2 = detail::reshape(svd.matrixV().col(8));
  const Eigen::Matrix3d diff = f1 - f2;
  // det(f2 + x * diff) is cubic in x; recover coefficients from four samples.
  auto det_at = [&](double x) { return (f2 + x * diff).determinant(); };
  const double p0 = det_at(0.0), p1 = det_at(1.0), pm1 = det_at(-1.0), p2 = det_at(2.0);
  const double c0 = p0;
  const double c2 = 0.5 * (p1 + pm1) - p0;
  const double odd = 0.5 * (p1 - pm1);
  const double c3 = (p2 - p0 - 4.0 * c2 - 2.0 * odd) / 6.0;
  const double c1 = odd - c3;

  std::vector<FundamentalMatrix> out;
  auto push = [&](const Eigen::Matrix3d& fn) {
    try {
      out.push_back(make_fundamental(t2.transpose() * fn * t1));
    } catch (const Error&) {
    }
  };
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  // A vanishing cubic term means diff itself is singular: the solution at x = inf.
  if (std::abs(c3) <= 1e-14 * scale) push(diff);
  for (double x : solve_cubic(c3, c2, c1, c0)) push(f2 + x * diff);
  if (out.empty()) throw Error(ErrorCode::kNoRealSolution, "seven-point cubic has no usable real root");
  return out;
}

/// Weighted normalized eight-point fit with rank-2 truncation.
inline FundamentalMatrix fundamental_weighted(const PointSet& points, std::span<const std::size_t> indices,
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
  if (positive < 8) throw Error(ErrorCode::kInsufficientSupport, "eight-point fit needs 8 positive-weight points");
  const Eigen::Matrix3d t1 = hartley_transform(points, indices, weights, 0);
  const Eigen::Matrix3d t2 = hartley_transform(points, indices, weights, 2);
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (w == 0.0) continue;
    const std::size_t i = indices[k];
    const Eigen::Vector2d p = apply(t1, points(i, 0), points(i, 1));
    const Eigen::Vector2d q = apply(t2, points(i, 2), points(i, 3));
    const auto r = detail::epipolar_row(p.x(), p.y(), q.x(), q.y());
    m.noalias() += w * r * r.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(m);
  const auto& ev = eig.eigenvalues();
  if (!(ev(1) > 0.0) || std::sqrt(ev(8) / ev(1)) > kConditionLimit) {
    throw Error(ErrorCode::kNumericalFailure, "ill-conditioned eight-point system");
  }
  const Eigen::Matrix3d fn = detail::enforce_rank2(detail::reshape(eig.eigenvectors().col(0)));
  return make_fundamental(t2.transpose() * fn * t1);
}

/// First-order geometric error |x2^T F x1| / |grad|. Returns +inf when the
/// gradient vanishes.
inline double sampson_distance(const FundamentalMatrix& model, std::span<const double> p) noexcept {
  const auto& f = model.F;
  const Eigen::Vector3d x1(p[0], p[1], 1.0), x2(p[2], p[3], 1.0);
  const Eigen::Vector3d fx1 = f * x1;
  const Eigen::Vector3d ftx2 = f.transpose() * x2;
  const double g = fx1(0) * fx1(0) + fx1(1) * fx1(1) + ftx2(0) * ftx2(0) + ftx2(1) * ftx2(1);
  if (!(g > kVanishingGradient)) return std::numeric_limits<double>::infinity();
  return std::abs(x2.dot(fx1)) / std::sqrt(g);
}

/// Right epipole e1 with F e1 = 0 (unit norm).
inline Eigen::Vector3d right_epipole(const Eigen::Matrix3d& f) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f, Eigen::ComputeFullV);
  return svd.matrixV().col(2);
}

/// Oriented epipolar constraint: the signs of (e1 x x1_i) . (F^T x2_i) agree
/// for every candidate. False on a vanishing epipole.
inline bool oriented_epipolar_check(const FundamentalMatrix& model, const PointSet& points,
                                    std::span<const std::size_t> candidates) {
  if (candidates.size() <= 1) return true;
  const Eigen::Vector3d e1 = right_epipole(model.F);
  if (!e1.allFinite() || e1.norm() < 1e-12) return false;
  int sign = 0;
  for (std::size_t i : candidates) {
    const Eigen::Vector3d x1(points(i, 0), points(i, 1), 1.0), x2(points(i, 2), points(i, 3), 1.0);
    const double s = e1.cross(x1).dot(model.F.transpose() * x2);
    const int si = s >= 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = si;
    } else if (si != sign) {
      return false;
    }
  }
  return true;
}

}  // namespace magsac::geometry

#endif  // MAGSAC_GEOMETRY_FUNDAMENTAL_HPP_
