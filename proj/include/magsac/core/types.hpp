#ifndef MAGSAC_CORE_TYPES_HPP_
#define MAGSAC_CORE_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "magsac/core/errors.hpp"

namespace magsac {

/// An ordered set of k-dimensional data points stored row-major.
///
/// k is 2 for image points (x, y) and 4 for correspondences (x1, y1, x2, y2).
/// Image diagonals and ground-truth labels are optional metadata used by the
/// outlier-support default and by evaluation.
class PointSet {
 public:
  PointSet() = default;

  PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ != 2 && dim_ != 4) {
      throw Error(ErrorCode::kInvalidArgument, "point dimension must be 2 or 4");
    }
    if (coords_.empty() || coords_.size() % dim_ != 0) {
      throw Error(ErrorCode::kInvalidArgument, "coordinate count is not a positive multiple of the dimension");
    }
    for (double v : coords_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite coordinate");
    }
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  double operator()(std::size_t i, std::size_t c) const noexcept { return coords_[i * dim_ + c]; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  const std::optional<double>& image1_diag() const noexcept { return image1_diag_; }
  const std::optional<double>& image2_diag() const noexcept { return image2_diag_; }
  void set_image_diags(std::optional<double> d1, std::optional<double> d2) {
    image1_diag_ = d1;
    image2_diag_ = d2;
  }

  const std::optional<std::vector<bool>>& gt_inlier_mask() const noexcept { return mask_; }
  void set_gt_inlier_mask(std::vector<bool> mask) {
    if (mask.size() != size()) {
      throw Error(ErrorCode::kLabelMismatch, "label count " + std::to_string(mask.size()) +
                                                 " differs from point count " + std::to_string(size()));
    }
    mask_ = std::move(mask);
  }
  void clear_gt_inlier_mask() { mask_.reset(); }

  /// Indices of ground-truth inliers; throws MissingGroundTruth without labels.
  std::vector<std::size_t> gt_inlier_indices() const {
    if (!mask_) throw Error(ErrorCode::kMissingGroundTruth, "point set has no ground-truth labels");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_->size(); ++i) {
      if ((*mask_)[i]) out.push_back(i);
    }
    return out;
  }

  PointSet subset(std::span<const std::size_t> indices) const {
    std::vector<double> c;
    c.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
      auto p = point(i);
      c.insert(c.end(), p.begin(), p.end());
    }
    PointSet out(dim_, std::move(c));
    out.set_image_diags(image1_diag_, image2_diag_);
    if (mask_) {
      std::vector<bool> m;
      m.reserve(indices.size());
      for (std::size_t i : indices) m.push_back((*mask_)[i]);
      out.mask_ = std::move(m);
    }
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::optional<double> image1_diag_;
  std::optional<double> image2_diag_;
  std::optional<std::vector<bool>> mask_;
};

/// 2D line a*x + b*y + c = 0 with a^2 + b^2 = 1.
struct Line2D {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
};

/// Planar homography mapping image-1 points to image 2. Unit Frobenius norm,
/// largest-magnitude entry positive.
struct Homography {
  Eigen::Matrix3d H = Eigen::Matrix3d::Identity() / std::sqrt(3.0);
};

/// Rank-2 fundamental matrix with x2^T F x1 = 0. Unit Frobenius norm.
struct FundamentalMatrix {
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
};

using Model = std::variant<Line2D, Homography, FundamentalMatrix>;

namespace detail {

// Scales to unit Frobenius norm and flips the sign so that the entry of
// largest magnitude is positive.
inline Eigen::Matrix3d normalize_matrix(const Eigen::Matrix3d& m) {
  const double norm = m.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kNumericalFailure, "matrix has zero or non-finite norm");
  }
  Eigen::Matrix3d out = m / norm;
  Eigen::Index r = 0, c = 0;
  out.cwiseAbs().maxCoeff(&r, &c);
  if (out(r, c) < 0.0) out = -out;
  return out;
}

}  // namespace detail

inline Line2D make_line(double a, double b, double c) {
  const double n = std::hypot(a, b);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(c)) {
    throw Error(ErrorCode::kNumericalFailure, "line normal vanishes");
  }
  a /= n;
  b /= n;
  c /= n;
  if ((std::abs(a) >= std::abs(b) ? a : b) < 0.0) {
    a = -a;
    b = -b;
    c = -c;
  }
  return {a, b, c};
}

inline Homography make_homography(const Eigen::Matrix3d& h) { return {detail::normalize_matrix(h)}; }

inline FundamentalMatrix make_fundamental(const Eigen::Matrix3d& f) { return {detail::normalize_matrix(f)}; }

/// Checks the normalization invariants of a model (and rank 2 for F).
inline bool satisfies_invariants(const Line2D& l, double tol = 1e-9) {
  return std::isfinite(l.a) && std::isfinite(l.b) && std::isfinite(l.c) &&
         std::abs(l.a * l.a + l.b * l.b - 1.0) <= tol;
}

inline bool satisfies_invariants(const Homography& h, double tol = 1e-9) {
  return h.H.allFinite() && std::abs(h.H.norm() - 1.0) <= tol;
}

inline bool satisfies_invariants(const FundamentalMatrix& f, double tol = 1e-9) {
  if (!f.F.allFinite() || std::abs(f.F.norm() - 1.0) > tol) return false;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f.F);
  const auto& s = svd.singularValues();
  return s(2) < tol * s(0) && s(1) > tol * s(0);
}

inline bool satisfies_invariants(const Model& m, double tol = 1e-9) {
  return std::visit([tol](const auto& x) { return satisfies_invariants(x, tol); }, m);
}

}  // namespace magsac

#endif  // MAGSAC_CORE_TYPES_HPP_
