#ifndef MAGSAC_GEOMETRY_PROBLEMS_HPP_
#define MAGSAC_GEOMETRY_PROBLEMS_HPP_

#include <concepts>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "magsac/core/types.hpp"
#include "magsac/geometry/fundamental.hpp"
#include "magsac/geometry/homography.hpp"
#include "magsac/geometry/line.hpp"

namespace magsac {

/// Bundle of solvers and residual for one model type. Estimators and scoring
/// are templated on types satisfying this concept.
template <class P>
concept Problem = requires(const PointSet& pts, const typename P::Model& model, std::span<const std::size_t> idx,
                           std::span<const double> w, std::span<const double> point) {
  { P::kName } -> std::convertible_to<std::string_view>;
  { P::kSampleSize } -> std::convertible_to<std::size_t>;
  { P::kNonMinimalFloor } -> std::convertible_to<std::size_t>;
  { P::kDefaultRho } -> std::convertible_to<int>;
  { P::kPointDim } -> std::convertible_to<std::size_t>;
  { P::residual(model, point) } -> std::same_as<double>;
  { P::minimal(pts, idx) } -> std::same_as<std::vector<typename P::Model>>;
  { P::weighted(pts, idx, w) } -> std::same_as<typename P::Model>;
  { P::sample_ok(pts, idx) } -> std::same_as<bool>;
  { P::is_valid(model, pts, idx) } -> std::same_as<bool>;
};

struct LineProblem {
  using Model = Line2D;
  static constexpr std::string_view kName = "line2d";
  static constexpr std::size_t kSampleSize = 2;
  static constexpr std::size_t kNonMinimalFloor = 2;
  static constexpr int kDefaultRho = 1;
  static constexpr std::size_t kPointDim = 2;

  static double residual(const Model& m, std::span<const double> p) noexcept {
    return geometry::line_residual(m, p[0], p[1]);
  }
  static std::vector<Model> minimal(const PointSet& pts, std::span<const std::size_t> s) {
    return {geometry::line_from_two_points({pts(s[0], 0), pts(s[0], 1)}, {pts(s[1], 0), pts(s[1], 1)})};
  }
  static Model weighted(const PointSet& pts, std::span<const std::size_t> idx, std::span<const double> w) {
    return geometry::line_weighted(pts, idx, w);
  }
  static bool sample_ok(const PointSet& pts, std::span<const std::size_t> s) {
    return s.size() == 2 &&
           std::hypot(pts(s[0], 0) - pts(s[1], 0), pts(s[0], 1) - pts(s[1], 1)) > geometry::kCoincidenceTolerance;
  }
  static bool is_valid(const Model& m, const PointSet&, std::span<const std::size_t>) {
    return satisfies_invariants(m);
  }
};

struct HomographyProblem {
  using Model = Homography;
  static constexpr std::string_view kName = "homography";
  static constexpr std::size_t kSampleSize = 4;
  static constexpr std::size_t kNonMinimalFloor = 4;
  static constexpr int kDefaultRho = 2;
  static constexpr std::size_t kPointDim = 4;

  static double residual(const Model& m, std::span<const double> p) noexcept {
    return geometry::homography_residual(m, p);
  }
  static std::vector<Model> minimal(const PointSet& pts, std::span<const std::size_t> s) {
    return {geometry::homography_minimal(pts, s)};
  }
  static Model weighted(const PointSet& pts, std::span<const std::size_t> idx, std::span<const double> w) {
    return geometry::homography_weighted(pts, idx, w);
  }
  static bool sample_ok(const PointSet& pts, std::span<const std::size_t> s) {
    return geometry::homography_sample_ok(pts, s);
  }
  static bool is_valid(const Model& m, const PointSet&, std::span<const std::size_t>) {
    return satisfies_invariants(m) && std::abs(m.H.determinant()) > 1e-12;
  }
};

struct FundamentalProblem {
  using Model = FundamentalMatrix;
  static constexpr std::string_view kName = "fundamental";
  static constexpr std::size_t kSampleSize = 7;
  static constexpr std::size_t kNonMinimalFloor = 8;
  static constexpr int kDefaultRho = 2;
  static constexpr std::size_t kPointDim = 4;

  static double residual(const Model& m, std::span<const double> p) noexcept {
    return geometry::sampson_distance(m, p);
  }
  static std::vector<Model> minimal(const PointSet& pts, std::span<const std::size_t> s) {
    return geometry::fundamental_minimal(pts, s);
  }
  static Model weighted(const PointSet& pts, std::span<const std::size_t> idx, std::span<const double> w) {
    return geometry::fundamental_weighted(pts, idx, w);
  }
  static bool sample_ok(const PointSet& pts, std::span<const std::size_t> s) {
    return geometry::fundamental_sample_ok(pts, s);
  }
  // Structural invariants plus the oriented epipolar constraint on `support`.
  static bool is_valid(const Model& m, const PointSet& pts, std::span<const std::size_t> support) {
    return satisfies_invariants(m) && geometry::oriented_epipolar_check(m, pts, support);
  }
};

static_assert(Problem<LineProblem>);
static_assert(Problem<HomographyProblem>);
static_assert(Problem<FundamentalProblem>);

/// Runtime tag for the three supported problems.
enum class ProblemKind { kLine2D, kHomography, kFundamental };

/// Sample-degeneracy test: true when the sample can determine a model.
template <Problem P>
bool degeneracy_test(const PointSet& points, std::span<const std::size_t> sample) {
  return sample.size() == P::kSampleSize && P::sample_ok(points, sample);
}

template <Problem P>
std::vector<double> residuals(const typename P::Model& model, const PointSet& points) {
  std::vector<double> r(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) r[i] = P::residual(model, points.point(i));
  return r;
}

/// Calls `f` with a default-constructed problem tag matching `kind`.
template <class F>
decltype(auto) dispatch(ProblemKind kind, F&& f) {
  switch (kind) {
    case ProblemKind::kLine2D: return f(LineProblem{});
    case ProblemKind::kHomography: return f(HomographyProblem{});
    case ProblemKind::kFundamental: break;
  }
  return f(FundamentalProblem{});
}

}  // namespace magsac

#endif  // MAGSAC_GEOMETRY_PROBLEMS_HPP_
