#ifndef MAGSAC_ESTIMATORS_VALIDATION_HPP_
#define MAGSAC_ESTIMATORS_VALIDATION_HPP_

#include <cstddef>
#include <optional>
#include <span>

#include "magsac/core/types.hpp"
#include "magsac/geometry/problems.hpp"

namespace magsac {

/// Reference-threshold support of the so-far-the-best candidate; empty
/// before the first accepted model.
struct BestContext {
  std::optional<std::size_t> reference_count;
};

struct ValidationOutcome {
  bool valid = false;
  std::size_t reference_count = 0;  // points with residual < reference threshold
};

/// Structural validation plus an early bail: points are streamed and the
/// model is rejected as soon as even counting every remaining point as close
/// cannot reach the best model's reference count.
template <Problem P>
ValidationOutcome validate_model(const typename P::Model& model, const PointSet& points,
                                 std::span<const std::size_t> sample, double reference_threshold,
                                 const BestContext& best) {
  ValidationOutcome out;
  if (!P::is_valid(model, points, sample)) return out;
  const std::size_t n = points.size();
  std::size_t close = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (P::residual(model, points.point(i)) < reference_threshold) ++close;
    if (best.reference_count && close + (n - i - 1) < *best.reference_count) {
      out.reference_count = close;
      return out;
    }
  }
  out.valid = true;
  out.reference_count = close;
  return out;
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_VALIDATION_HPP_
