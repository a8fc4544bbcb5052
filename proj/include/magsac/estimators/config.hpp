#ifndef MAGSAC_ESTIMATORS_CONFIG_HPP_
#define MAGSAC_ESTIMATORS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "magsac/core/errors.hpp"
#include "magsac/scoring/noise_config.hpp"

namespace magsac {

struct SolverConfig {
  double confidence = 0.95;         // eta
  std::size_t max_iterations = 100000;
  std::size_t min_iterations = 20;
  double loop_sigma = 0.3;          // baseline inlier threshold, pixels
  std::size_t inner_iterations = 20; // r, local optimization
  double reference_sigma = 1.0;     // tau_ref, pixels
  std::uint64_t seed = 0;
  NoiseConfig noise;
  bool enable_lo = false;
  bool enable_post_sigma = false;
  unsigned threads = 1;             // sigma-consensus worker threads
  bool record_trace = false;

  void validate() const {
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorCode::kInvalidArgument, "confidence must be in (0,1)");
    if (min_iterations < 1 || max_iterations < min_iterations) {
      throw Error(ErrorCode::kInvalidArgument, "need max_iterations >= min_iterations >= 1");
    }
    if (!(loop_sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "loop sigma must be positive");
    if (!(reference_sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "reference sigma must be positive");
    noise.validate();
  }
};

/// One so-far-the-best update.
struct TraceEntry {
  std::size_t iteration = 0;  // 1-based iteration of the update
  double best_quality = 0.0;
  std::size_t required_iterations = 0;
};

template <class Model>
struct EstimationResult {
  Model model{};
  double quality = 0.0;
  std::size_t iterations = 0;
  std::size_t samples_drawn = 0;
  std::optional<std::vector<double>> weights;
  std::vector<std::size_t> inliers;
  double wall_time = 0.0;  // seconds
  bool failed = true;
  std::vector<TraceEntry> trace;
};

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_CONFIG_HPP_
