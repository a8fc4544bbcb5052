#ifndef MAGSAC_MAGSAC_HPP_
#define MAGSAC_MAGSAC_HPP_

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/geometry/normalization.hpp"
#include "magsac/geometry/line.hpp"
#include "magsac/geometry/homography.hpp"
#include "magsac/geometry/fundamental.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/scoring/chi.hpp"
#include "magsac/scoring/noise_config.hpp"
#include "magsac/scoring/quality.hpp"
#include "magsac/consensus/sigma_consensus.hpp"
#include "magsac/estimators/config.hpp"
#include "magsac/estimators/sampling.hpp"
#include "magsac/estimators/termination.hpp"
#include "magsac/estimators/validation.hpp"
#include "magsac/estimators/local_optimization.hpp"
#include "magsac/estimators/ransac.hpp"
#include "magsac/estimators/magsac.hpp"
#include "magsac/synthetic/scenes.hpp"
#include "magsac/harness/io.hpp"
#include "magsac/harness/evaluate.hpp"
#include "magsac/harness/benchmark.hpp"

#endif  // MAGSAC_MAGSAC_HPP_
