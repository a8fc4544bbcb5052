// Fits a homography to a synthetic two-view scene with several estimators
// and compares their error against the ground-truth inliers.
//
//   magsac_demo [noise_px] [outlier_ratio] [seed]

#include <cstdio>
#include <cstdlib>
#include <optional>

#include "magsac/magsac.hpp"

using namespace magsac;

int main(int argc, char** argv) {
  const double noise = argc > 1 ? std::atof(argv[1]) : 1.0;
  const double outliers = argc > 2 ? std::atof(argv[2]) : 0.5;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  synthetic::SyntheticScene<Homography> scene;
  try {
    scene = synthetic::generate_homography_scene(noise, outliers, 200, seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  std::printf("scene: 200 correspondences, noise %.2f px, outlier ratio %.2f, seed %llu\n", noise, outliers,
              static_cast<unsigned long long>(seed));
  std::printf("ground-truth model error: %.3f px\n\n",
              harness::evaluate<HomographyProblem>(scene.gt_model, scene.points).error_rms);

  SolverConfig cfg;
  cfg.seed = seed;
  cfg.max_iterations = 5000;
  cfg.noise = default_noise_config<HomographyProblem>(scene.points);

  std::printf("%-14s %10s %10s %9s %9s\n", "method", "error px", "samples", "inliers", "time ms");
  for (const char* name : {"ransac", "msac", "lo-msac", "msac+sigma", "magsac"}) {
    const auto spec = harness::parse_method(name);
    const auto r = harness::run_method<HomographyProblem>(spec, scene.points, cfg);
    const auto ev = harness::evaluate<HomographyProblem>(
        r.failed ? std::nullopt : std::optional<Homography>(r.model), scene.points);
    std::printf("%-14s %10.3f %10zu %9zu %9.1f%s\n", name, ev.error_rms, r.samples_drawn, r.inliers.size(),
                r.wall_time * 1e3, ev.failed ? "  (failed)" : "");
  }

  const auto best = magsac<HomographyProblem>(scene.points, cfg);
  if (!best.failed) {
    std::printf("\nMAGSAC homography (unit Frobenius norm):\n");
    for (int i = 0; i < 3; ++i)
      std::printf("  % .6e % .6e % .6e\n", best.model.H(i, 0), best.model.H(i, 1), best.model.H(i, 2));
    // Weights separate inliers from outliers without a threshold.
    double w_in = 0, w_out = 0;
    std::size_t n_in = 0, n_out = 0;
    const auto& mask = scene.gt_inlier_mask();
    for (std::size_t i = 0; i < mask.size(); ++i) {
      (mask[i] ? w_in : w_out) += (*best.weights)[i];
      ++(mask[i] ? n_in : n_out);
    }
    std::printf("mean weight: inliers %.3g, outliers %.3g\n", w_in / n_in, n_out ? w_out / n_out : 0.0);
  }
  return 0;
}
