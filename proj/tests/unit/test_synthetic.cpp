#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "magsac/geometry/problems.hpp"
#include "magsac/synthetic/scenes.hpp"

using namespace magsac;

TEST(HomographyScene, SameSeedSameScene) {
  const auto a = synthetic::generate_homography_scene(1.0, 0.2, 200, 9);
  const auto b = synthetic::generate_homography_scene(1.0, 0.2, 200, 9);
  EXPECT_EQ(a.points.coords(), b.points.coords());
  EXPECT_EQ(a.gt_model.H, b.gt_model.H);
  const auto c = synthetic::generate_homography_scene(1.0, 0.2, 200, 10);
  EXPECT_NE(a.points.coords(), c.points.coords());
}

TEST(HomographyScene, SplitAndLabels) {
  const auto s = synthetic::generate_homography_scene(1.0, 0.2, 200, 1);
  ASSERT_EQ(s.points.size(), 200u);
  EXPECT_EQ(s.points.dim(), 4u);
  const auto& mask = s.gt_inlier_mask();
  std::size_t inliers = 0;
  for (bool b : mask) inliers += b;
  EXPECT_EQ(inliers, 160u);
  for (std::size_t i = 0; i < 160; ++i) EXPECT_TRUE(mask[i]);
  EXPECT_NEAR(*s.points.image1_diag(), 600.0 * std::sqrt(2.0), 1e-9);
}

TEST(HomographyScene, NoiseFreeInliersFitExactly) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = synthetic::generate_homography_scene(0.0, 0.3, 100, seed);
    const auto& mask = s.gt_inlier_mask();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double r = HomographyProblem::residual(s.gt_model, s.points.point(i));
      if (mask[i]) {
        EXPECT_LT(r, 1e-8);
      } else {
        EXPECT_GT(r, synthetic::outlier_exclusion_radius());
      }
    }
  }
}

TEST(HomographyScene, InliersProjectInsideBothImages) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = synthetic::generate_homography_scene(0.0, 0.0, 100, seed);
    for (std::size_t i = 0; i < s.points.size(); ++i)
      for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_GT(s.points(i, c), 0.0);
        EXPECT_LT(s.points(i, c), synthetic::kImageSize);
      }
  }
}

TEST(HomographyScene, NoiseHasRequestedSpread) {
  // The random stream does not depend on the noise level, so the difference
  // of two scenes is exactly the injected noise.
  const auto clean = synthetic::generate_homography_scene(0.0, 0.2, 200, 4);
  const auto noisy = synthetic::generate_homography_scene(1.0, 0.2, 200, 4);
  double ss = 0.0, sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < 160; ++i)
    for (std::size_t c = 0; c < 4; ++c) {
      const double d = noisy.points(i, c) - clean.points(i, c);
      sum += d;
      ss += d * d;
      ++n;
    }
  const double mean = sum / n, sd = std::sqrt(ss / n - mean * mean);
  EXPECT_GE(sd, 0.9);
  EXPECT_LE(sd, 1.1);
}

TEST(HomographyScene, RejectsBadArguments) {
  EXPECT_THROW(synthetic::generate_homography_scene(1.0, 1.0, 100, 1), Error);
  EXPECT_THROW(synthetic::generate_homography_scene(-1.0, 0.1, 100, 1), Error);
  EXPECT_THROW(synthetic::generate_homography_scene(1.0, 0.1, 3, 1), Error);
}

TEST(LineScene, InliersOnLineInsideTheBox) {
  const auto s = synthetic::generate_line_scene(0.0, 0.25, 100, 300, 200, 6);
  const auto& mask = s.gt_inlier_mask();
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    EXPECT_GE(s.points(i, 0), -1e-9);
    EXPECT_LE(s.points(i, 0), 300 + 1e-9);
    EXPECT_GE(s.points(i, 1), -1e-9);
    EXPECT_LE(s.points(i, 1), 200 + 1e-9);
    if (mask[i]) {
      ++inliers;
      EXPECT_LT(LineProblem::residual(s.gt_model, s.points.point(i)), 1e-9);
    }
  }
  EXPECT_EQ(inliers, 75u);
  EXPECT_NEAR(*s.points.image1_diag(), std::hypot(300.0, 200.0), 1e-12);
}

TEST(LineScene, PerpendicularNoiseSpread) {
  const auto s = synthetic::generate_line_scene(2.0, 0.0, 2000, 600, 600, 8);
  double ss = 0.0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto p = s.points.point(i);
    const double d = s.gt_model.a * p[0] + s.gt_model.b * p[1] + s.gt_model.c;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / s.points.size());
  EXPECT_NEAR(sd, 2.0, 0.1);
}
