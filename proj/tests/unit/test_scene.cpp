#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tofmux/error.hpp"
#include "tofmux/scene.hpp"

using namespace tofmux;

TEST(BumpScene, FlatPlaneIsPinholeRange) {
  BumpSceneParams p;
  p.bump_radius = 0.0;
  p.cols = 8;
  p.rows = 6;
  const SceneModel s = make_bump_scene(p);
  ASSERT_EQ(s.pixel_count(), 48u);
  const double focal = 4.0 / std::tan(20.0 * std::numbers::pi / 180.0);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 8; ++c) {
      const double x = (c + 0.5 - 4.0) / focal;
      const double y = (r + 0.5 - 3.0) / focal;
      const double len = std::hypot(x, y, 1.0);
      EXPECT_NEAR(s.depth[r * 8 + c], len, 1e-12);
      EXPECT_NEAR(s.reflectivity[r * 8 + c], 0.8 / len, 1e-12);
    }
  }
}

TEST(BumpScene, BumpIsNearerThanPlane) {
  const SceneModel s = make_bump_scene({});
  const std::size_t centre = 30 * 80 + 40;
  EXPECT_NEAR(s.depth[centre], 0.85, 2e-3);
  EXPECT_NEAR(s.nearest(), 0.85, 2e-3);
  EXPECT_GT(s.depth[0], 1.0);
  EXPECT_LT(s.depth[centre], s.depth[0]);
}

TEST(BumpScene, PointSymmetric) {
  const SceneModel s = make_bump_scene({});
  const std::size_t n = s.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(s.depth[i], s.depth[n - 1 - i]);
    EXPECT_EQ(s.reflectivity[i], s.reflectivity[n - 1 - i]);
  }
}

TEST(BumpScene, ReflectivityBounds) {
  BumpSceneParams p;
  const SceneModel shaded = make_bump_scene(p);
  p.lambertian = false;
  const SceneModel flat = make_bump_scene(p);
  for (std::size_t i = 0; i < shaded.pixel_count(); ++i) {
    EXPECT_GE(shaded.reflectivity[i], 0.8 * 0.02);
    EXPECT_LE(shaded.reflectivity[i], 0.8);
    EXPECT_EQ(flat.reflectivity[i], 0.8);
    EXPECT_EQ(flat.depth[i], shaded.depth[i]);
  }
}

TEST(BumpScene, RejectsBadParams) {
  auto bad = [](auto mutate) {
    BumpSceneParams p;
    mutate(p);
    EXPECT_THROW(make_bump_scene(p), ScenarioInvalid);
  };
  bad([](BumpSceneParams& p) { p.rows = 0; });
  bad([](BumpSceneParams& p) { p.plane_depth = 0; });
  bad([](BumpSceneParams& p) { p.bump_radius = 1.0; });
  bad([](BumpSceneParams& p) { p.fov_h_deg = 180; });
  bad([](BumpSceneParams& p) { p.reflectivity = 1.5; });
}

TEST(SceneModel, Validate) {
  SceneModel s = make_bump_scene({});
  EXPECT_NO_THROW(s.validate(6.0));
  EXPECT_THROW(s.validate(1.0), ScenarioInvalid);
  s.reflectivity[3] = 0.0;
  EXPECT_THROW(s.validate(6.0), ScenarioInvalid);
  s.reflectivity.pop_back();
  EXPECT_THROW(s.validate(6.0), ScenarioInvalid);
  EXPECT_THROW(SceneModel{}.nearest(), ScenarioInvalid);
}
