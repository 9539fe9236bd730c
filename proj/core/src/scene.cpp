#include "tofmux/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tofmux/error.hpp"

namespace tofmux {

namespace {
constexpr double kMinShading = 0.02;
}

double SceneModel::nearest() const {
  if (depth.empty()) throw ScenarioInvalid("scene has no pixels");
  return *std::min_element(depth.begin(), depth.end());
}

void SceneModel::validate(double max_depth) const {
  if (rows <= 0 || cols <= 0) throw ScenarioInvalid("scene dimensions must be > 0");
  if (depth.size() != pixel_count() || reflectivity.size() != pixel_count()) {
    throw ScenarioInvalid("scene maps do not match rows x cols");
  }
  for (double d : depth) {
    if (!(d > 0.0 && d < max_depth)) {
      throw ScenarioInvalid("scene depth " + std::to_string(d) +
                            " m outside (0, " + std::to_string(max_depth) +
                            ") m ambiguity range");
    }
  }
  for (double r : reflectivity) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ScenarioInvalid("scene reflectivity outside (0, 1]");
    }
  }
}

SceneModel make_bump_scene(const BumpSceneParams& p) {
  if (p.rows <= 0 || p.cols <= 0) throw ScenarioInvalid("scene dimensions must be > 0");
  if (!(p.plane_depth > 0.0)) throw ScenarioInvalid("plane depth must be > 0");
  if (!(p.bump_radius >= 0.0 && p.bump_radius < p.plane_depth)) {
    throw ScenarioInvalid("bump radius must be in [0, plane depth)");
  }
  if (!(p.fov_h_deg > 0.0 && p.fov_h_deg < 180.0)) {
    throw ScenarioInvalid("field of view must be in (0, 180) degrees");
  }
  if (!(p.reflectivity > 0.0 && p.reflectivity <= 1.0)) {
    throw ScenarioInvalid("reflectivity must be in (0, 1]");
  }

  SceneModel scene;
  scene.rows = p.rows;
  scene.cols = p.cols;
  scene.depth.resize(scene.pixel_count());
  scene.reflectivity.resize(scene.pixel_count());

  const double focal =
      (p.cols / 2.0) / std::tan(p.fov_h_deg * std::numbers::pi / 360.0);
  const double z0 = p.plane_depth;
  const double r2 = p.bump_radius * p.bump_radius;

  for (int row = 0; row < p.rows; ++row) {
    for (int col = 0; col < p.cols; ++col) {
      const double x = (col + 0.5 - p.cols / 2.0) / focal;
      const double y = (row + 0.5 - p.rows / 2.0) / focal;
      const double norm = std::sqrt(x * x + y * y + 1.0);
      const double vx = x / norm;
      const double vy = y / norm;
      const double vz = 1.0 / norm;

      // Plane z = z0, normal facing the camera.
      double range = z0 / vz;
      double cos_incidence = vz;

      // Sphere centred at (0, 0, z0); only its camera-facing half is hit
      // before the plane.
      const double b = vz * z0;
      const double disc = b * b - (z0 * z0 - r2);
      if (disc >= 0.0) {
        const double t = b - std::sqrt(disc);
        if (t > 0.0 && t < range) {
          range = t;
          const double nx = t * vx / p.bump_radius;
          const double ny = t * vy / p.bump_radius;
          const double nz = (t * vz - z0) / p.bump_radius;
          cos_incidence = -(nx * vx + ny * vy + nz * vz);
        }
      }

      const std::size_t i = static_cast<std::size_t>(row) * p.cols + col;
      scene.depth[i] = range;
      const double shading =
          p.lambertian ? std::clamp(cos_incidence, kMinShading, 1.0) : 1.0;
      scene.reflectivity[i] = p.reflectivity * shading;
    }
  }
  return scene;
}

}  // namespace tofmux
