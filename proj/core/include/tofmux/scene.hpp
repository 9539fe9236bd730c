#pragma once

#include <cstddef>
#include <vector>

namespace tofmux {

// Static scene as seen by every camera of a rig: per-pixel radial distance
// and reflectivity, row-major.
struct SceneModel {
  int rows = 0;
  int cols = 0;
  std::vector<double> depth;         // meters
  std::vector<double> reflectivity;  // [0, 1]

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  double nearest() const;

  // Throws ScenarioInvalid unless maps match the dimensions, every depth is
  // in (0, max_depth) and every reflectivity is in (0, 1].
  void validate(double max_depth) const;
};

// Frontal plane with a hemisphere bulging toward the camera, viewed through
// a pinhole centred on the hemisphere.
struct BumpSceneParams {
  double plane_depth = 1.0;   // m
  double bump_radius = 0.15;  // m
  double reflectivity = 0.8;
  int cols = 80;
  int rows = 60;
  double fov_h_deg = 40.0;
  // Shade reflectivity by the cosine of the incidence angle (floored so no
  // pixel goes fully dark).
  bool lambertian = true;

  bool operator==(const BumpSceneParams&) const = default;
};

SceneModel make_bump_scene(const BumpSceneParams& params);

}  // namespace tofmux
