#pragma once

// Multi-camera frame streams against a static scene. Every camera sees the
// same scene; each integration window picks up light from every other camera
// whose integration window overlaps it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tofmux/scene.hpp"
#include "tofmux/signal.hpp"
#include "tofmux/timing.hpp"

namespace tofmux {

struct CameraSetup {
  CameraConfig config;
  Seconds trigger_offset = 0.0;  // >= 0

  bool operator==(const CameraSetup&) const = default;
};

struct Scenario {
  std::vector<CameraSetup> cameras;
  SceneModel scene;
  Seconds duration = 1.0;
  std::uint64_t seed = 0;
  // Explicit well capacity in bucket energy units. When unset it is
  // well_capacity_factor times the peak own bucket of camera 0 for a pixel of
  // maximal reflectivity at the nearest scene depth.
  std::optional<double> well_capacity;
  double well_capacity_factor = 0.85;
  // Equal-frequency interferers add their AC term at a seeded relative
  // phase; otherwise only the DC term is added.
  bool coherent = false;
  // Fraction of an interferer's light that reaches another camera's pixel.
  double cross_gain = 1.0;

  // Throws ScenarioInvalid (or InfeasibleTiming for a camera whose quad
  // does not fit).
  void validate() const;
};

double resolve_well_capacity(const Scenario& scenario);

struct SimFrame {
  std::size_t camera_id = 0;
  std::int64_t frame_index = 0;
  Seconds timestamp = 0.0;  // frame start
  int rows = 0;
  int cols = 0;
  std::vector<double> depth;  // meters, NaN where saturated
  std::vector<std::uint8_t> saturation_mask;
  std::size_t saturated_count = 0;
  // Sum over interferers of integration overlap with this frame's windows.
  Seconds overlap_seconds = 0.0;

  bool is_hole(std::size_t pixel) const { return saturation_mask[pixel] != 0; }
};

using FrameStream = std::vector<SimFrame>;

// Precomputed per-pixel bucket model of one camera within a scenario.
// Frames can be produced in any order and from several threads.
class StreamSimulator {
 public:
  StreamSimulator(const Scenario& scenario, std::size_t camera);

  // Number of frames whose start lies inside [0, duration).
  std::int64_t frame_count() const { return frame_count_; }
  SimFrame frame(std::int64_t k) const;

  // Integration overlap of frame k with each interferer, per quad, in ticks.
  std::vector<std::vector<std::int64_t>> quad_overlap_ticks(
      std::int64_t k) const;

  const TimeBase& time_base() const { return base_; }
  double well_capacity() const { return capacity_; }

 private:
  struct Interferer {
    std::size_t camera;
    CameraConfig config;
    QuadTiming timing;
    std::int64_t offset_ticks;
    // contribution[pixel * n_quads + q] per own modulation period
    std::vector<double> contribution;
  };

  std::size_t camera_;
  CameraConfig config_;
  QuadTiming timing_;
  TimeBase base_;
  std::int64_t offset_ticks_ = 0;
  std::int64_t period_ticks_ = 0;
  std::int64_t frame_count_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  int quads_ = 0;
  double periods_per_quad_ = 0.0;
  double capacity_ = 0.0;
  double mod_freq_ = 0.0;
  std::vector<double> own_;  // own_[pixel * quads + q], whole quad
  std::vector<Interferer> interferers_;
};

// One stream per camera, in scenario order.
std::vector<FrameStream> simulate_stream(const Scenario& scenario);

// Frames of camera a after which its frame starts recur at the same position
// within camera b's quad period. nullopt when that exceeds max_period.
// Exact when b's quads tile its frame with no idle remainder.
std::optional<std::int64_t> beat_period(const CameraConfig& a,
                                        const CameraConfig& b,
                                        std::int64_t max_period = 10'000);

// Per-pixel raster CSV:
//   camera_id,frame_index,timestamp_s,overlap_s,row,col,depth_m,saturated
// Doubles are printed in shortest round-trip form; holes have an empty
// depth field. Throws IoError.
void render_depth_csv(const std::vector<SimFrame>& frames,
                      const std::filesystem::path& path);
std::vector<SimFrame> read_depth_csv(const std::filesystem::path& path);

// frame_index,timestamp_us,overlap_us,saturated_count with times rounded to
// whole microseconds.
void write_metrics_csv(const std::vector<SimFrame>& frames,
                       const std::filesystem::path& path);

}  // namespace tofmux
