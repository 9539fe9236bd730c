#pragma once

// Interference-free trigger offsets for cameras sharing one frame rate, and
// exact verification of any set of offsets by integration-window overlap.

#include <cstddef>
#include <vector>

#include "tofmux/timing.hpp"

namespace tofmux {

struct Schedule {
  CameraConfig config;
  std::vector<Seconds> offsets;  // one per camera, each in [0, frame period)
};

// floor(t_qt / t_qin). Requires t_qin > 0.
std::size_t max_cameras(const QuadTiming& timing);

// Camera k is triggered k * t_qin after camera 0, which puts its integration
// windows in slot k of every quad. Reset and readout are ignored in the slot
// width; verify_schedule checks the real windows. Throws CapacityExceeded
// when n_cameras > max_cameras.
Schedule assign_shifts(const CameraConfig& config, std::size_t n_cameras);

// Total intersection, in seconds, of two cameras' integration windows
// inside `window`.
Seconds pairwise_overlap(const CameraConfig& config_a, Seconds offset_a,
                         const CameraConfig& config_b, Seconds offset_b,
                         TimeWindow window);

struct PairOverlap {
  std::size_t a = 0;
  std::size_t b = 0;
  Seconds overlap = 0.0;
};

struct ScheduleReport {
  std::vector<PairOverlap> pairs;  // a < b, lexicographic

  bool valid() const;
  Seconds worst() const;
};

ScheduleReport verify_schedule(const Schedule& schedule, TimeWindow window);

// Heterogeneous variant: one config per camera.
ScheduleReport verify_offsets(const std::vector<CameraConfig>& configs,
                              const std::vector<Seconds>& offsets,
                              TimeWindow window);

}  // namespace tofmux
