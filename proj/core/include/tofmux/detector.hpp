#pragma once

// MCI detection from observable frame data: saturation counts, trigger
// shift sweeps, timestamp periodicity and robust extraction of
// interference-free frames.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tofmux/simulator.hpp"
#include "tofmux/timing.hpp"

namespace tofmux {

std::size_t count_saturated(const SimFrame& frame);

struct SweepOptions {
  Seconds step = 1e-3;
  int burst_frames = 3;
  // Counts within min + tie_band tie with the minimum. Default: 1% of the
  // pixel count.
  std::optional<double> tie_band;
};

struct ShiftSweepResult {
  std::vector<Seconds> shifts;
  std::vector<double> saturated_counts;   // mean over the burst
  std::vector<double> normalized_counts;  // counts / max count
  std::vector<Seconds> mci_free_shifts;
  double tie_band = 0.0;
};

// Sweeps camera 1's trigger delay relative to its scenario offset over
// [0, frame period) in `step` increments. Requires exactly two cameras at
// the same frame rate (RateMismatch otherwise).
ShiftSweepResult sweep_shifts(const Scenario& scenario,
                              const SweepOptions& options = {});

// Relative trigger shifts in [0, frame period] at which two cameras sharing
// `config` have no integration overlap. Intervals are closed; a zero-length
// interval is an isolated touching shift. One camera is free at every shift.
std::vector<Interval> predict_free_shifts(const CameraConfig& config,
                                          std::size_t n_cameras);

bool contains_shift(std::span<const Interval> free, Seconds shift);

struct FrameLabel {
  std::int64_t frame_index = 0;
  Seconds timestamp = 0.0;
  std::int64_t paired_index = 0;  // nearest frame of the other stream
  Seconds overlap = 0.0;
  bool mci_free = false;
};

struct PeriodicityResult {
  std::vector<FrameLabel> labels;      // one per frame of stream a
  std::optional<std::int64_t> period;  // smallest repeat of the free labels
};

// Labels every frame of `a` from timestamps alone: the other stream's nearest
// frame anchors its quad train, and the frame is free iff the reconstructed
// integration windows do not meet.
PeriodicityResult periodicity_analysis(std::span<const SimFrame> a,
                                       std::span<const SimFrame> b,
                                       const CameraConfig& config_a,
                                       const CameraConfig& config_b);

// Smallest p <= n / 2 with labels[i] == labels[i + p] for every i.
std::optional<std::int64_t> label_period(std::span<const FrameLabel> labels);

struct ExtractionResult {
  std::vector<std::int64_t> inlier_frames;  // ascending frame index
  double fitted_level = 0.0;
  int iterations = 0;  // refits that added frames
};

// Horizontal-line fit over saturation counts: seeds with the seed_count
// lowest frames, then adds every frame within `tolerance` of the running
// mean until nothing changes. Default tolerance: 2% of the pixel count.
ExtractionResult extract_mci_free(std::span<const SimFrame> stream,
                                  std::size_t seed_count,
                                  std::optional<double> tolerance = {});

// Mean temporal standard deviation of depth over pixels valid in every
// frame, divided by the ambiguity range.
double flicker_metric(std::span<const SimFrame> frames,
                      double ambiguity_range);

std::vector<SimFrame> select_frames(std::span<const SimFrame> stream,
                                    std::span<const std::int64_t> indices);

}  // namespace tofmux
