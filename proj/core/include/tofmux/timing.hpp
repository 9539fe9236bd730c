#pragma once

// Quad-level decomposition of a ToF camera frame and the absolute time axis
// on which integration windows of several cameras are compared.
//
// A frame is n_subframes x n_quads quads laid end to end from the trigger
// instant. Each quad is Reset -> Integration -> Readout -> Dead time, with all
// durations in whole system clock cycles. Any remainder between the last quad
// and the next frame start is idle. Illumination is only on during
// integration.

#include <cstdint>
#include <span>
#include <vector>

namespace tofmux {

using Seconds = double;

struct CameraConfig {
  double frame_rate = 30.0;  // frames per second
  int n_subframes = 1;
  int n_quads = 4;
  double intg_duty_cycle = 0.28;
  std::int64_t sys_clock_freq = 48'000'000;  // Hz
  int n_col_tot = 320;
  int n_row = 240;
  std::int64_t reset_cycles = 768;
  double mod_freq = 24e6;  // illumination modulation, Hz

  // Throws std::invalid_argument on any field outside its domain.
  void validate() const;

  // Frame rate and duty cycle enter the cycle arithmetic as exact integers:
  // micro-hertz and parts-per-billion respectively.
  std::int64_t frame_rate_micro_hz() const;
  std::int64_t duty_ppb() const;

  int quads_per_frame() const { return n_quads * n_subframes; }
  Seconds frame_period() const { return 1.0 / frame_rate; }

  bool operator==(const CameraConfig&) const = default;
};

struct QuadTiming {
  std::int64_t t_qt = 0;   // total quad time
  std::int64_t t_rs = 0;   // reset
  std::int64_t t_qin = 0;  // integration
  std::int64_t t_rd = 0;   // readout
  std::int64_t t_qd = 0;   // dead time

  bool operator==(const QuadTiming&) const = default;
};

// Readout duration in clock cycles. The quarter term is rounded up when
// n_row * n_col_tot is not a multiple of four.
std::int64_t readout_cycles(std::int64_t n_col_tot, std::int64_t n_row);

// sys_clock_freq / (frame_rate * n_quads * n_subframes), floored.
std::int64_t quad_total_cycles(const CameraConfig& config);

// Throws InfeasibleTiming when the dead time would be negative.
QuadTiming derive_quad_timing(const CameraConfig& config);

struct TimeWindow {
  Seconds start = 0.0;
  Seconds end = 0.0;
};

struct Interval {
  Seconds start = 0.0;
  Seconds end = 0.0;

  Seconds length() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

// Half-open interval on the integer tick axis of a TimeBase.
struct TickInterval {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - begin; }
  bool operator==(const TickInterval&) const = default;
};

// Total length of the intersection of two sorted, internally disjoint
// tick interval lists. Linear sweep over both lists.
std::int64_t intersection_ticks(std::span<const TickInterval> a,
                                std::span<const TickInterval> b);

// Sorted, pairwise disjoint, non-touching intervals in seconds.
class IntervalSet {
 public:
  IntervalSet() = default;
  // Throws std::invalid_argument if the list is unsorted, empty-length,
  // overlapping or touching.
  explicit IntervalSet(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  Seconds total_length() const;
  Seconds intersection_length(const IntervalSet& other) const;

 private:
  std::vector<Interval> intervals_;
};

// Common integer time axis for a set of cameras. One tick divides every
// camera's clock period, every frame period and one microsecond, so all
// interval endpoints of those cameras are exact integers. Endpoints that are
// mathematically equal therefore convert to identical doubles, and touching
// intervals have exactly zero overlap.
class TimeBase {
 public:
  // Throws std::overflow_error if the common tick rate does not fit.
  static TimeBase for_configs(std::span<const CameraConfig> configs);
  static TimeBase for_config(const CameraConfig& config);
  static TimeBase for_pair(const CameraConfig& a, const CameraConfig& b);

  std::int64_t ticks_per_second() const { return ticks_per_second_; }

  // Nearest tick; arbitrary offsets are snapped to the grid.
  std::int64_t to_ticks(Seconds t) const;
  Seconds to_seconds(std::int64_t ticks) const;

  // Throw std::logic_error when the config was not part of this base.
  std::int64_t cycles_to_ticks(std::int64_t cycles,
                               const CameraConfig& config) const;
  std::int64_t frame_period_ticks(const CameraConfig& config) const;

 private:
  explicit TimeBase(std::int64_t tps) : ticks_per_second_(tps) {}
  std::int64_t ticks_per_second_;
};

// Integration windows of a camera, on the tick axis, for every frame index
// (negative included: streams are stationary) whose windows intersect
// `window`. Results are clipped to `window`.
std::vector<TickInterval> integration_ticks(const CameraConfig& config,
                                            const QuadTiming& timing,
                                            const TimeBase& base,
                                            std::int64_t offset_ticks,
                                            TickInterval window);

// Same, in seconds. Throws InfeasibleTiming for infeasible configs and
// std::invalid_argument for an empty window.
IntervalSet integration_intervals(const CameraConfig& config,
                                  Seconds trigger_offset, TimeWindow window);

}  // namespace tofmux
