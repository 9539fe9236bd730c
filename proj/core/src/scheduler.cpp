#include "tofmux/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

#include "tofmux/error.hpp"

namespace tofmux {

std::size_t max_cameras(const QuadTiming& timing) {
  if (timing.t_qin <= 0) {
    throw std::invalid_argument("max_cameras: integration time must be > 0");
  }
  return static_cast<std::size_t>(timing.t_qt / timing.t_qin);
}

Schedule assign_shifts(const CameraConfig& config, std::size_t n_cameras) {
  if (n_cameras == 0) throw std::invalid_argument("assign_shifts: no cameras");
  const QuadTiming timing = derive_quad_timing(config);
  if (timing.t_qin == 0) {
    // Nothing is ever illuminated; any number of cameras coexist.
    return Schedule{config, std::vector<Seconds>(n_cameras, 0.0)};
  }
  const std::size_t bound = max_cameras(timing);
  if (n_cameras > bound) throw CapacityExceeded(n_cameras, bound);

  Schedule s{config, {}};
  s.offsets.reserve(n_cameras);
  const double clock = static_cast<double>(config.sys_clock_freq);
  for (std::size_t k = 0; k < n_cameras; ++k) {
    const auto cycles = static_cast<std::int64_t>(k) * timing.t_qin;
    s.offsets.push_back(static_cast<double>(cycles) / clock);
  }
  return s;
}

Seconds pairwise_overlap(const CameraConfig& config_a, Seconds offset_a,
                         const CameraConfig& config_b, Seconds offset_b,
                         TimeWindow window) {
  if (!(window.start < window.end)) {
    throw std::invalid_argument("pairwise_overlap: empty window");
  }
  const QuadTiming ta = derive_quad_timing(config_a);
  const QuadTiming tb = derive_quad_timing(config_b);
  const TimeBase base = TimeBase::for_pair(config_a, config_b);
  const TickInterval w{base.to_ticks(window.start), base.to_ticks(window.end)};
  const auto a = integration_ticks(config_a, ta, base, base.to_ticks(offset_a), w);
  const auto b = integration_ticks(config_b, tb, base, base.to_ticks(offset_b), w);
  return base.to_seconds(intersection_ticks(a, b));
}

bool ScheduleReport::valid() const {
  return std::all_of(pairs.begin(), pairs.end(),
                     [](const PairOverlap& p) { return p.overlap == 0.0; });
}

Seconds ScheduleReport::worst() const {
  Seconds w = 0.0;
  for (const auto& p : pairs) w = std::max(w, p.overlap);
  return w;
}

ScheduleReport verify_offsets(const std::vector<CameraConfig>& configs,
                              const std::vector<Seconds>& offsets,
                              TimeWindow window) {
  if (configs.empty() || configs.size() != offsets.size()) {
    throw std::invalid_argument(
        "verify_offsets: need one offset per camera and at least one camera");
  }
  if (!(window.start < window.end)) {
    throw std::invalid_argument("verify_offsets: empty window");
  }
  const TimeBase base = TimeBase::for_configs(configs);
  const TickInterval w{base.to_ticks(window.start), base.to_ticks(window.end)};
  std::vector<std::vector<TickInterval>> windows;
  windows.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    windows.push_back(integration_ticks(configs[i],
                                        derive_quad_timing(configs[i]), base,
                                        base.to_ticks(offsets[i]), w));
  }
  ScheduleReport report;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      report.pairs.push_back(
          {i, j, base.to_seconds(intersection_ticks(windows[i], windows[j]))});
    }
  }
  return report;
}

ScheduleReport verify_schedule(const Schedule& schedule, TimeWindow window) {
  const std::vector<CameraConfig> configs(schedule.offsets.size(),
                                          schedule.config);
  return verify_offsets(configs, schedule.offsets, window);
}

}  // namespace tofmux
