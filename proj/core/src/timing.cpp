#include "tofmux/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tofmux/error.hpp"

namespace tofmux {

namespace {

__extension__ using i128 = __int128;

constexpr std::int64_t kMicro = 1'000'000;
constexpr std::int64_t kBillion = 1'000'000'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const i128 wide = static_cast<i128>(a / g) * b;
  if (wide > (static_cast<i128>(1) << 62)) {
    throw std::overflow_error(
        "common tick rate overflows; frame rates and clocks are too "
        "incommensurate");
  }
  return static_cast<std::int64_t>(wide);
}

// Denominator of the frame period 1e6 / frame_rate_micro_hz once reduced.
std::int64_t frame_period_denominator(const CameraConfig& c) {
  const std::int64_t uhz = c.frame_rate_micro_hz();
  return uhz / std::gcd(uhz, kMicro);
}

}  // namespace

void CameraConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid camera config: " + what);
  };
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) fail("frame_rate must be > 0");
  if (frame_rate_micro_hz() <= 0) fail("frame_rate below 1 micro-hertz");
  if (!(mod_freq > 0.0) || !std::isfinite(mod_freq)) fail("mod_freq must be > 0");
  if (sys_clock_freq <= 0) fail("sys_clock_freq must be > 0");
  if (!(intg_duty_cycle > 0.0 && intg_duty_cycle <= 1.0)) {
    fail("intg_duty_cycle must be in (0, 1]");
  }
  if (n_col_tot <= 0 || n_row <= 0) fail("sensor dimensions must be > 0");
  if (n_quads < 3) fail("n_quads must be >= 3");
  if (n_subframes < 1) fail("n_subframes must be >= 1");
  if (reset_cycles < 0) fail("reset_cycles must be >= 0");
}

std::int64_t CameraConfig::frame_rate_micro_hz() const {
  return std::llround(frame_rate * static_cast<double>(kMicro));
}

std::int64_t CameraConfig::duty_ppb() const {
  return std::llround(intg_duty_cycle * static_cast<double>(kBillion));
}

std::int64_t readout_cycles(std::int64_t n_col_tot, std::int64_t n_row) {
  if (n_col_tot <= 0 || n_row <= 0) {
    throw std::invalid_argument("readout_cycles: sensor dimensions must be > 0");
  }
  const std::int64_t pixels = n_row * n_col_tot;
  return 401 + n_col_tot + (pixels + 3) / 4;
}

std::int64_t quad_total_cycles(const CameraConfig& config) {
  config.validate();
  const i128 num = static_cast<i128>(config.sys_clock_freq) * kMicro;
  const i128 den = static_cast<i128>(config.frame_rate_micro_hz()) *
                       config.n_quads * config.n_subframes;
  return static_cast<std::int64_t>(num / den);
}

QuadTiming derive_quad_timing(const CameraConfig& config) {
  QuadTiming t;
  t.t_qt = quad_total_cycles(config);
  t.t_rs = config.reset_cycles;
  t.t_qin = static_cast<std::int64_t>(static_cast<i128>(t.t_qt) *
                                      config.duty_ppb() / kBillion);
  t.t_rd = readout_cycles(config.n_col_tot, config.n_row);
  t.t_qd = t.t_qt - t.t_rs - t.t_qin - t.t_rd;
  if (t.t_qd < 0) {
    throw InfeasibleTiming(
        "quad of " + std::to_string(t.t_qt) + " cycles cannot hold reset " +
        std::to_string(t.t_rs) + " + integration " + std::to_string(t.t_qin) +
        " + readout " + std::to_string(t.t_rd) + " cycles");
  }
  return t;
}

std::int64_t intersection_ticks(std::span<const TickInterval> a,
                                std::span<const TickInterval> b) {
  std::int64_t total = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t lo = std::max(a[i].begin, b[j].begin);
    const std::int64_t hi = std::min(a[i].end, b[j].end);
    if (hi > lo) total += hi - lo;
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

IntervalSet::IntervalSet(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(intervals_[i].start < intervals_[i].end)) {
      throw std::invalid_argument("IntervalSet: interval with start >= end");
    }
    if (i > 0 && !(intervals_[i - 1].end < intervals_[i].start)) {
      throw std::invalid_argument(
          "IntervalSet: intervals must be sorted, disjoint and non-touching");
    }
  }
}

Seconds IntervalSet::total_length() const {
  Seconds total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

Seconds IntervalSet::intersection_length(const IntervalSet& other) const {
  Seconds total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const Seconds lo = std::max(a[i].start, b[j].start);
    const Seconds hi = std::min(a[i].end, b[j].end);
    if (hi > lo) total += hi - lo;
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

TimeBase TimeBase::for_configs(std::span<const CameraConfig> configs) {
  std::int64_t tps = kMicro;
  for (const auto& c : configs) {
    c.validate();
    tps = checked_lcm(tps, c.sys_clock_freq);
    tps = checked_lcm(tps, frame_period_denominator(c));
  }
  return TimeBase(tps);
}

TimeBase TimeBase::for_config(const CameraConfig& config) {
  return for_configs(std::span<const CameraConfig>(&config, 1));
}

TimeBase TimeBase::for_pair(const CameraConfig& a, const CameraConfig& b) {
  const CameraConfig both[] = {a, b};
  return for_configs(both);
}

std::int64_t TimeBase::to_ticks(Seconds t) const {
  const double scaled = t * static_cast<double>(ticks_per_second_);
  if (!std::isfinite(scaled) ||
      std::fabs(scaled) > static_cast<double>(std::int64_t{1} << 62)) {
    throw std::overflow_error("time value out of range for the tick axis");
  }
  return std::llround(scaled);
}

Seconds TimeBase::to_seconds(std::int64_t ticks) const {
  return static_cast<double>(ticks) / static_cast<double>(ticks_per_second_);
}

std::int64_t TimeBase::cycles_to_ticks(std::int64_t cycles,
                                       const CameraConfig& config) const {
  if (ticks_per_second_ % config.sys_clock_freq != 0) {
    throw std::logic_error("TimeBase does not cover this camera clock");
  }
  return cycles * (ticks_per_second_ / config.sys_clock_freq);
}

std::int64_t TimeBase::frame_period_ticks(const CameraConfig& config) const {
  const std::int64_t uhz = config.frame_rate_micro_hz();
  const i128 num = static_cast<i128>(ticks_per_second_) * kMicro;
  if (num % uhz != 0) {
    throw std::logic_error("TimeBase does not cover this frame rate");
  }
  return static_cast<std::int64_t>(num / uhz);
}

std::vector<TickInterval> integration_ticks(const CameraConfig& config,
                                            const QuadTiming& timing,
                                            const TimeBase& base,
                                            std::int64_t offset_ticks,
                                            TickInterval window) {
  std::vector<TickInterval> out;
  if (window.end <= window.begin || timing.t_qin == 0) return out;

  const std::int64_t period = base.frame_period_ticks(config);
  const std::int64_t quad = base.cycles_to_ticks(timing.t_qt, config);
  const std::int64_t lead = base.cycles_to_ticks(timing.t_rs, config);
  const std::int64_t width = base.cycles_to_ticks(timing.t_qin, config);
  const int quads = config.quads_per_frame();

  const std::int64_t first = floor_div(window.begin - offset_ticks, period) - 1;
  const std::int64_t last = floor_div(window.end - offset_ticks, period);
  for (std::int64_t k = first; k <= last; ++k) {
    const std::int64_t frame_start = offset_ticks + k * period;
    for (int q = 0; q < quads; ++q) {
      const std::int64_t s = frame_start + q * quad + lead;
      const std::int64_t e = s + width;
      if (e <= window.begin || s >= window.end) continue;
      out.push_back({std::max(s, window.begin), std::min(e, window.end)});
    }
  }
  return out;
}

IntervalSet integration_intervals(const CameraConfig& config,
                                  Seconds trigger_offset, TimeWindow window) {
  if (!(window.start < window.end)) {
    throw std::invalid_argument("integration_intervals: empty window");
  }
  const QuadTiming timing = derive_quad_timing(config);
  const TimeBase base = TimeBase::for_config(config);
  const auto ticks =
      integration_ticks(config, timing, base, base.to_ticks(trigger_offset),
                        {base.to_ticks(window.start), base.to_ticks(window.end)});
  std::vector<Interval> seconds;
  seconds.reserve(ticks.size());
  for (const auto& t : ticks) {
    seconds.push_back({base.to_seconds(t.begin), base.to_seconds(t.end)});
  }
  return IntervalSet(std::move(seconds));
}

}  // namespace tofmux
