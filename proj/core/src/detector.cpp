#include "tofmux/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tofmux/error.hpp"

namespace tofmux {

std::size_t count_saturated(const SimFrame& frame) {
  return static_cast<std::size_t>(
      std::count_if(frame.saturation_mask.begin(), frame.saturation_mask.end(),
                    [](std::uint8_t m) { return m != 0; }));
}

ShiftSweepResult sweep_shifts(const Scenario& scenario,
                              const SweepOptions& options) {
  if (scenario.cameras.size() != 2) {
    throw std::invalid_argument("sweep_shifts needs exactly two cameras");
  }
  const auto& c0 = scenario.cameras[0];
  const auto& c1 = scenario.cameras[1];
  if (c0.config.frame_rate_micro_hz() != c1.config.frame_rate_micro_hz()) {
    throw RateMismatch(
        "sweep_shifts needs equal frame rates; use periodicity analysis");
  }
  if (options.burst_frames < 1) {
    throw std::invalid_argument("burst_frames must be >= 1");
  }
  scenario.validate();

  const std::vector<CameraConfig> configs{c0.config, c1.config};
  const TimeBase base = TimeBase::for_configs(configs);
  const std::int64_t period = base.frame_period_ticks(c0.config);
  const std::int64_t step = base.to_ticks(options.step);
  if (step <= 0 || step > period) {
    throw std::invalid_argument("sweep step must be in (0, frame period]");
  }

  Scenario s = scenario;
  s.well_capacity = resolve_well_capacity(scenario);
  const std::int64_t off0 = base.to_ticks(c0.trigger_offset);
  const std::int64_t off1 = base.to_ticks(c1.trigger_offset);
  s.duration = base.to_seconds(off0 + options.burst_frames * period);

  ShiftSweepResult out;
  out.tie_band = options.tie_band.value_or(
      0.01 * static_cast<double>(scenario.scene.pixel_count()));
  for (std::int64_t shift = 0; shift < period; shift += step) {
    s.cameras[1].trigger_offset = base.to_seconds((off1 + shift) % period);
    const StreamSimulator sim(s, 0);
    double sum = 0.0;
    for (int k = 0; k < options.burst_frames; ++k) {
      sum += static_cast<double>(sim.frame(k).saturated_count);
    }
    out.shifts.push_back(base.to_seconds(shift));
    out.saturated_counts.push_back(sum / options.burst_frames);
  }

  const double lo =
      *std::min_element(out.saturated_counts.begin(), out.saturated_counts.end());
  const double hi =
      *std::max_element(out.saturated_counts.begin(), out.saturated_counts.end());
  for (std::size_t i = 0; i < out.shifts.size(); ++i) {
    const double c = out.saturated_counts[i];
    out.normalized_counts.push_back(hi > 0.0 ? c / hi : 0.0);
    if (c <= lo + out.tie_band) out.mci_free_shifts.push_back(out.shifts[i]);
  }
  return out;
}

std::vector<Interval> predict_free_shifts(const CameraConfig& config,
                                          std::size_t n_cameras) {
  const QuadTiming t = derive_quad_timing(config);
  const TimeBase base = TimeBase::for_config(config);
  const std::int64_t period = base.frame_period_ticks(config);
  const std::int64_t quad = base.cycles_to_ticks(t.t_qt, config);
  const std::int64_t width = base.cycles_to_ticks(t.t_qin, config);
  const int n = config.quads_per_frame();
  if (n_cameras <= 1 || width == 0) {
    return {Interval{0.0, base.to_seconds(period)}};
  }

  // Shift d of camera 1 overlaps iff some quad start difference lies within
  // (d - width, d + width).
  std::vector<TickInterval> blocked;
  for (std::int64_t m = -1; m <= 2; ++m) {
    for (int i = -(n - 1); i <= n - 1; ++i) {
      const std::int64_t d = i * quad + m * period;
      if (d + width > 0 && d - width < period) {
        blocked.push_back({d - width, d + width});
      }
    }
  }
  std::sort(blocked.begin(), blocked.end(),
            [](const TickInterval& x, const TickInterval& y) {
              return x.begin < y.begin;
            });

  // open intervals; touching ones stay apart so the shared point is free
  std::vector<TickInterval> merged;
  for (const auto& b : blocked) {
    if (!merged.empty() && b.begin < merged.back().end) {
      merged.back().end = std::max(merged.back().end, b.end);
    } else {
      merged.push_back(b);
    }
  }

  std::vector<Interval> out;
  std::int64_t pos = 0;
  for (const auto& m : merged) {
    if (m.end <= pos) continue;
    if (m.begin >= pos && pos <= period) {
      out.push_back({base.to_seconds(pos),
                     base.to_seconds(std::min(m.begin, period))});
    }
    pos = m.end;
  }
  if (pos <= period) {
    out.push_back({base.to_seconds(pos), base.to_seconds(period)});
  }
  return out;
}

bool contains_shift(std::span<const Interval> free, Seconds shift) {
  return std::any_of(free.begin(), free.end(), [&](const Interval& iv) {
    return iv.start <= shift && shift <= iv.end;
  });
}

std::optional<std::int64_t> label_period(std::span<const FrameLabel> labels) {
  const std::size_t n = labels.size();
  if (n == 0) return std::nullopt;
  if (n == 1) return 1;
  for (std::size_t p = 1; p <= n / 2; ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < n && ok; ++i) {
      ok = labels[i].mci_free == labels[i + p].mci_free;
    }
    if (ok) return static_cast<std::int64_t>(p);
  }
  return std::nullopt;
}

PeriodicityResult periodicity_analysis(std::span<const SimFrame> a,
                                       std::span<const SimFrame> b,
                                       const CameraConfig& config_a,
                                       const CameraConfig& config_b) {
  if (b.empty()) throw std::invalid_argument("periodicity: empty stream b");
  const QuadTiming ta = derive_quad_timing(config_a);
  const QuadTiming tb = derive_quad_timing(config_b);
  const TimeBase base = TimeBase::for_pair(config_a, config_b);
  const std::int64_t period_a = base.frame_period_ticks(config_a);

  std::vector<std::int64_t> b_ticks;
  b_ticks.reserve(b.size());
  for (const auto& f : b) b_ticks.push_back(base.to_ticks(f.timestamp));
  if (!std::is_sorted(b_ticks.begin(), b_ticks.end())) {
    throw std::invalid_argument("periodicity: stream b not in time order");
  }

  PeriodicityResult out;
  out.labels.reserve(a.size());
  for (const auto& f : a) {
    const std::int64_t start = base.to_ticks(f.timestamp);
    auto it = std::lower_bound(b_ticks.begin(), b_ticks.end(), start);
    if (it == b_ticks.end() ||
        (it != b_ticks.begin() && start - *(it - 1) <= *it - start)) {
      --it;
    }
    const auto j = static_cast<std::size_t>(it - b_ticks.begin());

    const TickInterval frame{start, start + period_a};
    const auto own = integration_ticks(config_a, ta, base, start, frame);
    const auto other = integration_ticks(config_b, tb, base, *it, frame);
    const std::int64_t overlap = intersection_ticks(own, other);

    out.labels.push_back(FrameLabel{f.frame_index, f.timestamp,
                                    b[j].frame_index, base.to_seconds(overlap),
                                    overlap == 0});
  }
  out.period = label_period(out.labels);
  return out;
}

ExtractionResult extract_mci_free(std::span<const SimFrame> stream,
                                  std::size_t seed_count,
                                  std::optional<double> tolerance) {
  if (seed_count < 3) throw std::invalid_argument("seed_count must be >= 3");
  if (stream.size() < seed_count) {
    throw InsufficientFrames(stream.size(), seed_count);
  }
  const double tol = tolerance.value_or(
      0.02 * static_cast<double>(stream.front().saturation_mask.size()));
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");

  std::vector<std::size_t> order(stream.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return stream[x].saturated_count < stream[y].saturated_count;
  });

  std::vector<bool> inlier(stream.size(), false);
  for (std::size_t i = 0; i < seed_count; ++i) inlier[order[i]] = true;

  ExtractionResult out;
  for (;;) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (!inlier[i]) continue;
      sum += static_cast<double>(stream[i].saturated_count);
      ++n;
    }
    out.fitted_level = sum / static_cast<double>(n);
    bool grew = false;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (inlier[i]) continue;
      const double c = static_cast<double>(stream[i].saturated_count);
      if (std::fabs(c - out.fitted_level) <= tol) {
        inlier[i] = true;
        grew = true;
      }
    }
    if (!grew) break;
    ++out.iterations;
  }
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (inlier[i]) out.inlier_frames.push_back(stream[i].frame_index);
  }
  std::sort(out.inlier_frames.begin(), out.inlier_frames.end());
  return out;
}

double flicker_metric(std::span<const SimFrame> frames,
                      double ambiguity_range) {
  if (frames.size() < 2) throw std::invalid_argument("flicker needs >= 2 frames");
  if (!(ambiguity_range > 0.0)) {
    throw std::invalid_argument("ambiguity_range must be > 0");
  }
  const std::size_t n_px = frames.front().depth.size();
  for (const auto& f : frames) {
    if (f.rows != frames.front().rows || f.cols != frames.front().cols ||
        f.depth.size() != n_px || f.saturation_mask.size() != n_px) {
      throw std::invalid_argument("flicker: frames differ in dimensions");
    }
  }

  double total = 0.0;
  std::size_t valid = 0;
  const double m = static_cast<double>(frames.size());
  for (std::size_t p = 0; p < n_px; ++p) {
    bool ok = true;
    for (const auto& f : frames) ok = ok && !f.is_hole(p);
    if (!ok) continue;
    // shifted by the first sample so identical values give exactly zero
    const double ref = frames.front().depth[p];
    double s = 0.0;
    double s2 = 0.0;
    for (const auto& f : frames) {
      const double d = f.depth[p] - ref;
      s += d;
      s2 += d * d;
    }
    const double var = std::max(0.0, (s2 - s * s / m) / m);
    total += std::sqrt(var);
    ++valid;
  }
  if (valid == 0) throw NoCommonValidPixels();
  return total / static_cast<double>(valid) / ambiguity_range;
}

std::vector<SimFrame> select_frames(std::span<const SimFrame> stream,
                                    std::span<const std::int64_t> indices) {
  std::vector<SimFrame> out;
  for (const auto idx : indices) {
    const auto it = std::find_if(stream.begin(), stream.end(), [&](const SimFrame& f) {
      return f.frame_index == idx;
    });
    if (it == stream.end()) {
      throw std::invalid_argument("frame " + std::to_string(idx) +
                                  " not in stream");
    }
    out.push_back(*it);
  }
  return out;
}

}  // namespace tofmux
