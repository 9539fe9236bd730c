#include "tofmux/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "tofmux/error.hpp"

namespace tofmux {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<CameraConfig> configs_of(const Scenario& s) {
  std::vector<CameraConfig> out;
  out.reserve(s.cameras.size());
  for (const auto& c : s.cameras) out.push_back(c.config);
  return out;
}

// theta[i][j] = -theta[j][i]; one draw per unordered pair, row-major over
// i < j, so the table depends only on the seed and the camera count.
std::vector<std::vector<double>> relative_phases(std::uint64_t seed,
                                                 std::size_t n) {
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> theta(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      theta[i][j] = kTwoPi * u;
      theta[j][i] = -theta[i][j];
    }
  }
  return theta;
}

ModulationParams pixel_params(double gain, double reflectivity, double depth,
                              double mod_freq) {
  const double k = gain * reflectivity / (depth * depth);
  ModulationParams p;
  p.a_r = k;
  p.b_r = k;
  p.a_d = 1.0;
  p.b_d = 1.0;
  p.mod_freq = mod_freq;
  p.tau = 2.0 * depth / kSpeedOfLight;
  return p;
}

double periods_per_quad(const CameraConfig& c, const QuadTiming& t) {
  return static_cast<double>(t.t_qin) / static_cast<double>(c.sys_clock_freq) *
         c.mod_freq;
}

}  // namespace

void Scenario::validate() const {
  if (cameras.empty()) throw ScenarioInvalid("scenario has no cameras");
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ScenarioInvalid("duration must be > 0");
  }
  double max_depth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const auto& cam = cameras[i];
    try {
      cam.config.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioInvalid("camera " + std::to_string(i) + ": " + e.what());
    }
    derive_quad_timing(cam.config);
    if (!(cam.trigger_offset >= 0.0) || !std::isfinite(cam.trigger_offset)) {
      throw ScenarioInvalid("camera " + std::to_string(i) +
                            ": trigger offset must be >= 0");
    }
    max_depth = std::min(max_depth, ambiguity_range(cam.config.mod_freq));
  }
  scene.validate(max_depth);
  if (!(cross_gain >= 0.0) || !std::isfinite(cross_gain)) {
    throw ScenarioInvalid("cross_gain must be >= 0");
  }
  if (well_capacity && !(*well_capacity > 0.0)) {
    throw ScenarioInvalid("well_capacity must be > 0");
  }
  if (!well_capacity && !(well_capacity_factor > 0.0)) {
    throw ScenarioInvalid("well_capacity_factor must be > 0");
  }
}

double resolve_well_capacity(const Scenario& scenario) {
  if (scenario.well_capacity) return *scenario.well_capacity;
  const auto& cam = scenario.cameras.at(0).config;
  const QuadTiming t = derive_quad_timing(cam);
  const auto& refl = scenario.scene.reflectivity;
  const double brightest = *std::max_element(refl.begin(), refl.end());
  const ModulationParams p =
      pixel_params(1.0, brightest, scenario.scene.nearest(), cam.mod_freq);
  const CorrelationValue c = correlate_closed_form(p, 0.0);
  const double peak = (c.a_c + c.b_c) * periods_per_quad(cam, t);
  return scenario.well_capacity_factor * peak;
}

StreamSimulator::StreamSimulator(const Scenario& scenario, std::size_t camera)
    : camera_(camera),
      config_(scenario.cameras.at(camera).config),
      timing_(derive_quad_timing(config_)),
      base_(TimeBase::for_configs(configs_of(scenario))) {
  scenario.validate();
  const auto& scene = scenario.scene;
  rows_ = scene.rows;
  cols_ = scene.cols;
  quads_ = config_.quads_per_frame();
  mod_freq_ = config_.mod_freq;
  periods_per_quad_ = periods_per_quad(config_, timing_);
  capacity_ = resolve_well_capacity(scenario);
  offset_ticks_ = base_.to_ticks(scenario.cameras[camera].trigger_offset);
  period_ticks_ = base_.frame_period_ticks(config_);

  const std::int64_t end = base_.to_ticks(scenario.duration);
  frame_count_ = offset_ticks_ < end
                     ? (end - offset_ticks_ + period_ticks_ - 1) / period_ticks_
                     : 0;

  const std::size_t n_px = scene.pixel_count();
  std::vector<double> psi(static_cast<std::size_t>(quads_));
  for (int q = 0; q < quads_; ++q) psi[q] = kTwoPi * q / quads_;

  own_.resize(n_px * quads_);
  for (std::size_t p = 0; p < n_px; ++p) {
    const ModulationParams own =
        pixel_params(1.0, scene.reflectivity[p], scene.depth[p], mod_freq_);
    for (int q = 0; q < quads_; ++q) {
      own_[p * quads_ + q] =
          correlate_closed_form(own, psi[q]).value * periods_per_quad_;
    }
  }

  const auto theta = relative_phases(scenario.seed, scenario.cameras.size());
  for (std::size_t j = 0; j < scenario.cameras.size(); ++j) {
    if (j == camera) continue;
    const auto& other = scenario.cameras[j];
    Interferer in{j, other.config, derive_quad_timing(other.config),
                  base_.to_ticks(other.trigger_offset), {}};
    const bool coherent =
        scenario.coherent && other.config.mod_freq == config_.mod_freq;
    in.contribution.resize(n_px * quads_);
    for (std::size_t p = 0; p < n_px; ++p) {
      const ModulationParams own =
          pixel_params(1.0, scene.reflectivity[p], scene.depth[p], mod_freq_);
      const ModulationParams light =
          pixel_params(scenario.cross_gain, scene.reflectivity[p],
                       scene.depth[p], other.config.mod_freq);
      for (int q = 0; q < quads_; ++q) {
        in.contribution[p * quads_ + q] = interference_contribution(
            own, light, psi[q], coherent, theta[camera][j]);
      }
    }
    interferers_.push_back(std::move(in));
  }
}

std::vector<std::vector<std::int64_t>> StreamSimulator::quad_overlap_ticks(
    std::int64_t k) const {
  const std::int64_t start = offset_ticks_ + k * period_ticks_;
  const std::int64_t quad = base_.cycles_to_ticks(timing_.t_qt, config_);
  const std::int64_t lead = base_.cycles_to_ticks(timing_.t_rs, config_);
  const std::int64_t width = base_.cycles_to_ticks(timing_.t_qin, config_);

  std::vector<std::vector<std::int64_t>> out;
  out.reserve(interferers_.size());
  for (const auto& in : interferers_) {
    std::vector<std::int64_t> per_quad(static_cast<std::size_t>(quads_), 0);
    if (width > 0) {
      const TickInterval span{start + lead,
                              start + (quads_ - 1) * quad + lead + width};
      const auto windows =
          integration_ticks(in.config, in.timing, base_, in.offset_ticks, span);
      for (int q = 0; q < quads_; ++q) {
        const TickInterval own{start + q * quad + lead,
                               start + q * quad + lead + width};
        per_quad[q] = intersection_ticks(std::span(&own, 1), windows);
      }
    }
    out.push_back(std::move(per_quad));
  }
  return out;
}

SimFrame StreamSimulator::frame(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("frame index must be >= 0");
  SimFrame f;
  f.camera_id = camera_;
  f.frame_index = k;
  f.timestamp = base_.to_seconds(offset_ticks_ + k * period_ticks_);
  f.rows = rows_;
  f.cols = cols_;

  const auto overlap = quad_overlap_ticks(k);
  const double width = static_cast<double>(
      base_.cycles_to_ticks(timing_.t_qin, config_));
  std::int64_t total = 0;
  // scale[i][q] = periods of interferer light in quad q
  std::vector<std::vector<double>> scale(interferers_.size());
  for (std::size_t i = 0; i < interferers_.size(); ++i) {
    scale[i].resize(static_cast<std::size_t>(quads_));
    for (int q = 0; q < quads_; ++q) {
      total += overlap[i][q];
      scale[i][q] = overlap[i][q] == 0
                        ? 0.0
                        : static_cast<double>(overlap[i][q]) / width *
                              periods_per_quad_;
    }
  }
  f.overlap_seconds = base_.to_seconds(total);

  const std::size_t n_px = static_cast<std::size_t>(rows_) * cols_;
  f.depth.assign(n_px, std::numeric_limits<double>::quiet_NaN());
  f.saturation_mask.assign(n_px, 0);
  std::vector<double> buckets(static_cast<std::size_t>(quads_));
  for (std::size_t p = 0; p < n_px; ++p) {
    for (int q = 0; q < quads_; ++q) {
      double b = own_[p * quads_ + q];
      for (std::size_t i = 0; i < interferers_.size(); ++i) {
        if (scale[i][q] != 0.0) {
          b += scale[i][q] * interferers_[i].contribution[p * quads_ + q];
        }
      }
      buckets[q] = b;
    }
    if (any_saturated(buckets, capacity_)) {
      f.saturation_mask[p] = 1;
      ++f.saturated_count;
      continue;
    }
    f.depth[p] = phase_to_depth(estimate_phase(buckets), mod_freq_);
  }
  return f;
}

std::vector<FrameStream> simulate_stream(const Scenario& scenario) {
  scenario.validate();
  std::vector<FrameStream> out;
  out.reserve(scenario.cameras.size());
  for (std::size_t c = 0; c < scenario.cameras.size(); ++c) {
    const StreamSimulator sim(scenario, c);
    FrameStream stream;
    stream.reserve(static_cast<std::size_t>(sim.frame_count()));
    for (std::int64_t k = 0; k < sim.frame_count(); ++k) {
      stream.push_back(sim.frame(k));
    }
    out.push_back(std::move(stream));
  }
  return out;
}

std::optional<std::int64_t> beat_period(const CameraConfig& a,
                                        const CameraConfig& b,
                                        std::int64_t max_period) {
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
  derive_quad_timing(a);
  derive_quad_timing(b);
  // Frame k of a starts at k / fa; modulo b's quad period 1 / (fb Nb) that
  // position is k fb Nb / fa mod 1.
  const std::int64_t fa = a.frame_rate_micro_hz();
  const std::int64_t fb = b.frame_rate_micro_hz();
  const std::int64_t step = fb * b.quads_per_frame();
  const std::int64_t k = fa / std::gcd(fa, step % fa);
  if (k > max_period) return std::nullopt;
  return k;
}

}  // namespace tofmux
