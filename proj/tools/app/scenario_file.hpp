#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tofmux/scene.hpp"
#include "tofmux/simulator.hpp"

namespace tofmux::app {

enum class ExperimentKind { Schedule, Sweep, Periodicity, Extract };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& text);

struct ExperimentKnobs {
  std::optional<ExperimentKind> kind;
  double step_us = 1000.0;
  int burst_frames = 3;
  std::size_t seed_count = 3;
  std::optional<double> tolerance_px;
  std::optional<double> tie_band_px;
  bool write_depth = false;
};

struct ScenarioFile {
  Scenario scenario;
  BumpSceneParams scene;
  ExperimentKnobs experiment;
  // Per camera: set when the offset was given in clock cycles.
  std::vector<std::optional<std::int64_t>> offset_cycles;
};

// Fail-closed: unknown keys, wrong types and missing required keys throw
// ScenarioInvalid naming the offending key.
ScenarioFile parse_scenario(const std::string& yaml_text);
ScenarioFile load_scenario(const std::filesystem::path& path);

// The scenario with every default filled in, as YAML accepted by
// parse_scenario.
std::string resolved_yaml(const ScenarioFile& file);

// Shortest text that reads back as the same double.
std::string format_double(double v);

}  // namespace tofmux::app
