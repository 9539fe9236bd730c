#include "scenario_file.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tofmux/error.hpp"

namespace tofmux::app {

namespace {

using Keys = std::set<std::string>;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ScenarioInvalid("scenario: " + where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where,
                const Keys& allowed) {
  if (!node.IsMap()) bad(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) bad(where, "unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& map, const std::string& where,
          const std::string& key, T& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  if (!n.IsScalar()) bad(where + "." + key, "expected a scalar");
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    bad(where + "." + key, "cannot convert '" + n.Scalar() + "'");
  }
}

template <class T>
void read_opt(const YAML::Node& map, const std::string& where,
              const std::string& key, std::optional<T>& out) {
  const YAML::Node n = map[key];
  if (!n || n.IsNull()) return;
  T v{};
  read(map, where, key, v);
  out = v;
}

CameraConfig parse_camera(const YAML::Node& node, const std::string& where,
                          Seconds& offset,
                          std::optional<std::int64_t>& cycles) {
  check_keys(node, where,
             {"frame_rate_fps", "n_subframes", "n_quads", "intg_duty_cycle",
              "sys_clock_freq_hz", "n_col_tot", "n_row", "reset_cycles",
              "mod_freq_hz", "trigger_offset_us", "trigger_offset_cycles"});
  CameraConfig c;
  read(node, where, "frame_rate_fps", c.frame_rate);
  read(node, where, "n_subframes", c.n_subframes);
  read(node, where, "n_quads", c.n_quads);
  read(node, where, "intg_duty_cycle", c.intg_duty_cycle);
  read(node, where, "sys_clock_freq_hz", c.sys_clock_freq);
  read(node, where, "n_col_tot", c.n_col_tot);
  read(node, where, "n_row", c.n_row);
  read(node, where, "reset_cycles", c.reset_cycles);
  read(node, where, "mod_freq_hz", c.mod_freq);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    bad(where, e.what());
  }

  if (node["trigger_offset_us"] && node["trigger_offset_cycles"]) {
    bad(where, "give trigger_offset_us or trigger_offset_cycles, not both");
  }
  std::int64_t us = 0;
  read(node, where, "trigger_offset_us", us);
  offset = static_cast<double>(us) / 1e6;
  if (node["trigger_offset_cycles"]) {
    std::int64_t n = 0;
    read(node, where, "trigger_offset_cycles", n);
    cycles = n;
    offset = static_cast<double>(n) / static_cast<double>(c.sys_clock_freq);
  }
  if (offset < 0.0) bad(where, "trigger offset must be >= 0");
  return c;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Schedule: return "schedule";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Periodicity: return "periodicity";
    case ExperimentKind::Extract: return "extract";
  }
  return "?";
}

std::optional<ExperimentKind> parse_kind(const std::string& text) {
  for (auto k : {ExperimentKind::Schedule, ExperimentKind::Sweep,
                 ExperimentKind::Periodicity, ExperimentKind::Extract}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  const bool integral = std::isfinite(v) && std::fabs(v) < 1e15 && v == std::trunc(v);
  const auto r = integral
                     ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                     : std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  // keep it a float literal for YAML readers
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

ScenarioFile parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ScenarioInvalid(std::string("scenario: YAML syntax: ") + e.what());
  }
  if (!root.IsMap()) bad("document", "expected a mapping");
  check_keys(root, "document", {"cameras", "scene", "sim", "experiment"});

  ScenarioFile out;
  const YAML::Node cams = root["cameras"];
  if (!cams) bad("document", "missing required key 'cameras'");
  if (!cams.IsSequence() || cams.size() == 0) {
    bad("cameras", "expected a non-empty list");
  }
  for (std::size_t i = 0; i < cams.size(); ++i) {
    CameraSetup setup;
    std::optional<std::int64_t> cycles;
    setup.config = parse_camera(cams[i], "cameras[" + std::to_string(i) + "]",
                                setup.trigger_offset, cycles);
    out.scenario.cameras.push_back(setup);
    out.offset_cycles.push_back(cycles);
  }

  if (const YAML::Node n = root["scene"]) {
    check_keys(n, "scene",
               {"plane_depth_m", "bump_radius_m", "reflectivity", "cols", "rows",
                "fov_h_deg", "lambertian"});
    read(n, "scene", "plane_depth_m", out.scene.plane_depth);
    read(n, "scene", "bump_radius_m", out.scene.bump_radius);
    read(n, "scene", "reflectivity", out.scene.reflectivity);
    read(n, "scene", "cols", out.scene.cols);
    read(n, "scene", "rows", out.scene.rows);
    read(n, "scene", "fov_h_deg", out.scene.fov_h_deg);
    read(n, "scene", "lambertian", out.scene.lambertian);
  }
  out.scenario.scene = make_bump_scene(out.scene);

  if (const YAML::Node n = root["sim"]) {
    check_keys(n, "sim",
               {"duration_s", "seed", "well_capacity", "well_capacity_factor",
                "coherent", "cross_gain"});
    read(n, "sim", "duration_s", out.scenario.duration);
    read(n, "sim", "seed", out.scenario.seed);
    read_opt(n, "sim", "well_capacity", out.scenario.well_capacity);
    read(n, "sim", "well_capacity_factor", out.scenario.well_capacity_factor);
    read(n, "sim", "coherent", out.scenario.coherent);
    read(n, "sim", "cross_gain", out.scenario.cross_gain);
  }

  if (const YAML::Node n = root["experiment"]) {
    check_keys(n, "experiment",
               {"kind", "step_us", "burst_frames", "seed_count", "tolerance_px",
                "tie_band_px", "write_depth"});
    auto& e = out.experiment;
    if (n["kind"]) {
      std::string kind;
      read(n, "experiment", "kind", kind);
      e.kind = parse_kind(kind);
      if (!e.kind) bad("experiment.kind", "unknown experiment '" + kind + "'");
    }
    std::int64_t step = 1000;
    read(n, "experiment", "step_us", step);
    if (step <= 0) bad("experiment.step_us", "must be > 0");
    e.step_us = static_cast<double>(step);
    read(n, "experiment", "burst_frames", e.burst_frames);
    read(n, "experiment", "seed_count", e.seed_count);
    read_opt(n, "experiment", "tolerance_px", e.tolerance_px);
    read_opt(n, "experiment", "tie_band_px", e.tie_band_px);
    read(n, "experiment", "write_depth", e.write_depth);
  }

  out.scenario.validate();
  return out;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open scenario file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

std::string resolved_yaml(const ScenarioFile& file) {
  const auto& s = file.scenario;
  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "cameras" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < s.cameras.size(); ++i) {
    const auto& c = s.cameras[i].config;
    y << YAML::BeginMap;
    y << YAML::Key << "frame_rate_fps" << YAML::Value << format_double(c.frame_rate);
    y << YAML::Key << "n_subframes" << YAML::Value << c.n_subframes;
    y << YAML::Key << "n_quads" << YAML::Value << c.n_quads;
    y << YAML::Key << "intg_duty_cycle" << YAML::Value
      << format_double(c.intg_duty_cycle);
    y << YAML::Key << "sys_clock_freq_hz" << YAML::Value << c.sys_clock_freq;
    y << YAML::Key << "n_col_tot" << YAML::Value << c.n_col_tot;
    y << YAML::Key << "n_row" << YAML::Value << c.n_row;
    y << YAML::Key << "reset_cycles" << YAML::Value << c.reset_cycles;
    y << YAML::Key << "mod_freq_hz" << YAML::Value << format_double(c.mod_freq);
    if (i < file.offset_cycles.size() && file.offset_cycles[i]) {
      y << YAML::Key << "trigger_offset_cycles" << YAML::Value
        << *file.offset_cycles[i];
    } else {
      y << YAML::Key << "trigger_offset_us" << YAML::Value
        << std::llround(s.cameras[i].trigger_offset * 1e6);
    }
    y << YAML::EndMap;
  }
  y << YAML::EndSeq;

  const auto& sc = file.scene;
  y << YAML::Key << "scene" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "plane_depth_m" << YAML::Value << format_double(sc.plane_depth);
  y << YAML::Key << "bump_radius_m" << YAML::Value << format_double(sc.bump_radius);
  y << YAML::Key << "reflectivity" << YAML::Value << format_double(sc.reflectivity);
  y << YAML::Key << "cols" << YAML::Value << sc.cols;
  y << YAML::Key << "rows" << YAML::Value << sc.rows;
  y << YAML::Key << "fov_h_deg" << YAML::Value << format_double(sc.fov_h_deg);
  y << YAML::Key << "lambertian" << YAML::Value << sc.lambertian;
  y << YAML::EndMap;

  y << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "duration_s" << YAML::Value << format_double(s.duration);
  y << YAML::Key << "seed" << YAML::Value << s.seed;
  y << YAML::Key << "well_capacity" << YAML::Value;
  if (s.well_capacity) {
    y << format_double(*s.well_capacity);
  } else {
    y << YAML::Null;
  }
  y << YAML::Key << "well_capacity_factor" << YAML::Value
    << format_double(s.well_capacity_factor);
  y << YAML::Key << "coherent" << YAML::Value << s.coherent;
  y << YAML::Key << "cross_gain" << YAML::Value << format_double(s.cross_gain);
  y << YAML::EndMap;

  const auto& e = file.experiment;
  y << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  if (e.kind) y << YAML::Key << "kind" << YAML::Value << to_string(*e.kind);
  y << YAML::Key << "step_us" << YAML::Value << std::llround(e.step_us);
  y << YAML::Key << "burst_frames" << YAML::Value << e.burst_frames;
  y << YAML::Key << "seed_count" << YAML::Value << e.seed_count;
  const double px = static_cast<double>(s.scene.pixel_count());
  y << YAML::Key << "tolerance_px" << YAML::Value
    << format_double(e.tolerance_px.value_or(0.02 * px));
  y << YAML::Key << "tie_band_px" << YAML::Value
    << format_double(e.tie_band_px.value_or(0.01 * px));
  y << YAML::Key << "write_depth" << YAML::Value << e.write_depth;
  y << YAML::EndMap;
  y << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

}  // namespace tofmux::app
