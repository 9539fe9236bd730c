#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "experiments.hpp"
#include "scenario_file.hpp"
#include "tofmux/error.hpp"

using namespace tofmux;
using namespace tofmux::app;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = "cameras:\n  - {frame_rate_fps: 30}\n";

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path out_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "tofmux_app_tests" / name;
  fs::remove_all(d);
  return d;
}

fs::path scenario(const std::string& name) {
  return fs::path(TOFMUX_SCENARIO_DIR) / name;
}

}  // namespace

TEST(ScenarioFile, MinimalUsesDefaults) {
  const ScenarioFile f = parse_scenario(kMinimal);
  ASSERT_EQ(f.scenario.cameras.size(), 1u);
  EXPECT_EQ(f.scenario.cameras[0].config, CameraConfig{});
  EXPECT_EQ(f.scenario.cameras[0].trigger_offset, 0.0);
  EXPECT_EQ(f.scene, BumpSceneParams{});
  EXPECT_FALSE(f.experiment.kind);
  EXPECT_FALSE(f.scenario.well_capacity);
}

TEST(ScenarioFile, OffsetsInMicrosecondsOrCycles) {
  const auto us = parse_scenario("cameras:\n  - {trigger_offset_us: 300}\n");
  EXPECT_DOUBLE_EQ(us.scenario.cameras[0].trigger_offset, 300e-6);
  EXPECT_FALSE(us.offset_cycles[0]);
  const auto cyc = parse_scenario("cameras:\n  - {trigger_offset_cycles: 112000}\n");
  EXPECT_DOUBLE_EQ(cyc.scenario.cameras[0].trigger_offset, 112000 / 48e6);
  EXPECT_EQ(cyc.offset_cycles[0], 112000);
}

TEST(ScenarioFile, FailsClosed) {
  const char* bad[] = {
      "",
      "cameras: []\n",
      "scene: {cols: 4}\n",
      "cameras:\n  - {frame_rate: 30}\n",
      "cameras:\n  - {frame_rate_fps: fast}\n",
      "cameras:\n  - {n_quads: 2}\n",
      "cameras:\n  - {trigger_offset_us: 1, trigger_offset_cycles: 48}\n",
      "cameras:\n  - {trigger_offset_us: -5}\n",
      "cameras:\n  - {trigger_offset_us: 1.5}\n",
      "cameras:\n  - {}\nextra: 1\n",
      "cameras:\n  - {}\nsim: {duration_s: 0}\n",
      "cameras:\n  - {}\nsim: {colour: red}\n",
      "cameras:\n  - {}\nscene: {plane_depth_m: 9}\n",
      "cameras:\n  - {}\nexperiment: {kind: dance}\n",
      "cameras:\n  - {}\nexperiment: {step_us: 0}\n",
      "cameras:\n  - {}\nexperiment: {step_us: [1]}\n",
      "cameras: [\n",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse_scenario(text), ScenarioInvalid) << text;
  }
  EXPECT_THROW(load_scenario("/nonexistent/tofmux.yaml"), IoError);
}

TEST(ScenarioFile, ErrorsNameTheKey) {
  try {
    parse_scenario("cameras:\n  - {}\nsim: {colour: red}\n");
    FAIL();
  } catch (const ScenarioInvalid& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(ScenarioFile, ResolvedYamlRoundTrips) {
  for (const char* name : {"exp1_schedule.yaml", "exp2_sweep.yaml",
                           "exp3_periodicity.yaml", "exp4_extract.yaml"}) {
    const ScenarioFile f = load_scenario(scenario(name));
    const std::string text = resolved_yaml(f);
    const ScenarioFile g = parse_scenario(text);
    EXPECT_EQ(resolved_yaml(g), text) << name;
    ASSERT_EQ(f.scenario.cameras.size(), g.scenario.cameras.size());
    for (std::size_t i = 0; i < f.scenario.cameras.size(); ++i) {
      EXPECT_EQ(f.scenario.cameras[i], g.scenario.cameras[i]);
    }
    EXPECT_EQ(f.scene, g.scene);
    EXPECT_EQ(f.scenario.duration, g.scenario.duration);
    EXPECT_EQ(f.scenario.seed, g.scenario.seed);
    EXPECT_EQ(f.experiment.kind, g.experiment.kind);
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(30), "30.0");
  EXPECT_EQ(format_double(0.28), "0.28");
  EXPECT_EQ(format_double(24e6), "24000000.0");
  EXPECT_EQ(format_double(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

TEST(ParseKind, Names) {
  EXPECT_EQ(parse_kind("sweep"), ExperimentKind::Sweep);
  EXPECT_EQ(parse_kind("Sweep"), std::nullopt);
  for (auto k : {ExperimentKind::Schedule, ExperimentKind::Sweep,
                 ExperimentKind::Periodicity, ExperimentKind::Extract}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
  }
}

TEST(Experiments, ScheduleRunWritesFiles) {
  const auto out = out_dir("schedule");
  const auto r = run_schedule(load_scenario(scenario("exp1_schedule.yaml")), out);
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(fs::exists(out / "schedule.csv"));
  EXPECT_TRUE(fs::exists(out / "metrics_cam0.csv"));
  EXPECT_TRUE(fs::exists(out / "metrics_cam1.csv"));
  EXPECT_EQ(slurp(out / "summary.txt"), r.summary);
  const std::string sched = slurp(out / "schedule.csv");
  EXPECT_NE(sched.find("1,112000,"), std::string::npos);
}

TEST(Experiments, CapacityIsAnError) {
  EXPECT_THROW(run_schedule(load_scenario(scenario("exp1_capacity.yaml")),
                            out_dir("capacity")),
               CapacityExceeded);
}

TEST(Experiments, RunsAreByteIdentical) {
  for (const char* name : {"exp3_periodicity.yaml", "exp4_extract.yaml"}) {
    ScenarioFile f = load_scenario(scenario(name));
    f.experiment.write_depth = true;
    const auto a = out_dir(std::string("a_") + name);
    const auto b = out_dir(std::string("b_") + name);
    run_experiment(*f.experiment.kind, f, a);
    run_experiment(*f.experiment.kind, f, b);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto other = b / entry.path().filename();
      ASSERT_TRUE(fs::exists(other)) << other;
      EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
      ++files;
    }
    EXPECT_GE(files, 4u);
  }
}
