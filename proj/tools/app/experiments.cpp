#include "experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tofmux/detector.hpp"
#include "tofmux/error.hpp"
#include "tofmux/scheduler.hpp"

namespace tofmux::app {

namespace fs = std::filesystem;

namespace {

long long us(Seconds s) { return std::llround(s * 1e6); }

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  return os;
}

void close_csv(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError(path.string(), "write failed");
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError(out.string(), ec.message());
}

RunResult finish(const fs::path& out, bool valid, std::string summary) {
  summary += fmt::format("result: {}\n", valid ? "valid" : "invalid");
  auto os = open_csv(out / "summary.txt");
  os << summary;
  close_csv(os, out / "summary.txt");
  return {valid, std::move(summary)};
}

std::string header(const ScenarioFile& file, ExperimentKind kind) {
  return fmt::format("# tofmux {}\n# resolved scenario\n{}\n", to_string(kind),
                     resolved_yaml(file));
}

void write_streams(const std::vector<FrameStream>& streams, const fs::path& out,
                   bool depth) {
  for (std::size_t i = 0; i < streams.size(); ++i) {
    write_metrics_csv(streams[i], out / fmt::format("metrics_cam{}.csv", i));
    if (depth) render_depth_csv(streams[i], out / fmt::format("depth_cam{}.csv", i));
  }
}

std::string timing_block(const std::vector<CameraSetup>& cams) {
  std::string s = "camera timing (cycles)\n";
  for (std::size_t i = 0; i < cams.size(); ++i) {
    const auto& c = cams[i].config;
    const QuadTiming t = derive_quad_timing(c);
    s += fmt::format(
        "  cam{}: t_rd={} t_qt={} t_rs={} t_qin={} t_qd={} max_cameras={}\n", i,
        t.t_rd, t.t_qt, t.t_rs, t.t_qin, t.t_qd,
        t.t_qin > 0 ? std::to_string(max_cameras(t)) : std::string("unbounded"));
  }
  return s;
}

// Contiguous runs of flagged grid shifts, as "[a, b]" in microseconds.
std::string runs(const std::vector<Seconds>& shifts, const std::vector<bool>& flag) {
  std::string s;
  for (std::size_t i = 0; i < shifts.size();) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < shifts.size() && flag[j + 1]) ++j;
    s += fmt::format(" [{}, {}]", us(shifts[i]), us(shifts[j]));
    i = j + 1;
  }
  return s.empty() ? " none" : s;
}

}  // namespace

RunResult run_schedule(const ScenarioFile& file, const fs::path& out) {
  prepare(out);
  const auto& cams = file.scenario.cameras;
  for (const auto& c : cams) {
    if (!(c.config == cams.front().config)) {
      throw ScenarioInvalid("schedule needs every camera to share one config");
    }
  }
  std::string s = header(file, ExperimentKind::Schedule);
  s += timing_block(cams);

  const CameraConfig& config = cams.front().config;
  const QuadTiming t = derive_quad_timing(config);
  const Schedule schedule = assign_shifts(config, cams.size());
  const ScheduleReport report =
      verify_schedule(schedule, {0.0, file.scenario.duration});

  auto csv = open_csv(out / "schedule.csv");
  csv << "camera,offset_cycles,offset_us\n";
  s += "assigned offsets\n";
  for (std::size_t k = 0; k < schedule.offsets.size(); ++k) {
    const long long cycles = static_cast<long long>(k) * t.t_qin;
    csv << k << ',' << cycles << ',' << us(schedule.offsets[k]) << '\n';
    s += fmt::format("  cam{}: {} cycles ({} us)\n", k, cycles,
                     us(schedule.offsets[k]));
  }
  close_csv(csv, out / "schedule.csv");

  s += fmt::format("pairwise integration overlap over [0, {} s)\n",
                   format_double(file.scenario.duration));
  for (const auto& p : report.pairs) {
    s += fmt::format("  cam{}-cam{}: {:.3f} us\n", p.a, p.b, p.overlap * 1e6);
  }

  Scenario verify = file.scenario;
  for (std::size_t k = 0; k < verify.cameras.size(); ++k) {
    verify.cameras[k].trigger_offset = schedule.offsets[k];
  }
  const auto streams = simulate_stream(verify);
  write_streams(streams, out, file.experiment.write_depth);
  for (std::size_t k = 0; k < streams.size(); ++k) {
    Seconds worst = 0.0;
    for (const auto& f : streams[k]) worst = std::max(worst, f.overlap_seconds);
    s += fmt::format("  cam{} simulated frames: {}, worst frame overlap {:.3f} us\n",
                     k, streams[k].size(), worst * 1e6);
  }
  return finish(out, report.valid(), std::move(s));
}

RunResult run_sweep(const ScenarioFile& file, const fs::path& out) {
  prepare(out);
  std::string s = header(file, ExperimentKind::Sweep);
  s += timing_block(file.scenario.cameras);

  SweepOptions opt;
  opt.step = file.experiment.step_us / 1e6;
  opt.burst_frames = file.experiment.burst_frames;
  opt.tie_band = file.experiment.tie_band_px;
  const ShiftSweepResult r = sweep_shifts(file.scenario, opt);
  const auto predicted =
      predict_free_shifts(file.scenario.cameras.front().config, 2);

  std::vector<bool> found(r.shifts.size());
  std::vector<bool> expect(r.shifts.size());
  for (std::size_t i = 0; i < r.shifts.size(); ++i) {
    found[i] = std::find(r.mci_free_shifts.begin(), r.mci_free_shifts.end(),
                         r.shifts[i]) != r.mci_free_shifts.end();
    expect[i] = contains_shift(predicted, r.shifts[i]);
  }

  auto csv = open_csv(out / "sweep.csv");
  csv << "shift_us,saturated_count,normalized_count,is_free\n";
  for (std::size_t i = 0; i < r.shifts.size(); ++i) {
    csv << us(r.shifts[i]) << ',' << format_double(r.saturated_counts[i]) << ','
        << format_double(r.normalized_counts[i]) << ',' << (found[i] ? 1 : 0)
        << '\n';
  }
  close_csv(csv, out / "sweep.csv");

  const auto [lo, hi] =
      std::minmax_element(r.saturated_counts.begin(), r.saturated_counts.end());
  std::size_t mismatched = 0;
  std::size_t off_edge = 0;
  for (std::size_t i = 0; i < r.shifts.size(); ++i) {
    if (found[i] == expect[i]) continue;
    ++mismatched;
    const bool next_to_edge =
        (i > 0 && expect[i - 1] != expect[i]) ||
        (i + 1 < r.shifts.size() && expect[i + 1] != expect[i]);
    if (!next_to_edge) ++off_edge;
  }

  s += fmt::format("sweep: {} shifts at {} us, burst {} frames, tie band {} px\n",
                   r.shifts.size(), std::llround(file.experiment.step_us),
                   opt.burst_frames, format_double(r.tie_band));
  s += fmt::format("saturated count: min {} max {}{}\n", format_double(*lo),
                   format_double(*hi),
                   *hi - *lo <= r.tie_band ? " (flat sweep)" : "");
  s += "detected free plateaus (us):" + runs(r.shifts, found) + "\n";
  s += "predicted free shifts on grid (us):" + runs(r.shifts, expect) + "\n";
  s += "predicted free intervals (us):";
  for (const auto& iv : predicted) {
    s += fmt::format(" [{:.3f}, {:.3f}]", iv.start * 1e6, iv.end * 1e6);
  }
  s += fmt::format("\nmismatched grid shifts: {} ({} away from a plateau edge)\n",
                   mismatched, off_edge);
  return finish(out, !r.mci_free_shifts.empty(), std::move(s));
}

RunResult run_periodicity(const ScenarioFile& file, const fs::path& out) {
  prepare(out);
  const auto& cams = file.scenario.cameras;
  if (cams.size() != 2) {
    throw ScenarioInvalid("periodicity needs exactly two cameras");
  }
  std::string s = header(file, ExperimentKind::Periodicity);
  s += timing_block(cams);

  const auto streams = simulate_stream(file.scenario);
  write_streams(streams, out, file.experiment.write_depth);
  const PeriodicityResult pa = periodicity_analysis(
      streams[0], streams[1], cams[0].config, cams[1].config);
  const auto beat = beat_period(cams[0].config, cams[1].config);

  auto csv = open_csv(out / "periodicity.csv");
  csv << "frame_index,timestamp_us,overlap_us,saturated_count,is_free\n";
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < pa.labels.size(); ++i) {
    const auto& l = pa.labels[i];
    n_free += l.mci_free ? 1 : 0;
    csv << l.frame_index << ',' << us(l.timestamp) << ',' << us(l.overlap) << ','
        << streams[0][i].saturated_count << ',' << (l.mci_free ? 1 : 0) << '\n';
  }
  close_csv(csv, out / "periodicity.csv");

  s += fmt::format("frames: {} (cam0), {} (cam1)\n", streams[0].size(),
                   streams[1].size());
  s += fmt::format("beat period (rates and quads): {}\n",
                   beat ? std::to_string(*beat) : std::string("aperiodic"));
  s += fmt::format("detected label period: {}\n",
                   pa.period ? std::to_string(*pa.period) : std::string("none"));
  s += fmt::format("frames labeled MCI-free: {}\n", n_free);
  if (pa.period) {
    const auto p = static_cast<std::size_t>(*pa.period);
    s += "first period (frame: saturated, overlap us, label):\n";
    for (std::size_t i = 0; i < std::min(p, pa.labels.size()); ++i) {
      s += fmt::format("  {}: {} {:.3f} {}\n", pa.labels[i].frame_index,
                       streams[0][i].saturated_count, pa.labels[i].overlap * 1e6,
                       pa.labels[i].mci_free ? "free" : "mci");
    }
  }
  return finish(out, pa.period.has_value(), std::move(s));
}

RunResult run_extract(const ScenarioFile& file, const fs::path& out) {
  prepare(out);
  std::string s = header(file, ExperimentKind::Extract);
  s += timing_block(file.scenario.cameras);

  const auto streams = simulate_stream(file.scenario);
  write_streams(streams, out, file.experiment.write_depth);
  const auto& stream = streams.front();
  const ExtractionResult ex = extract_mci_free(
      stream, file.experiment.seed_count, file.experiment.tolerance_px);

  std::vector<std::int64_t> truth;
  for (const auto& f : stream) {
    if (f.overlap_seconds == 0.0) truth.push_back(f.frame_index);
  }

  auto csv = open_csv(out / "extract.csv");
  csv << "frame_index,saturated_count,is_inlier\n";
  for (const auto& f : stream) {
    const bool in = std::binary_search(ex.inlier_frames.begin(),
                                       ex.inlier_frames.end(), f.frame_index);
    csv << f.frame_index << ',' << f.saturated_count << ',' << (in ? 1 : 0) << '\n';
  }
  close_csv(csv, out / "extract.csv");

  const double range = ambiguity_range(file.scenario.cameras.front().config.mod_freq);
  const auto flicker_of = [&](std::span<const SimFrame> frames) -> std::string {
    if (frames.size() < 2) return "n/a (fewer than 2 frames)";
    try {
      return fmt::format("{:.6g}", flicker_metric(frames, range));
    } catch (const NoCommonValidPixels&) {
      return "n/a (no pixel valid in every frame)";
    }
  };
  const auto inliers = select_frames(stream, ex.inlier_frames);

  s += fmt::format("frames: {}, seed_count {}, tolerance {} px\n", stream.size(),
                   file.experiment.seed_count,
                   format_double(file.experiment.tolerance_px.value_or(
                       0.02 * static_cast<double>(file.scenario.scene.pixel_count()))));
  s += fmt::format("inliers: {} at level {} after {} iterations\n",
                   ex.inlier_frames.size(), format_double(ex.fitted_level),
                   ex.iterations);
  s += fmt::format("zero-overlap frames (ground truth): {}; inliers {} them\n",
                   truth.size(), truth == ex.inlier_frames ? "match" : "differ from");
  s += "flicker inliers: " + flicker_of(inliers) + "\n";
  s += "flicker full stream: " + flicker_of(stream) + "\n";
  return finish(out, !ex.inlier_frames.empty(), std::move(s));
}

RunResult run_experiment(ExperimentKind kind, const ScenarioFile& file,
                         const fs::path& out) {
  switch (kind) {
    case ExperimentKind::Schedule: return run_schedule(file, out);
    case ExperimentKind::Sweep: return run_sweep(file, out);
    case ExperimentKind::Periodicity: return run_periodicity(file, out);
    case ExperimentKind::Extract: return run_extract(file, out);
  }
  throw std::logic_error("unknown experiment kind");
}

}  // namespace tofmux::app
