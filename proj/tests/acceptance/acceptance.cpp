// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tofmux/detector.hpp"
#include "tofmux/error.hpp"
#include "tofmux/scheduler.hpp"
#include "tofmux/signal.hpp"
#include "tofmux/simulator.hpp"

using namespace tofmux;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

Scenario two_cameras_30fps() {
  Scenario s;
  s.scene = make_bump_scene({});
  s.cameras.assign(2, CameraSetup{});
  s.duration = 1.0 / 30;
  return s;
}

Scenario mixed_rate(double duration, std::uint64_t seed) {
  Scenario s;
  s.scene = make_bump_scene({});
  s.cameras.assign(2, CameraSetup{});
  for (auto& c : s.cameras) c.config.n_quads = 6;
  s.cameras[0].trigger_offset = 300e-6;
  s.cameras[1].config.frame_rate = 28;
  s.duration = duration;
  s.seed = seed;
  return s;
}

std::size_t baseline_count(const Scenario& pair) {
  Scenario solo = pair;
  solo.cameras.resize(1);
  solo.well_capacity = resolve_well_capacity(pair);
  return StreamSimulator(solo, 0).frame(0).saturated_count;
}

Outcome capacity_bound() {
  Outcome o;
  CameraConfig c;
  c.intg_duty_cycle = 0.28;
  const QuadTiming t = derive_quad_timing(c);
  o.check(max_cameras(t) == 3, "max_cameras != 3");
  const auto report = verify_schedule(assign_shifts(c, 3), {0.0, 1.0});
  o.check(report.valid() && report.worst() == 0.0, "3-camera schedule overlaps");
  try {
    assign_shifts(c, 4);
    o.check(false, "4 cameras accepted");
  } catch (const CapacityExceeded& e) {
    o.check(e.bound() == static_cast<std::size_t>(t.t_qt / t.t_qin),
            "wrong bound reported");
  }
  return o;
}

Outcome shift_profile() {
  Outcome o;
  Scenario s = two_cameras_30fps();
  const std::size_t base = baseline_count(s);
  const auto free = predict_free_shifts(s.cameras[0].config, 2);
  const double band = 0.01 * static_cast<double>(s.scene.pixel_count());

  std::vector<double> shifts;
  std::vector<std::size_t> counts;
  for (int i = 0; i <= 32; ++i) {  // 0 to 8 ms, 0.25 ms apart
    const double shift = i * 0.25e-3;
    s.cameras[1].trigger_offset = shift;
    shifts.push_back(shift);
    counts.push_back(StreamSimulator(s, 0).frame(0).saturated_count);
  }
  const double free_start = free.at(0).start;
  const double free_end = free.at(0).end;
  o.check(counts[0] == *std::max_element(counts.begin(), counts.end()),
          "shift 0 is not the maximum");
  o.check(static_cast<double>(counts[0]) - static_cast<double>(base) >= 10.0 * band,
          "shift-0 excess below 10x band");
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (contains_shift(free, shifts[i])) {
      o.check(counts[i] == base, "free shift differs from baseline");
    } else {
      o.check(counts[i] > base, "non-free shift at baseline");
    }
    if (i > 0 && shifts[i] <= free_start) {
      o.check(counts[i] <= counts[i - 1], "not decreasing before free interval");
    }
    if (i > 0 && shifts[i - 1] >= free_end) {
      o.check(counts[i] >= counts[i - 1], "not re-growing after free interval");
    }
  }
  o.check(counts.back() > base, "no re-growth by 8 ms");
  o.detail += " baseline=" + std::to_string(base) + " shift0=" + std::to_string(counts[0]);
  return o;
}

Outcome sweep_plateaus() {
  Outcome o;
  const Scenario s = two_cameras_30fps();
  const auto r = sweep_shifts(s, SweepOptions{});
  const auto predicted = predict_free_shifts(s.cameras[0].config, 2);
  std::vector<double> expected;
  for (double shift : r.shifts) {
    if (contains_shift(predicted, shift)) expected.push_back(shift);
  }
  o.check(r.mci_free_shifts == expected, "detected set differs from prediction");
  o.detail += " free=" + std::to_string(r.mci_free_shifts.size()) + "/" +
              std::to_string(r.shifts.size());
  return o;
}

Outcome beat_and_severity() {
  Outcome o;
  const Scenario s = mixed_rate(4.0, 3);
  o.check(beat_period(s.cameras[0].config, s.cameras[1].config) == 5,
          "beat period != 5");
  const auto streams = simulate_stream(s);
  const auto& a = streams[0];
  o.check(a.size() == 120, "expected 120 frames");
  const auto labels = periodicity_analysis(a, streams[1], s.cameras[0].config,
                                           s.cameras[1].config);
  o.check(labels.period == 5, "label period != 5");
  const std::size_t base = baseline_count(s);
  for (std::size_t p = 0; p + 5 <= a.size(); p += 5) {
    std::vector<std::size_t> idx{p, p + 1, p + 2, p + 3, p + 4};
    const auto n_free = std::count_if(idx.begin(), idx.end(), [&](std::size_t k) {
      return a[k].overlap_seconds == 0.0;
    });
    o.check(n_free == 1, "not exactly one free frame in a period");
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return a[x].saturated_count < a[y].saturated_count;
    });
    const auto excess = [&](std::size_t k) {
      return static_cast<double>(a[k].saturated_count) - static_cast<double>(base);
    };
    o.check(a[idx[0]].overlap_seconds == 0.0 && excess(idx[0]) == 0.0,
            "least severe frame is not the free one");
    o.check(excess(idx[1]) > 0.0, "slight frame has no excess");
    // the slight frame is the one with the smallest nonzero overlap
    for (std::size_t j = 2; j < 5; ++j) {
      o.check(a[idx[1]].overlap_seconds < a[idx[j]].overlap_seconds,
              "slight frame does not have the least overlap");
      o.check(excess(idx[j]) >= 4.0 * excess(idx[1]),
              "severe frame under 4x slight excess");
    }
  }
  return o;
}

Outcome extraction() {
  Outcome o;
  for (std::uint64_t seed : {3, 4, 5}) {
    const Scenario s = mixed_rate(3.333, seed);
    const auto stream = simulate_stream(s)[0];
    o.check(stream.size() == 100, "expected 100 frames");
    std::vector<std::int64_t> truth;
    for (const auto& f : stream) {
      if (f.overlap_seconds == 0.0) truth.push_back(f.frame_index);
    }
    const auto r = extract_mci_free(stream, seed);
    o.check(r.inlier_frames == truth, "inliers differ from ground truth");
    const auto inliers = select_frames(stream, r.inlier_frames);
    o.check(flicker_metric(inliers, ambiguity_range(24e6)) == 0.0,
            "inlier flicker is not zero");
  }
  return o;
}

Outcome signal_oracles() {
  Outcome o;
  constexpr double kPi = std::numbers::pi;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> amp(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ModulationParams p;
    p.a_r = amp(rng);
    p.a_d = amp(rng);
    p.b_r = amp(rng);
    p.b_d = amp(rng);
    p.tau = unit(rng) * p.period();
    const double psi = 2.0 * kPi * unit(rng);
    const auto cf = correlate_closed_form(p, psi);
    const double num = correlate_numeric(p, psi / (2.0 * kPi * p.mod_freq), 4096);
    const double scale = std::fabs(cf.a_c) + std::fabs(cf.b_c);
    if (scale > 0.0) worst = std::max(worst, std::fabs(num - cf.value) / scale);
  }
  o.check(worst <= 1e-6, "numeric vs closed form above 1e-6");

  for (int i = 0; i < 360; ++i) {
    const double phi = 2.0 * kPi * i / 360.0;
    ModulationParams p;
    p.b_r = 0.5;
    p.b_d = 1.0;
    p.tau = phi / (2.0 * kPi * p.mod_freq);
    double err = std::fabs(estimate_phase(sample_buckets(p)) - phi);
    err = std::min(err, 2.0 * kPi - err);
    o.check(err <= 1e-9, "phase round trip above 1e-9");
  }

  std::uniform_int_distribution<int> v(0, 1 << 20);
  for (int i = 0; i < 1000; ++i) {
    const CorrelationSamples c{double(v(rng)), double(v(rng)), double(v(rng)),
                               double(v(rng))};
    if (c.c3 == c.c1 && c.c0 == c.c2) continue;
    const double k = v(rng);
    const CorrelationSamples d{c.c0 + k, c.c1 + k, c.c2 + k, c.c3 + k};
    o.check(estimate_phase(c) == estimate_phase(d), "DC offset changed the phase");
  }
  o.check(std::fabs(ambiguity_range(24e6) - 6.2457) <= 1e-3, "ambiguity range");
  return o;
}

Outcome overlap_oracle() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> off_us(0, 100000);
  const double grid = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const CameraConfig a = oracle::random_config(rng);
    const CameraConfig b = oracle::random_config(rng);
    const double oa = off_us(rng) * 1e-6;
    const double ob = off_us(rng) * 1e-6;
    const TimeWindow w{0.0, 0.1};
    const double exact = pairwise_overlap(a, oa, b, ob, w);
    const double approx = oracle::grid_overlap(a, oa, b, ob, w, grid);
    const double n = static_cast<double>(integration_intervals(a, oa, w).size() +
                                         integration_intervals(b, ob, w).size());
    o.check(std::fabs(exact - approx) <= grid * n,
            "pair " + std::to_string(i) + " outside grid tolerance");
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "capacity bound", 1.0, capacity_bound},
      {2, "shift profile", 30.0, shift_profile},
      {3, "sweep plateaus", 60.0, sweep_plateaus},
      {4, "beat period and severity", 30.0, beat_and_severity},
      {5, "free frame extraction", 30.0, extraction},
      {6, "signal oracles", 10.0, signal_oracles},
      {7, "overlap oracle", 60.0, overlap_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) {
      o.ok = false;
      o.detail += " over budget";
    }
    std::printf("%s criterion %d (%s) %.3fs/%.0fs%s%s\n", o.ok ? "PASS" : "FAIL",
                c.id, c.name, dt, c.budget_s, o.detail.empty() ? "" : ":",
                o.detail.c_str());
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
