#pragma once

#include <filesystem>
#include <string>

#include "scenario_file.hpp"

namespace tofmux::app {

struct RunResult {
  bool valid = false;   // the experiment's own success condition
  std::string summary;  // also written to <out>/summary.txt
};

// Each run writes its CSVs and summary.txt into `out` (created if missing).
// Domain failures propagate as tofmux::Error.
RunResult run_schedule(const ScenarioFile& file, const std::filesystem::path& out);
RunResult run_sweep(const ScenarioFile& file, const std::filesystem::path& out);
RunResult run_periodicity(const ScenarioFile& file,
                          const std::filesystem::path& out);
RunResult run_extract(const ScenarioFile& file, const std::filesystem::path& out);

RunResult run_experiment(ExperimentKind kind, const ScenarioFile& file,
                         const std::filesystem::path& out);

}  // namespace tofmux::app
