#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "experiments.hpp"
#include "tofmux/error.hpp"

namespace {

constexpr int kValid = 0;
constexpr int kInvalid = 1;
constexpr int kError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Multi-camera ToF interference scheduling and detection"};
  cli.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  using tofmux::app::ExperimentKind;
  const std::pair<const char*, ExperimentKind> verbs[] = {
      {"schedule", ExperimentKind::Schedule},
      {"sweep", ExperimentKind::Sweep},
      {"periodicity", ExperimentKind::Periodicity},
      {"extract", ExperimentKind::Extract},
  };
  const char* help[] = {
      "assign and verify interference-free trigger offsets",
      "sweep the relative trigger shift of two equal-rate cameras",
      "label MCI-free frames of two cameras at different frame rates",
      "extract MCI-free frames from saturation counts",
  };
  std::optional<ExperimentKind> chosen;
  for (int i = 0; i < 4; ++i) {
    auto* sub = cli.add_subcommand(verbs[i].first, help[i]);
    sub->add_option("--scenario", scenario_path, "scenario YAML file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->callback([&chosen, kind = verbs[i].second] { chosen = kind; });
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kValid : kError;
  }

  try {
    auto file = tofmux::app::load_scenario(scenario_path);
    if (seed) file.scenario.seed = *seed;
    if (file.experiment.kind && *file.experiment.kind != *chosen) {
      std::cerr << "error: scenario is for '"
                << tofmux::app::to_string(*file.experiment.kind)
                << "', not '" << tofmux::app::to_string(*chosen) << "'\n";
      return kError;
    }
    file.experiment.kind = *chosen;
    const auto result = tofmux::app::run_experiment(*chosen, file, out_dir);
    std::cout << result.summary;
    return result.valid ? kValid : kInvalid;
  } catch (const tofmux::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kError;
}
