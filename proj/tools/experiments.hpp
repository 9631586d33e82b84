#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qlg/report.hpp"

namespace qlg::cli {

inline const std::vector<std::string> kCommands = {
    "simulate",        "validate-bounds", "divisors",   "smoothing",  "remainder",
    "boltzmann-compare", "resonance-map", "observable", "single-mode"};

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> eps;  // comma separated list
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> n_radius;
  std::optional<double> box;
  std::optional<std::string> lemma;
  std::optional<int> samples;
};

// Built-in defaults for every section.
Json default_config();

// defaults <- file <- overrides, then validated. Unknown keys and bad values
// raise ConfigError.
Json effective_config(const Json& file_config, const Overrides& ov);

struct RunResult {
  std::string anchor;
  std::vector<std::string> artifacts;  // file names relative to the output directory
};

// Runs one experiment and writes its artifacts plus manifest.json into cfg["out"].
RunResult run_experiment(const std::string& command, const Json& cfg);

}  // namespace qlg::cli
