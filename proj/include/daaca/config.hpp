#pragma once

// Experiment configuration: a small TOML-style format (sections, key = value,
// numbers, booleans, strings, arrays) plus the shipped presets.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daaca/simulator.hpp"

namespace daaca {

struct FieldSize {
  double width = 40.0;
  double length = 50.0;
  std::size_t n = 200;

  bool operator==(const FieldSize&) const = default;
};

// The ten standard network sizes, smallest first.
const std::vector<FieldSize>& standard_sizes();
// Standard packet budgets.
const std::vector<std::uint64_t>& standard_packet_budgets();
// Seeds 1..count.
std::vector<std::uint64_t> default_seeds(std::size_t count);

struct LifetimeSweep {
  bool enabled = false;
  double e_init = 0.05;
  std::uint64_t packets = 1000000;  // cap; the run stops at the first death
};

struct ExperimentConfig {
  std::vector<Algorithm> algorithms = all_algorithms();
  std::vector<FieldSize> sizes = {FieldSize{}};
  std::vector<std::uint64_t> packets = {1000};
  std::vector<std::uint64_t> seeds = default_seeds(5);
  // Template for every run; algorithm, size and budget are overwritten per cell.
  SimulationConfig base;
  LifetimeSweep lifetime;
  std::filesystem::path out = "results";
  unsigned jobs = 1;
  // Time series are written every `series_stride` rounds and at the last round.
  std::uint64_t series_stride = 10;

  void validate() const;
  // Run config for one cell.
  SimulationConfig cell(Algorithm a, const FieldSize& size, std::uint64_t packets) const;
  SimulationConfig lifetime_cell(Algorithm a, const FieldSize& size) const;
};

// Parses configuration text. Every key is optional and defaults to the
// standard experimental parameters. Throws ConfigError with line and field details.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// "smoke", "table3-small", "paper-small" or "paper-full".
std::optional<ExperimentConfig> preset(std::string_view name);
const std::vector<std::string>& preset_names();

// Comma-separated seeds, with a-b ranges ("1,2,5-9").
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
// Comma-separated algorithm names.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace daaca
