#pragma once

// Experiment configuration files.
//
// INI dialect (version 1): `key = value` lines grouped under `[section]`
// headers, full-line comments starting with `;` or `#`, no inline comments.
// Lists are comma separated. Intervals are written as `lo, hi`. Unknown
// sections or keys are rejected so that typos cannot silently fall back to
// defaults.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "v2x/population.hpp"
#include "v2x/relay_selection.hpp"
#include "v2x/sweep.hpp"

namespace v2x::harness {

inline constexpr int kConfigFormatVersion = 1;

struct SweepParams {
  SweepRange range{1, 20};
  std::size_t trials = 100;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
};

struct ChainParams {
  std::size_t populations = 1000;
  std::size_t b1_draws = 200;
  std::vector<std::size_t> counts{2, 4, 8, 12, 16};
};

struct BoundParams {
  std::size_t instances = 10000;
  std::size_t max_relays = 20;
};

struct OrchestrateParams {
  std::size_t destinations = 3;
  SweepRange range{1, 20};
};

struct ExperimentConfig {
  std::string name;
  std::string source_path;
  std::string digest;  ///< SHA-256 of the file bytes, hex

  PopulationSpec population;
  ScenarioConfig scenario;
  /// Curves are produced for every (d, source_power) combination.
  std::vector<double> d_values;
  std::vector<double> source_powers;

  SweepParams sweep;
  AllocationConfig allocation;
  ChainParams chain;
  BoundParams bound;
  OrchestrateParams orchestrate;

  /// Every effective parameter, defaults included.
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Reads, parses and validates a configuration file. Parse errors carry the
/// file name and line; invariant violations name the field.
/// Throws Error(InvalidConfig).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same, for text already in memory; `source_name` is used in diagnostics.
ExperimentConfig parse_config(std::string_view text, const std::string& source_name = "<memory>");

std::string sha256_hex(std::string_view bytes);

}  // namespace v2x::harness
