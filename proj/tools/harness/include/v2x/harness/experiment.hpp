#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "v2x/harness/config.hpp"

namespace v2x::harness {

inline constexpr std::string_view kOutDirEnv = "V2XRELAY_OUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitInfeasible = 3,
  kExitInvariantViolation = 4,
};

/// Experiments understood by run_experiment.
inline constexpr std::string_view kExperiments[] = {"fig3",        "fig4",        "fig5",
                                                   "chain-check", "bound-check", "orchestrate"};

bool is_known_experiment(std::string_view name) noexcept;

struct RunOptions {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  std::optional<std::size_t> trials;  ///< sweep trials, chain populations or bound instances
  std::optional<std::size_t> l_min;
  std::optional<std::size_t> l_max;
  /// Value of V2XRELAY_OUT_DIR when it replaced out_dir.
  std::optional<std::string> out_dir_override;
};

struct RunManifest {
  std::string experiment;
  std::string scenario;
  std::string config_path;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> outputs;
  std::optional<std::string> out_dir_override;
  nlohmann::json effective_config;
  nlohmann::json summary;
  int exit_code = kExitOk;
  /// Set when exit_code != 0; also written to failure.json.
  nlohmann::json failure;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs the named experiment and writes its CSV files plus manifest.json into
/// options.out_dir. Experiment-level failures (infeasible cells, violated
/// invariants) are reported through exit_code and failure.json. Configuration
/// problems throw Error(InvalidConfig) before anything is written.
RunManifest run_experiment(std::string_view name, const ExperimentConfig& config,
                           const RunOptions& options);

/// Shortest round-trip decimal form; the CSV number format.
std::string format_number(double value);

std::string_view tool_version() noexcept;

}  // namespace v2x::harness
