#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "v2x/population.hpp"
#include "v2x/relay_selection.hpp"

namespace v2x {

enum class Algorithm { proposed_b3, topk_b2, uniform_b1, max_fading, max_power };

inline constexpr std::array kAllAlgorithms = {Algorithm::proposed_b3, Algorithm::topk_b2,
                                              Algorithm::uniform_b1, Algorithm::max_fading,
                                              Algorithm::max_power};

std::string_view label(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view label) noexcept;

/// Link-level parameters shared by every relay subset of a scenario.
struct ScenarioConfig {
  double source_power = 15.0;
  double y_sq = 2.0;
  double dest_noise_var = 1.0;
  double bandwidth_kbps = 1.0;
  /// Q_tot(L) = L * per_relay_power. Unset means the population's mean relay power.
  std::optional<double> per_relay_power;

  void validate() const;
  [[nodiscard]] SourceSignal source() const;
  [[nodiscard]] DestinationNode destination() const { return {dest_noise_var}; }
  [[nodiscard]] double total_power(std::size_t count, const PopulationSpec& spec) const;
};

struct SweepRange {
  std::size_t l_min = 1;
  std::size_t l_max = 20;
};

struct SweepCell {
  std::size_t count = 0;  ///< L
  Algorithm algorithm = Algorithm::proposed_b3;
  double mean_capacity_kbps = 0.0;
  std::size_t trials = 0;
  bool valid = true;
  std::string error;  ///< first failure seen in this cell
};

struct SweepResult {
  std::vector<Algorithm> algorithms;
  std::vector<SweepCell> cells;  ///< ordered by L, then by `algorithms`
  std::size_t trials = 0;
  PopulationSpec spec;
  ScenarioConfig config;
  SweepRange range;

  [[nodiscard]] const SweepCell* find(std::size_t count, Algorithm algorithm) const;
  /// Cells where proposed_b3 falls below topk_b2 by more than kChainEpsilonKbps.
  [[nodiscard]] std::vector<std::size_t> dominance_violations() const;
};

/// Mean capacity per (L, algorithm) over `trials` populations. Trial t uses
/// generate_population(spec, t); random B-1 subsets use mix_seed({spec.seed, t, L}).
/// A failing cell is marked invalid instead of aborting the sweep.
SweepResult sweep_capacity(const PopulationSpec& spec, const ScenarioConfig& config,
                           SweepRange range, std::span<const Algorithm> algorithms,
                           std::size_t trials, const AllocationConfig& allocation = {});

struct MarginRow {
  std::size_t count = 0;
  Algorithm baseline = Algorithm::topk_b2;
  double margin_kbps = 0.0;  ///< proposed_b3 minus baseline
  bool valid = true;
};

struct Comparison {
  SweepResult sweep;
  std::vector<MarginRow> margins;
};

/// Sweep over all algorithms plus the per-L margin of proposed_b3 over each of the others.
Comparison compare_algorithms(const PopulationSpec& spec, const ScenarioConfig& config,
                              SweepRange range, std::size_t trials,
                              const AllocationConfig& allocation = {});

/// Capacity of one algorithm on one pool; the building block of a sweep cell.
double algorithm_capacity(Algorithm algorithm, const SourceSignal& source,
                          std::span<const RelayNode> pool, const DestinationNode& dest,
                          std::size_t count, double total_power, double bandwidth_kbps,
                          const AllocationConfig& allocation, std::uint64_t uniform_seed);

}  // namespace v2x
