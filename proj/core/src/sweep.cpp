#include "v2x/sweep.hpp"

#include <cmath>
#include <string>

#include "v2x/baselines.hpp"
#include "v2x/error.hpp"
#include "v2x/random.hpp"

namespace v2x {

std::string_view label(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::proposed_b3: return "proposed_b3";
    case Algorithm::topk_b2: return "topk_b2";
    case Algorithm::uniform_b1: return "uniform_b1";
    case Algorithm::max_fading: return "max_fading";
    case Algorithm::max_power: return "max_power";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) noexcept {
  for (Algorithm a : kAllAlgorithms) {
    if (label(a) == text) return a;
  }
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
  };
  require(std::isfinite(source_power) && source_power >= 0.0, "source_power must be >= 0");
  require(std::isfinite(y_sq) && y_sq >= 0.0, "y_sq must be >= 0");
  require(std::isfinite(dest_noise_var) && dest_noise_var >= 0.0, "dest_noise_var must be >= 0");
  require(std::isfinite(bandwidth_kbps) && bandwidth_kbps > 0.0, "bandwidth_kbps must be > 0");
  require(!per_relay_power || (std::isfinite(*per_relay_power) && *per_relay_power > 0.0),
          "per_relay_power must be > 0");
}

SourceSignal ScenarioConfig::source() const { return SourceSignal::scalar(y_sq, source_power); }

double ScenarioConfig::total_power(std::size_t count, const PopulationSpec& spec) const {
  return static_cast<double>(count) * per_relay_power.value_or(spec.mean_relay_power());
}

const SweepCell* SweepResult::find(std::size_t count, Algorithm algorithm) const {
  for (const auto& c : cells) {
    if (c.count == count && c.algorithm == algorithm) return &c;
  }
  return nullptr;
}

std::vector<std::size_t> SweepResult::dominance_violations() const {
  std::vector<std::size_t> out;
  for (std::size_t L = range.l_min; L <= range.l_max; ++L) {
    const auto* b3 = find(L, Algorithm::proposed_b3);
    const auto* b2 = find(L, Algorithm::topk_b2);
    if (b3 && b2 && b3->valid && b2->valid &&
        b3->mean_capacity_kbps < b2->mean_capacity_kbps - kChainEpsilonKbps) {
      out.push_back(L);
    }
  }
  return out;
}

double algorithm_capacity(Algorithm algorithm, const SourceSignal& source,
                          std::span<const RelayNode> pool, const DestinationNode& dest,
                          std::size_t count, double total_power, double bandwidth_kbps,
                          const AllocationConfig& allocation, std::uint64_t uniform_seed) {
  RelaySelection s;
  switch (algorithm) {
    case Algorithm::proposed_b3:
      s = select_optimized(source, pool, dest, count, total_power, allocation, bandwidth_kbps);
      break;
    case Algorithm::topk_b2:
      s = select_topk(source, pool, dest, count, total_power, bandwidth_kbps);
      break;
    case Algorithm::uniform_b1:
      s = select_uniform(pool, count, total_power, uniform_seed);
      break;
    case Algorithm::max_fading:
      s = baseline_max_fading(source, pool, dest, count, total_power);
      break;
    case Algorithm::max_power:
      s = baseline_max_power(source, pool, dest, count, total_power);
      break;
  }
  return selection_capacity(source, s, dest, bandwidth_kbps).kbps;
}

SweepResult sweep_capacity(const PopulationSpec& spec, const ScenarioConfig& config,
                           SweepRange range, std::span<const Algorithm> algorithms,
                           std::size_t trials, const AllocationConfig& allocation) {
  spec.validate();
  config.validate();
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (range.l_min < 1 || range.l_min > range.l_max || range.l_max > spec.n_total) {
    throw Error(ErrorCode::InvalidConfig, "L range [" + std::to_string(range.l_min) + ", " +
                                              std::to_string(range.l_max) +
                                              "] must lie within [1, n_total]");
  }
  if (algorithms.empty()) throw Error(ErrorCode::InvalidConfig, "no algorithms requested");

  SweepResult result;
  result.algorithms.assign(algorithms.begin(), algorithms.end());
  result.trials = trials;
  result.spec = spec;
  result.config = config;
  result.range = range;
  for (std::size_t L = range.l_min; L <= range.l_max; ++L) {
    for (Algorithm a : algorithms) {
      result.cells.push_back(SweepCell{L, a, 0.0, trials, true, {}});
    }
  }

  const SourceSignal source = config.source();
  const DestinationNode dest = config.destination();
  // Sums are accumulated in trial order, so the output does not depend on
  // how cells would be scheduled.
  for (std::size_t t = 0; t < trials; ++t) {
    const Population pop = generate_population(spec, t);
    std::size_t cell = 0;
    for (std::size_t L = range.l_min; L <= range.l_max; ++L) {
      const double budget = config.total_power(L, spec);
      for (Algorithm a : algorithms) {
        SweepCell& c = result.cells[cell++];
        if (!c.valid) continue;
        try {
          c.mean_capacity_kbps +=
              algorithm_capacity(a, source, pop.relays, dest, L, budget, config.bandwidth_kbps,
                                 allocation, mix_seed({spec.seed, t, L}));
        } catch (const Error& e) {
          c.valid = false;
          c.error = e.what();
        }
      }
    }
  }
  for (auto& c : result.cells) {
    c.mean_capacity_kbps = c.valid ? c.mean_capacity_kbps / static_cast<double>(trials) : 0.0;
  }
  return result;
}

Comparison compare_algorithms(const PopulationSpec& spec, const ScenarioConfig& config,
                              SweepRange range, std::size_t trials,
                              const AllocationConfig& allocation) {
  Comparison out;
  out.sweep = sweep_capacity(spec, config, range, kAllAlgorithms, trials, allocation);
  for (std::size_t L = range.l_min; L <= range.l_max; ++L) {
    const SweepCell* proposed = out.sweep.find(L, Algorithm::proposed_b3);
    for (Algorithm a : kAllAlgorithms) {
      if (a == Algorithm::proposed_b3) continue;
      const SweepCell* other = out.sweep.find(L, a);
      const bool valid = proposed->valid && other->valid;
      out.margins.push_back(MarginRow{
          L, a, valid ? proposed->mean_capacity_kbps - other->mean_capacity_kbps : 0.0, valid});
    }
  }
  return out;
}

}  // namespace v2x
