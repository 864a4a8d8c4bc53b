#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "v2x/types.hpp"

namespace v2x {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Coefficient ranges for relays travelling in one direction.
struct CoefficientRanges {
  Interval h_src;
  Interval h_dst;
};

enum class NoisePatternKind { constant, mod3 };

/// Relay noise variance as a function of the 1-based relay index g.
/// constant: `base` everywhere. mod3: `base` for g = 1, 2 (mod 3) and
/// `every_third` for g = 0 (mod 3).
struct NoisePattern {
  NoisePatternKind kind = NoisePatternKind::constant;
  double base = 1.0;
  double every_third = 0.0;

  [[nodiscard]] double for_index(std::size_t g) const noexcept;
};

/// Seeded generative description of a relay population.
struct PopulationSpec {
  std::size_t n_total = 100;
  std::uint64_t seed = 0;
  CoefficientRanges toward_source{{0.8, 0.95}, {0.0, 0.65}};
  CoefficientRanges toward_destination{{0.75, 0.9}, {0.0, 0.7}};
  double d = 0.001;            ///< grid step of the coefficient intervals
  Interval relay_power{20.0, 20.0};  ///< constant when lo == hi
  NoisePattern noise;
  double motion_split = 0.5;   ///< probability that a relay moves toward the source
  double min_power = 0.0;
  RelayKind kind = RelayKind::vehicle;

  /// Throws Error(InvalidConfig) naming the offending field.
  void validate() const;

  [[nodiscard]] double mean_relay_power() const noexcept { return relay_power.midpoint(); }
};

struct Population {
  std::vector<RelayNode> relays;
  /// Names of intervals whose d-grid collapsed to the single point {lo}.
  std::vector<std::string> degenerate_grids;
};

/// Number of grid points lo, lo + d, ... that do not exceed hi (at least 1).
std::size_t grid_size(const Interval& interval, double d) noexcept;

/// Grid point k of the interval.
double grid_point(const Interval& interval, double d, std::size_t k) noexcept;

/// True when `value` equals lo + k d for some admissible k (within 1e-9 d).
bool on_grid(const Interval& interval, double d, double value) noexcept;

/// Draws the population for substream `stream` (the trial index in sweeps).
/// Relay g uses the generator seeded by mix_seed({spec.seed, stream, g}), so
/// the result depends only on (spec, stream).
Population generate_population(const PopulationSpec& spec, std::uint64_t stream = 0);

/// Copy of `pool` with relay->destination coefficients redrawn for another
/// destination vehicle. Ids, powers, noise and h_src are kept.
std::vector<RelayNode> redraw_destination_links(const PopulationSpec& spec,
                                                std::span<const RelayNode> pool,
                                                std::uint64_t destination_stream);

}  // namespace v2x
