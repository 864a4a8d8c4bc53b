#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "v2x/capacity.hpp"
#include "v2x/types.hpp"

namespace v2x {

enum class SelectionScheme {
  uniform_arbitrary,  // B-1: random subset, equal power
  uniform_ranked,     // B-2: top-L by individual capacity, equal power
  optimized,          // B-3: top-L with allocated power
  max_fading,         // baseline: top-L by h_src * h_dst, equal power
  max_power,          // baseline: top-L by relay power, equal power
};

std::string_view to_string(SelectionScheme scheme) noexcept;

/// An ordered relay subset with the transmit power assigned to each member.
struct RelaySelection {
  std::vector<RelayNode> relays;
  std::vector<double> powers;  ///< parallel to relays; sums to total_power
  double total_power = 0.0;
  SelectionScheme scheme = SelectionScheme::uniform_ranked;
  /// Whether individual capacities under `powers` are non-increasing along
  /// the selection order. Reported, never enforced.
  bool ordering_holds = true;

  [[nodiscard]] std::vector<RelayId> relay_ids() const;
  [[nodiscard]] std::size_t size() const noexcept { return relays.size(); }
};

/// Budget conservation (1e-9 relative), per-relay minimums and distinct ids.
/// On failure returns false and, if `why` is given, describes the violation.
bool satisfies_invariants(const RelaySelection& selection, std::string* why = nullptr);

/// Capacity of the combined path using the selection's own powers.
CapacityValue selection_capacity(const SourceSignal& source, const RelaySelection& selection,
                                 const DestinationNode& dest,
                                 double bandwidth_kbps = kDefaultBandwidthKbps);

struct AllocationConfig {
  std::optional<double> quantum;  ///< watts; total_power / 1000 when unset
  std::uint64_t max_iters = 1'000'000;

  [[nodiscard]] double quantum_for(double total_power) const;
};

inline constexpr int kUniformRetryLimit = 100;

/// B-1. Seeded uniformly random L-subset with Q_tot / L each. Subsets whose
/// members need more than Q_tot / L are redrawn up to kUniformRetryLimit times.
RelaySelection select_uniform(std::span<const RelayNode> pool, std::size_t count,
                              double total_power, std::uint64_t seed);

/// B-2. The `count` best relays by individual capacity with Q_tot / L each.
RelaySelection select_topk(const SourceSignal& source, std::span<const RelayNode> pool,
                           const DestinationNode& dest, std::size_t count, double total_power,
                           double bandwidth_kbps = kDefaultBandwidthKbps);

/// Redistributes the selection's total power to maximise combined capacity
/// subject to per-relay minimums and the total budget.
///
/// Starts from equal shares raised to each relay's minimum (the equal split
/// itself whenever it is feasible) and moves one quantum at a time from the
/// relay whose removal costs least to the relay whose addition gains most.
/// When that pair does not improve, every other pair is tried before stopping.
/// The result is therefore never worse than the starting point.
///
/// Throws InfeasibleBudget when the minimums exceed the total budget.
RelaySelection allocate_power(const SourceSignal& source, const RelaySelection& selection,
                              const DestinationNode& dest, const AllocationConfig& config = {},
                              double bandwidth_kbps = kDefaultBandwidthKbps);

/// B-3. Top-L ranking followed by allocate_power.
RelaySelection select_optimized(const SourceSignal& source, std::span<const RelayNode> pool,
                                const DestinationNode& dest, std::size_t count,
                                double total_power, const AllocationConfig& config = {},
                                double bandwidth_kbps = kDefaultBandwidthKbps);

struct ChainReport {
  double c_b3 = 0.0;
  double c_b2 = 0.0;
  double c_b1_mean = 0.0;
  bool b3_dominates_b2 = false;
  bool b2_dominates_b1_mean = false;
  bool chain_holds = false;
  /// Indices of B-1 draws whose capacity exceeded c_b2.
  std::vector<std::size_t> b1_draws_above_b2;
};

inline constexpr double kChainEpsilonKbps = 1e-9;

/// Runs B-3, B-2 and `trials` seeded B-1 draws on one instance and checks
/// c_b3 >= c_b2 - eps and c_b2 >= mean(c_b1) - eps.
ChainReport verify_capacity_chain(const SourceSignal& source, std::span<const RelayNode> pool,
                                  const DestinationNode& dest, std::size_t count,
                                  double total_power, const AllocationConfig& config,
                                  double bandwidth_kbps, std::size_t trials, std::uint64_t seed);

namespace detail {

/// Equal shares raised to the minimums: p_g = max(min_g, t) with sum p = total.
std::vector<double> clipped_uniform(std::span<const RelayNode> relays, double total_power);

/// Equal-power selection; throws InfeasibleBudget if a member's minimum exceeds Q_tot / L.
RelaySelection equal_power(std::vector<RelayNode> relays, double total_power,
                           SelectionScheme scheme);

/// Stable descending sort of `pool` by `key`, ties by ascending id; returns the first `count`.
template <class Key>
std::vector<RelayNode> top_by(std::span<const RelayNode> pool, std::size_t count, Key key);

void require_count(std::span<const RelayNode> pool, std::size_t count);

}  // namespace detail
}  // namespace v2x

#include "v2x/detail/top_by.hpp"
