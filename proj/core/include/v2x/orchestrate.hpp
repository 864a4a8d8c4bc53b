#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v2x/relay_selection.hpp"
#include "v2x/sweep.hpp"

namespace v2x {

/// One transmitter/receiver pair of a time slot together with its view of
/// the shared relay pool (same relays, link-specific coefficients).
struct DestinationLink {
  std::uint32_t destination_id = 0;
  SourceSignal source;
  DestinationNode dest;
  std::vector<RelayNode> pool;
};

/// Per-destination relay count rule: the L in [l_min, l_max] with the largest
/// B-3 capacity, ties to the smaller L.
struct OrchestrationConfig {
  std::size_t l_min = 1;
  std::size_t l_max = 20;
  double per_relay_power = 17.5;  ///< Q_tot(L) = L * per_relay_power
  double bandwidth_kbps = kDefaultBandwidthKbps;
  AllocationConfig allocation;
};

struct OrchestrationEntry {
  std::uint32_t destination_id = 0;
  std::optional<RelaySelection> selection;  ///< empty when infeasible
  CapacityValue capacity;
  std::string error;

  [[nodiscard]] bool ok() const noexcept { return selection.has_value(); }
};

/// B-3 with the relay count chosen by the rule above, for one destination.
/// Throws if no L in range is feasible.
std::pair<RelaySelection, CapacityValue> select_best_count(const SourceSignal& source,
                                                           std::span<const RelayNode> pool,
                                                           const DestinationNode& dest,
                                                           const OrchestrationConfig& config);

/// Runs select_best_count for every destination of the slot. Relays may serve
/// several destinations at once, so entries are independent of each other and
/// of the order of `links`. Failures are reported per entry.
std::vector<OrchestrationEntry> orchestrate_multi_destination(
    std::span<const DestinationLink> links, const OrchestrationConfig& config);

/// Builds `destinations` links that share the population of stream 0, each
/// with its own relay->destination coefficients.
std::vector<DestinationLink> make_destination_links(const PopulationSpec& spec,
                                                    const ScenarioConfig& scenario,
                                                    std::size_t destinations);

}  // namespace v2x
