#pragma once

#include <span>
#include <vector>

#include "v2x/types.hpp"

namespace v2x {

inline constexpr double kDefaultBandwidthKbps = 1.0;

/// Shannon capacity of a real AWGN channel, 0.5 * log2(1 + SNR) bits per use,
/// also expressed in kbps for a given bandwidth. Relays with unbounded SNR are
/// represented by +inf in both fields (ranking only).
struct CapacityValue {
  double bits_per_use = 0.0;
  double kbps = 0.0;
};

struct RankedRelays {
  std::vector<RelayId> order;
  std::vector<CapacityValue> capacities;  ///< parallel to order, non-increasing
};

/// Throws InvalidSnr for a negative SNR and PreconditionViolated for a
/// non-positive bandwidth.
CapacityValue capacity_from_snr(double snr, double bandwidth_kbps = kDefaultBandwidthKbps);
CapacityValue capacity_from_snr(PathSnr snr, double bandwidth_kbps = kDefaultBandwidthKbps);

/// Capacity of the combined path through `relays`, each at its own power.
CapacityValue path_capacity(const SourceSignal& source, std::span<const RelayNode> relays,
                            const DestinationNode& dest,
                            double bandwidth_kbps = kDefaultBandwidthKbps);

/// Same, with per-relay transmit powers overriding RelayNode::power.
CapacityValue path_capacity(const SourceSignal& source, std::span<const RelayNode> relays,
                            std::span<const double> powers, const DestinationNode& dest,
                            double bandwidth_kbps = kDefaultBandwidthKbps);

/// End-to-end capacity of a single relay: the one-relay combined path, so
/// destination noise is included. +inf when no noise term is present.
CapacityValue individual_capacity(const SourceSignal& source, const RelayNode& relay,
                                  const DestinationNode& dest,
                                  double bandwidth_kbps = kDefaultBandwidthKbps);

/// Stable descending sort by individual capacity, ties by ascending id.
/// Throws EmptyPool when `pool` is empty.
RankedRelays rank_relays(const SourceSignal& source, std::span<const RelayNode> pool,
                         const DestinationNode& dest,
                         double bandwidth_kbps = kDefaultBandwidthKbps);

}  // namespace v2x
