#pragma once

#include <span>

#include "v2x/relay_selection.hpp"

namespace v2x {

// Reference selectors from prior cooperative-relaying work. Both hand the
// chosen relays equal shares of the same budget as B-1/B-2, so comparisons
// isolate the selection policy.

/// Top-L by the two-hop gain h_src * h_dst, ties by ascending id.
RelaySelection baseline_max_fading(const SourceSignal& source, std::span<const RelayNode> pool,
                                   const DestinationNode& dest, std::size_t count,
                                   double total_power);

/// Top-L by the relay's own power rating, ties by ascending id.
RelaySelection baseline_max_power(const SourceSignal& source, std::span<const RelayNode> pool,
                                  const DestinationNode& dest, std::size_t count,
                                  double total_power);

}  // namespace v2x
