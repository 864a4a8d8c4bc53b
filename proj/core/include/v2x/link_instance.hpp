#pragma once

#include <cstdint>
#include <vector>

#include "v2x/types.hpp"

namespace v2x {

/// A complete single-link problem: one source, one destination, L relays.
struct LinkInstance {
  SourceSignal source;
  DestinationNode dest;
  std::vector<RelayNode> relays;
};

/// Random instance for bound checking, fully determined by (seed, index):
/// L uniform in [1, max_relays], coefficients in [0.01, 1], source and relay
/// powers in [1, 25] W, relay noise in (0, 2], |y|^2 in [0.5, 4], and no
/// destination noise.
LinkInstance random_link_instance(std::uint64_t seed, std::uint64_t index,
                                  std::size_t max_relays = 20);

}  // namespace v2x
