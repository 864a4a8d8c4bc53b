#include "v2x/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "v2x/channel_model.hpp"
#include "v2x/error.hpp"

namespace v2x {

CapacityValue capacity_from_snr(double snr, double bandwidth_kbps) {
  if (!(bandwidth_kbps > 0.0) || !std::isfinite(bandwidth_kbps)) {
    throw Error(ErrorCode::PreconditionViolated, "bandwidth must be > 0");
  }
  if (std::isnan(snr) || snr < 0.0) {
    throw Error(ErrorCode::InvalidSnr, "negative SNR " + std::to_string(snr));
  }
  const double bits = 0.5 * std::log2(1.0 + snr);
  return {bits, bits * bandwidth_kbps};
}

CapacityValue capacity_from_snr(PathSnr snr, double bandwidth_kbps) {
  return capacity_from_snr(snr.value(), bandwidth_kbps);
}

CapacityValue path_capacity(const SourceSignal& source, std::span<const RelayNode> relays,
                            const DestinationNode& dest, double bandwidth_kbps) {
  return capacity_from_snr(combined_snr(source, relays, dest), bandwidth_kbps);
}

CapacityValue path_capacity(const SourceSignal& source, std::span<const RelayNode> relays,
                            std::span<const double> powers, const DestinationNode& dest,
                            double bandwidth_kbps) {
  return capacity_from_snr(combined_snr(source, relays, powers, dest), bandwidth_kbps);
}

CapacityValue individual_capacity(const SourceSignal& source, const RelayNode& relay,
                                  const DestinationNode& dest, double bandwidth_kbps) {
  try {
    return path_capacity(source, std::span(&relay, 1), dest, bandwidth_kbps);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfiniteSnr) throw;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
}

RankedRelays rank_relays(const SourceSignal& source, std::span<const RelayNode> pool,
                         const DestinationNode& dest, double bandwidth_kbps) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "cannot rank an empty pool");
  validate_population(pool);

  std::vector<CapacityValue> caps;
  caps.reserve(pool.size());
  for (const auto& r : pool) caps.push_back(individual_capacity(source, r, dest, bandwidth_kbps));

  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (caps[a].bits_per_use != caps[b].bits_per_use) {
      return caps[a].bits_per_use > caps[b].bits_per_use;
    }
    return pool[a].id < pool[b].id;
  });

  RankedRelays out;
  out.order.reserve(idx.size());
  out.capacities.reserve(idx.size());
  for (std::size_t i : idx) {
    out.order.push_back(pool[i].id);
    out.capacities.push_back(caps[i]);
  }
  return out;
}

}  // namespace v2x
