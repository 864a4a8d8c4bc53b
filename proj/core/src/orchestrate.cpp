#include "v2x/orchestrate.hpp"

#include <string>

#include "v2x/error.hpp"

namespace v2x {

std::pair<RelaySelection, CapacityValue> select_best_count(const SourceSignal& source,
                                                           std::span<const RelayNode> pool,
                                                           const DestinationNode& dest,
                                                           const OrchestrationConfig& config) {
  if (config.l_min < 1 || config.l_min > config.l_max) {
    throw Error(ErrorCode::InvalidConfig, "relay count range is empty");
  }
  std::optional<std::pair<RelaySelection, CapacityValue>> best;
  std::optional<Error> last_error;
  for (std::size_t L = config.l_min; L <= config.l_max && L <= pool.size(); ++L) {
    try {
      auto s = select_optimized(source, pool, dest, L,
                                static_cast<double>(L) * config.per_relay_power,
                                config.allocation, config.bandwidth_kbps);
      const auto c = selection_capacity(source, s, dest, config.bandwidth_kbps);
      if (!best || c.kbps > best->second.kbps) best.emplace(std::move(s), c);
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (!best) {
    if (last_error) throw *last_error;
    throw Error(ErrorCode::InsufficientRelays, "pool smaller than l_min");
  }
  return std::move(*best);
}

std::vector<OrchestrationEntry> orchestrate_multi_destination(
    std::span<const DestinationLink> links, const OrchestrationConfig& config) {
  if (links.empty()) throw Error(ErrorCode::PreconditionViolated, "no destinations given");
  std::vector<OrchestrationEntry> out;
  out.reserve(links.size());
  for (const auto& link : links) {
    OrchestrationEntry entry;
    entry.destination_id = link.destination_id;
    try {
      auto [selection, capacity] = select_best_count(link.source, link.pool, link.dest, config);
      entry.selection = std::move(selection);
      entry.capacity = capacity;
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<DestinationLink> make_destination_links(const PopulationSpec& spec,
                                                    const ScenarioConfig& scenario,
                                                    std::size_t destinations) {
  scenario.validate();
  const Population shared = generate_population(spec, 0);
  std::vector<DestinationLink> links;
  links.reserve(destinations);
  for (std::size_t k = 0; k < destinations; ++k) {
    links.push_back(DestinationLink{static_cast<std::uint32_t>(k + 1), scenario.source(),
                                    scenario.destination(),
                                    redraw_destination_links(spec, shared.relays, k + 1)});
  }
  return links;
}

}  // namespace v2x
