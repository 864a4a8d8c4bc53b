#include "v2x/baselines.hpp"

namespace v2x {

RelaySelection baseline_max_fading(const SourceSignal&, std::span<const RelayNode> pool,
                                   const DestinationNode&, std::size_t count,
                                   double total_power) {
  validate_population(pool);
  auto chosen =
      detail::top_by(pool, count, [](const RelayNode& r) { return r.h_src * r.h_dst; });
  return detail::equal_power(std::move(chosen), total_power, SelectionScheme::max_fading);
}

RelaySelection baseline_max_power(const SourceSignal&, std::span<const RelayNode> pool,
                                  const DestinationNode&, std::size_t count, double total_power) {
  validate_population(pool);
  auto chosen = detail::top_by(pool, count, [](const RelayNode& r) { return r.power; });
  return detail::equal_power(std::move(chosen), total_power, SelectionScheme::max_power);
}

}  // namespace v2x
