#include "v2x/link_instance.hpp"

#include "v2x/error.hpp"
#include "v2x/random.hpp"

namespace v2x {

LinkInstance random_link_instance(std::uint64_t seed, std::uint64_t index,
                                  std::size_t max_relays) {
  if (max_relays < 1) throw Error(ErrorCode::PreconditionViolated, "max_relays must be >= 1");
  Rng rng(mix_seed({seed, index}));
  const std::size_t count = 1 + static_cast<std::size_t>(rng.below(max_relays));
  const double source_power = rng.uniform(1.0, 25.0);
  const double y_sq = rng.uniform(0.5, 4.0);
  LinkInstance inst{SourceSignal::scalar(y_sq, source_power), DestinationNode{0.0}, {}};
  inst.relays.reserve(count);
  for (std::size_t g = 1; g <= count; ++g) {
    RelayNode r;
    r.id = static_cast<RelayId>(g);
    r.h_src = rng.uniform(0.01, 1.0);
    r.h_dst = rng.uniform(0.01, 1.0);
    r.power = rng.uniform(1.0, 25.0);
    r.noise_var = 2.0 - rng.uniform(0.0, 2.0);  // (0, 2]
    inst.relays.push_back(r);
  }
  return inst;
}

}  // namespace v2x
