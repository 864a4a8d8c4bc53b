#include "v2x/population.hpp"

#include <cmath>
#include <string>

#include "v2x/error.hpp"
#include "v2x/random.hpp"

namespace v2x {
namespace {

// Keeps relay substreams apart from destination redraw substreams.
constexpr std::uint64_t kDestinationDomain = 0x64657374ULL;

void check_interval(const Interval& iv, const std::string& name) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || iv.hi > 1.0 ||
      iv.lo > iv.hi) {
    throw Error(ErrorCode::InvalidConfig, "interval " + name + " = [" + std::to_string(iv.lo) +
                                              ", " + std::to_string(iv.hi) +
                                              "] must satisfy 0 <= lo <= hi <= 1");
  }
}

double draw_on_grid(Rng& rng, const Interval& iv, double d) {
  return grid_point(iv, d, static_cast<std::size_t>(rng.below(grid_size(iv, d))));
}

}  // namespace

double NoisePattern::for_index(std::size_t g) const noexcept {
  if (kind == NoisePatternKind::mod3 && g % 3 == 0) return every_third;
  return base;
}

void PopulationSpec::validate() const {
  if (n_total < 1) throw Error(ErrorCode::InvalidConfig, "n_total must be >= 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw Error(ErrorCode::InvalidConfig, "d must be > 0");
  check_interval(toward_source.h_src, "toward_source.h_src");
  check_interval(toward_source.h_dst, "toward_source.h_dst");
  check_interval(toward_destination.h_src, "toward_destination.h_src");
  check_interval(toward_destination.h_dst, "toward_destination.h_dst");
  if (!(relay_power.lo > 0.0) || relay_power.lo > relay_power.hi || !std::isfinite(relay_power.hi)) {
    throw Error(ErrorCode::InvalidConfig, "relay_power must satisfy 0 < lo <= hi");
  }
  if (!(noise.base >= 0.0) || !(noise.every_third >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "noise variances must be >= 0");
  }
  if (!(motion_split >= 0.0 && motion_split <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "motion_split must lie in [0, 1]");
  }
  if (!(min_power >= 0.0) || min_power > relay_power.lo) {
    throw Error(ErrorCode::InvalidConfig, "min_power must lie in [0, relay_power.lo]");
  }
}

std::size_t grid_size(const Interval& iv, double d) noexcept {
  const double steps = std::floor(iv.width() / d + 1e-9);
  return steps > 0.0 ? static_cast<std::size_t>(steps) + 1 : 1;
}

double grid_point(const Interval& iv, double d, std::size_t k) noexcept {
  return std::min(iv.hi, iv.lo + static_cast<double>(k) * d);
}

bool on_grid(const Interval& iv, double d, double value) noexcept {
  if (value < iv.lo || value > iv.hi) return false;
  const double k = std::round((value - iv.lo) / d);
  return k >= 0.0 && static_cast<std::size_t>(k) < grid_size(iv, d) &&
         std::fabs(value - grid_point(iv, d, static_cast<std::size_t>(k))) <= 1e-9 * d;
}

Population generate_population(const PopulationSpec& spec, std::uint64_t stream) {
  spec.validate();
  Population pop;
  const auto flag = [&](const Interval& iv, const char* name) {
    if (grid_size(iv, spec.d) == 1) pop.degenerate_grids.emplace_back(name);
  };
  flag(spec.toward_source.h_src, "toward_source.h_src");
  flag(spec.toward_source.h_dst, "toward_source.h_dst");
  flag(spec.toward_destination.h_src, "toward_destination.h_src");
  flag(spec.toward_destination.h_dst, "toward_destination.h_dst");

  pop.relays.reserve(spec.n_total);
  for (std::size_t g = 1; g <= spec.n_total; ++g) {
    Rng rng(mix_seed({spec.seed, stream, g}));
    const auto& ranges = rng.bernoulli(spec.motion_split) ? spec.toward_source
                                                          : spec.toward_destination;
    RelayNode r;
    r.id = static_cast<RelayId>(g);
    r.kind = spec.kind;
    r.h_src = draw_on_grid(rng, ranges.h_src, spec.d);
    r.h_dst = draw_on_grid(rng, ranges.h_dst, spec.d);
    r.power = spec.relay_power.lo == spec.relay_power.hi
                  ? spec.relay_power.lo
                  : rng.uniform(spec.relay_power.lo, spec.relay_power.hi);
    r.min_power = spec.min_power;
    r.noise_var = spec.noise.for_index(g);
    pop.relays.push_back(r);
  }
  return pop;
}

std::vector<RelayNode> redraw_destination_links(const PopulationSpec& spec,
                                                std::span<const RelayNode> pool,
                                                std::uint64_t destination_stream) {
  spec.validate();
  std::vector<RelayNode> out(pool.begin(), pool.end());
  for (auto& r : out) {
    Rng rng(mix_seed({spec.seed, kDestinationDomain, destination_stream, r.id}));
    const auto& ranges = rng.bernoulli(spec.motion_split) ? spec.toward_source
                                                          : spec.toward_destination;
    r.h_dst = draw_on_grid(rng, ranges.h_dst, spec.d);
  }
  return out;
}

}  // namespace v2x
