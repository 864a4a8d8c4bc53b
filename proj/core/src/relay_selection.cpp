#include "v2x/relay_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "v2x/channel_model.hpp"
#include "v2x/error.hpp"
#include "v2x/random.hpp"
#include "v2x/tolerance.hpp"

namespace v2x {

std::string_view to_string(SelectionScheme scheme) noexcept {
  switch (scheme) {
    case SelectionScheme::uniform_arbitrary: return "uniform_arbitrary";
    case SelectionScheme::uniform_ranked: return "uniform_ranked";
    case SelectionScheme::optimized: return "optimized";
    case SelectionScheme::max_fading: return "max_fading";
    case SelectionScheme::max_power: return "max_power";
  }
  return "unknown";
}

std::vector<RelayId> RelaySelection::relay_ids() const {
  std::vector<RelayId> ids;
  ids.reserve(relays.size());
  for (const auto& r : relays) ids.push_back(r.id);
  return ids;
}

bool satisfies_invariants(const RelaySelection& s, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (s.powers.size() != s.relays.size()) return fail("powers and relays differ in length");
  const double sum = std::accumulate(s.powers.begin(), s.powers.end(), 0.0);
  if (!near_within(sum, s.total_power)) {
    return fail("powers sum to " + std::to_string(sum) + ", budget is " +
                std::to_string(s.total_power));
  }
  std::unordered_set<RelayId> ids;
  for (std::size_t w = 0; w < s.relays.size(); ++w) {
    if (!leq_within(s.relays[w].min_power, s.powers[w])) {
      return fail("relay " + std::to_string(s.relays[w].id) + " is below its minimum power");
    }
    if (!ids.insert(s.relays[w].id).second) {
      return fail("relay " + std::to_string(s.relays[w].id) + " selected twice");
    }
  }
  return true;
}

CapacityValue selection_capacity(const SourceSignal& source, const RelaySelection& selection,
                                 const DestinationNode& dest, double bandwidth_kbps) {
  return path_capacity(source, selection.relays, selection.powers, dest, bandwidth_kbps);
}

double AllocationConfig::quantum_for(double total_power) const {
  const double q = quantum.value_or(total_power / 1000.0);
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::PreconditionViolated, "allocation quantum must be > 0");
  }
  if (max_iters < 1) throw Error(ErrorCode::PreconditionViolated, "max_iters must be >= 1");
  return q;
}

namespace detail {

void require_count(std::span<const RelayNode> pool, std::size_t count) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "relay pool is empty");
  if (count == 0) throw Error(ErrorCode::EmptySelection, "at least one relay must be selected");
  if (count > pool.size()) {
    throw Error(ErrorCode::InsufficientRelays, "requested " + std::to_string(count) +
                                                   " relays from a pool of " +
                                                   std::to_string(pool.size()));
  }
}

std::vector<double> clipped_uniform(std::span<const RelayNode> relays, double total_power) {
  const std::size_t n = relays.size();
  std::vector<double> mins;
  mins.reserve(n);
  for (const auto& r : relays) mins.push_back(r.min_power);
  const double min_sum = std::accumulate(mins.begin(), mins.end(), 0.0);
  if (!leq_within(min_sum, total_power)) {
    throw Error(ErrorCode::InfeasibleBudget, "minimum powers sum to " + std::to_string(min_sum) +
                                                 " W, budget is " + std::to_string(total_power) +
                                                 " W");
  }

  std::vector<double> sorted = mins;
  std::sort(sorted.begin(), sorted.end());
  // Level t shared by the k relays with the smallest minimums; the others sit at theirs.
  double level = total_power / static_cast<double>(n);
  double fixed = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    const double t = (total_power - fixed) / static_cast<double>(k);
    if (t >= sorted[k - 1]) {
      level = t;
      break;
    }
    fixed += sorted[k - 1];
    if (k == 1) level = sorted[0];
  }
  std::vector<double> powers;
  powers.reserve(n);
  for (double m : mins) powers.push_back(std::max(m, level));
  return powers;
}

RelaySelection equal_power(std::vector<RelayNode> relays, double total_power,
                           SelectionScheme scheme) {
  if (relays.empty()) throw Error(ErrorCode::EmptySelection, "empty selection");
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw Error(ErrorCode::PreconditionViolated, "total power must be > 0");
  }
  const double share = total_power / static_cast<double>(relays.size());
  for (const auto& r : relays) {
    if (r.min_power > share) {
      throw Error(ErrorCode::InfeasibleBudget,
                  "relay " + std::to_string(r.id) + " needs " + std::to_string(r.min_power) +
                      " W, equal share is " + std::to_string(share) + " W");
    }
  }
  RelaySelection s;
  s.powers.assign(relays.size(), share);
  s.relays = std::move(relays);
  s.total_power = total_power;
  s.scheme = scheme;
  return s;
}

}  // namespace detail

RelaySelection select_uniform(std::span<const RelayNode> pool, std::size_t count,
                              double total_power, std::uint64_t seed) {
  detail::require_count(pool, count);
  validate_population(pool);
  const double share = total_power / static_cast<double>(count);

  Rng rng(seed);
  std::vector<std::size_t> idx(pool.size());
  for (int attempt = 0; attempt < kUniformRetryLimit; ++attempt) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: idx[0..count) becomes a uniform random subset.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(idx[i], idx[j]);
    }
    bool feasible = true;
    std::vector<RelayNode> chosen;
    chosen.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      feasible = feasible && pool[idx[i]].min_power <= share;
      chosen.push_back(pool[idx[i]]);
    }
    if (feasible) {
      return detail::equal_power(std::move(chosen), total_power,
                                 SelectionScheme::uniform_arbitrary);
    }
  }
  throw Error(ErrorCode::InfeasibleBudget, "no feasible random subset after " +
                                               std::to_string(kUniformRetryLimit) + " draws");
}

namespace {

std::vector<RelayNode> ranked_prefix(const SourceSignal& source, std::span<const RelayNode> pool,
                                     const DestinationNode& dest, std::size_t count,
                                     double bandwidth_kbps) {
  detail::require_count(pool, count);
  const RankedRelays ranked = rank_relays(source, pool, dest, bandwidth_kbps);
  std::unordered_map<RelayId, const RelayNode*> by_id;
  by_id.reserve(pool.size());
  for (const auto& r : pool) by_id.emplace(r.id, &r);
  std::vector<RelayNode> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(*by_id.at(ranked.order[i]));
  return out;
}

// Combined SNR as a function of the allocated powers only. The relay-side
// terms are folded into per-relay constants so that a one-quantum move costs
// O(1) to evaluate.
class PowerObjective {
 public:
  PowerObjective(const SourceSignal& source, std::span<const RelayNode> relays,
                 const DestinationNode& dest)
      : scale_(source.y_sq()) {
    const double dest_noise = static_cast<double>(relays.size()) * dest.noise_var;
    floor_ = dest_noise * dest_noise;
    signal_.reserve(relays.size());
    noise_.reserve(relays.size());
    for (const auto& r : relays) {
      signal_.push_back(r.h_dst * std::sqrt(source.power()) * r.h_src);
      noise_.push_back(r.h_dst * r.noise_var);
    }
  }

  struct Sums {
    double signal = 0.0;
    double noise = 0.0;
  };

  [[nodiscard]] Sums sums(std::span<const double> powers) const {
    Sums s;
    for (std::size_t g = 0; g < powers.size(); ++g) {
      const double root = std::sqrt(powers[g]);
      s.signal += root * signal_[g];
      s.noise += root * noise_[g];
    }
    return s;
  }

  // Sums after relay g moves from power `from` to power `to`.
  [[nodiscard]] Sums shifted(Sums s, std::size_t g, double from, double to) const {
    const double delta = std::sqrt(to) - std::sqrt(from);
    s.signal += delta * signal_[g];
    s.noise += delta * noise_[g];
    return s;
  }

  [[nodiscard]] double value(const Sums& s) const {
    const double num = s.signal * s.signal * scale_;
    const double den = s.noise * s.noise + floor_;
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
  }

 private:
  double scale_;
  double floor_ = 0.0;
  std::vector<double> signal_;
  std::vector<double> noise_;
};

bool ordering_respected(const SourceSignal& source, const RelaySelection& s,
                        const DestinationNode& dest, double bandwidth_kbps) {
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < s.relays.size(); ++w) {
    double c = std::numeric_limits<double>::infinity();
    try {
      c = path_capacity(source, std::span(&s.relays[w], 1), std::span(&s.powers[w], 1), dest,
                        bandwidth_kbps)
              .bits_per_use;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfiniteSnr) throw;
    }
    if (c > previous && !near_within(c, previous)) return false;
    previous = c;
  }
  return true;
}

}  // namespace

RelaySelection select_topk(const SourceSignal& source, std::span<const RelayNode> pool,
                           const DestinationNode& dest, std::size_t count, double total_power,
                           double bandwidth_kbps) {
  return detail::equal_power(ranked_prefix(source, pool, dest, count, bandwidth_kbps),
                             total_power, SelectionScheme::uniform_ranked);
}

RelaySelection allocate_power(const SourceSignal& source, const RelaySelection& selection,
                              const DestinationNode& dest, const AllocationConfig& config,
                              double bandwidth_kbps) {
  const auto& relays = selection.relays;
  if (relays.empty()) throw Error(ErrorCode::EmptySelection, "empty selection");
  const double total = selection.total_power;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::PreconditionViolated, "total power must be > 0");
  }
  const double quantum = config.quantum_for(total);
  const std::size_t n = relays.size();

  RelaySelection out;
  out.relays = relays;
  out.total_power = total;
  out.scheme = SelectionScheme::optimized;
  const std::vector<double> start = detail::clipped_uniform(relays, total);

  // Powers live on the lattice start + steps * quantum; integer steps keep
  // the budget free of accumulated rounding.
  std::vector<std::int64_t> steps(n, 0);
  auto power_at = [&](std::size_t g, std::int64_t k) {
    return start[g] + static_cast<double>(k) * quantum;
  };
  auto can_give = [&](std::size_t g) {
    return power_at(g, steps[g] - 1) >= relays[g].min_power - 1e-12 * quantum;
  };

  const PowerObjective objective(source, relays, dest);
  std::vector<double> powers = start;
  auto current_sums = objective.sums(powers);
  double current = objective.value(current_sums);

  auto transfer_value = [&](std::size_t from, std::size_t to) {
    auto s = objective.shifted(current_sums, from, powers[from], power_at(from, steps[from] - 1));
    s = objective.shifted(s, to, powers[to], power_at(to, steps[to] + 1));
    return objective.value(s);
  };

  for (std::uint64_t iter = 0; n > 1 && iter < config.max_iters; ++iter) {
    std::size_t recipient = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < n; ++g) {
      const double v =
          objective.value(objective.shifted(current_sums, g, powers[g], power_at(g, steps[g] + 1)));
      if (v > best_gain) {
        best_gain = v;
        recipient = g;
      }
    }
    std::size_t donor = n;
    double best_after_loss = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < n; ++g) {
      if (g == recipient || !can_give(g)) continue;
      const double v =
          objective.value(objective.shifted(current_sums, g, powers[g], power_at(g, steps[g] - 1)));
      if (v > best_after_loss) {
        best_after_loss = v;
        donor = g;
      }
    }

    if (donor == n || !(transfer_value(donor, recipient) > current)) {
      // The marginal pair did not help; fall back to the best of all pairs.
      double candidate = current;
      donor = n;
      for (std::size_t from = 0; from < n; ++from) {
        if (!can_give(from)) continue;
        for (std::size_t to = 0; to < n; ++to) {
          if (to == from) continue;
          const double v = transfer_value(from, to);
          if (v > candidate) {
            candidate = v;
            donor = from;
            recipient = to;
          }
        }
      }
      if (donor == n) break;
    }

    --steps[donor];
    ++steps[recipient];
    powers[donor] = std::max(power_at(donor, steps[donor]), relays[donor].min_power);
    powers[recipient] = power_at(recipient, steps[recipient]);
    current_sums = objective.sums(powers);
    current = objective.value(current_sums);
  }

  out.powers = std::move(powers);
  out.ordering_holds = ordering_respected(source, out, dest, bandwidth_kbps);
  return out;
}

RelaySelection select_optimized(const SourceSignal& source, std::span<const RelayNode> pool,
                                const DestinationNode& dest, std::size_t count,
                                double total_power, const AllocationConfig& config,
                                double bandwidth_kbps) {
  RelaySelection ranked;
  ranked.relays = ranked_prefix(source, pool, dest, count, bandwidth_kbps);
  ranked.total_power = total_power;
  ranked.powers.assign(count, total_power / static_cast<double>(count));
  return allocate_power(source, ranked, dest, config, bandwidth_kbps);
}

ChainReport verify_capacity_chain(const SourceSignal& source, std::span<const RelayNode> pool,
                                  const DestinationNode& dest, std::size_t count,
                                  double total_power, const AllocationConfig& config,
                                  double bandwidth_kbps, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::PreconditionViolated, "trials must be >= 1");
  ChainReport report;
  report.c_b3 = selection_capacity(
                    source, select_optimized(source, pool, dest, count, total_power, config,
                                             bandwidth_kbps),
                    dest, bandwidth_kbps)
                    .kbps;
  report.c_b2 = selection_capacity(
                    source, select_topk(source, pool, dest, count, total_power, bandwidth_kbps),
                    dest, bandwidth_kbps)
                    .kbps;
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto b1 = select_uniform(pool, count, total_power, mix_seed({seed, t}));
    const double c = selection_capacity(source, b1, dest, bandwidth_kbps).kbps;
    if (c > report.c_b2) report.b1_draws_above_b2.push_back(t);
    sum += c;
  }
  report.c_b1_mean = sum / static_cast<double>(trials);
  report.b3_dominates_b2 = report.c_b3 >= report.c_b2 - kChainEpsilonKbps;
  report.b2_dominates_b1_mean = report.c_b2 >= report.c_b1_mean - kChainEpsilonKbps;
  report.chain_holds = report.b3_dominates_b2 && report.b2_dominates_b1_mean;
  return report;
}

}  // namespace v2x
