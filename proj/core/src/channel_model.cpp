#include "v2x/channel_model.hpp"

#include <cmath>
#include <string>

#include "v2x/error.hpp"
#include "v2x/tolerance.hpp"

namespace v2x {
namespace {

void require_relays(std::span<const RelayNode> relays) {
  if (relays.empty()) throw Error(ErrorCode::EmptySelection, "relay list is empty");
  for (const auto& r : relays) validate(r);
}

void require_destination(const DestinationNode& dest) {
  if (!std::isfinite(dest.noise_var) || dest.noise_var < 0.0) {
    throw Error(ErrorCode::PreconditionViolated, "destination noise_var must be >= 0");
  }
}

PathSnr ratio(double numerator, double denominator) {
  if (numerator == 0.0) return PathSnr(0.0);
  if (denominator == 0.0) throw Error(ErrorCode::InfiniteSnr, "every noise term is zero");
  return PathSnr(numerator / denominator);
}

// U_w without its |y| factor, and I_w. Kept in the same arithmetic order as
// combined_snr so that a one-relay combined path reproduces it bit for bit.
struct PathTerms {
  double signal;
  double noise;
};

PathTerms path_terms(const SourceSignal& source, const RelayNode& r) {
  const double gain = std::sqrt(r.power) * r.h_dst;
  return {gain * std::sqrt(source.power()) * r.h_src, gain * r.noise_var};
}

}  // namespace

std::vector<double> received_at_relay(const SourceSignal& source, const RelayNode& relay) {
  validate(relay);
  const double scale = std::sqrt(source.power()) * relay.h_src;
  std::vector<double> out;
  out.reserve(source.dimension());
  for (double y : source.y()) out.push_back(scale * y + relay.noise_var);
  return out;
}

std::vector<double> relayed_to_destination(const SourceSignal& source, const RelayNode& relay,
                                           const DestinationNode& dest) {
  require_destination(dest);
  auto out = received_at_relay(source, relay);
  const double scale = std::sqrt(relay.power) * relay.h_dst;
  for (double& v : out) v = scale * v + dest.noise_var;
  return out;
}

std::vector<double> combined_received(const SourceSignal& source, std::span<const RelayNode> relays,
                                      const DestinationNode& dest) {
  require_relays(relays);
  require_destination(dest);
  std::vector<double> out(source.dimension(),
                          static_cast<double>(relays.size()) * dest.noise_var);
  for (const auto& r : relays) {
    const double gain = std::sqrt(r.power) * r.h_dst;
    const double scale = std::sqrt(source.power()) * r.h_src;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += gain * (scale * source.y()[i] + r.noise_var);
    }
  }
  return out;
}

PathSnr combined_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     const DestinationNode& dest) {
  require_relays(relays);
  std::vector<double> powers;
  powers.reserve(relays.size());
  for (const auto& r : relays) powers.push_back(r.power);
  return combined_snr(source, relays, powers, dest);
}

PathSnr combined_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     std::span<const double> powers, const DestinationNode& dest) {
  require_relays(relays);
  require_destination(dest);
  if (powers.size() != relays.size()) {
    throw Error(ErrorCode::PreconditionViolated, "one power per relay is required");
  }
  double signal = 0.0;
  double relay_noise = 0.0;
  for (std::size_t g = 0; g < relays.size(); ++g) {
    if (!std::isfinite(powers[g]) || powers[g] < 0.0) {
      throw Error(ErrorCode::PreconditionViolated, "allocated power must be >= 0");
    }
    const double gain = std::sqrt(powers[g]) * relays[g].h_dst;
    signal += gain * std::sqrt(source.power()) * relays[g].h_src;
    relay_noise += gain * relays[g].noise_var;
  }
  const double dest_noise = static_cast<double>(relays.size()) * dest.noise_var;
  return ratio(signal * signal * source.y_sq(),
               relay_noise * relay_noise + dest_noise * dest_noise);
}

PathSnr single_path_snr(const SourceSignal& source, const RelayNode& relay,
                        const DestinationNode& dest) {
  validate(relay);
  require_destination(dest);
  const auto t = path_terms(source, relay);
  return ratio(t.signal * t.signal * source.y_sq(), t.noise * t.noise);
}

PathSnr sum_path_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     const DestinationNode& dest) {
  double total = 0.0;
  for (const auto& r : relays) total += single_path_snr(source, r, dest).value();
  return PathSnr(total);
}

BoundReport verify_snr_bound(const SourceSignal& source, std::span<const RelayNode> relays,
                             const DestinationNode& dest) {
  require_destination(dest);
  if (dest.noise_var != 0.0) {
    throw Error(ErrorCode::PreconditionViolated,
                "the bound assumes zero destination noise, got " + std::to_string(dest.noise_var));
  }
  require_relays(relays);

  BoundReport report;
  report.combined = combined_snr(source, relays, dest).value();
  report.summed = sum_path_snr(source, relays, dest).value();
  report.holds = leq_within(report.combined, report.summed);

  double sum_noise = 0.0;
  double sum_noise_sq = 0.0;
  double sum_ratio_sq = 0.0;
  double sum_weighted = 0.0;
  report.ratios.reserve(relays.size());
  for (const auto& r : relays) {
    const auto t = path_terms(source, r);
    const double signal = t.signal * std::sqrt(source.y_sq());
    // sum_path_snr above has already thrown if noise == 0 while signal > 0.
    const double u = signal == 0.0 ? 0.0 : signal / t.noise;
    report.ratios.push_back(u);
    sum_noise += t.noise;
    sum_noise_sq += t.noise * t.noise;
    sum_ratio_sq += u * u;
    sum_weighted += u * t.noise;
  }
  const double square_of_sum = sum_noise * sum_noise;
  const double lower = square_of_sum == 0.0 ? 0.0 : sum_ratio_sq * sum_noise_sq / square_of_sum;
  const double combined_form =
      square_of_sum == 0.0 ? 0.0 : sum_weighted * sum_weighted / square_of_sum;

  auto step = [](std::string name, double lhs, double rhs, StepRelation rel) {
    const bool ok = rel == StepRelation::equal ? near_within(lhs, rhs) : leq_within(rhs, lhs);
    return BoundStep{std::move(name), lhs, rhs, rel, ok};
  };
  report.steps.push_back(
      step("expanded_square", square_of_sum, sum_noise_sq, StepRelation::greater_equal));
  report.steps.push_back(step("sum_lower_bound", report.summed, lower, StepRelation::greater_equal));
  report.steps.push_back(step("cauchy_schwarz", sum_ratio_sq * sum_noise_sq,
                              sum_weighted * sum_weighted, StepRelation::greater_equal));
  report.steps.push_back(
      step("combined_form", report.combined, combined_form, StepRelation::equal));
  return report;
}

}  // namespace v2x
