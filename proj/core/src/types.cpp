#include "v2x/types.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "v2x/error.hpp"

namespace v2x {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSignal: return "InvalidSignal";
    case ErrorCode::InvalidRelay: return "InvalidRelay";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::InfiniteSnr: return "InfiniteSnr";
    case ErrorCode::InvalidSnr: return "InvalidSnr";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InsufficientRelays: return "InsufficientRelays";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

std::string_view to_string(RelayKind kind) noexcept {
  switch (kind) {
    case RelayKind::vehicle: return "vehicle";
    case RelayKind::uav: return "uav";
    case RelayKind::mobile: return "mobile";
    case RelayKind::fixed_station: return "fixed_station";
  }
  return "unknown";
}

namespace {

[[noreturn]] void relay_error(const RelayNode& r, const std::string& what) {
  throw Error(ErrorCode::InvalidRelay, "relay " + std::to_string(r.id) + ": " + what);
}

bool in_unit_interval(double h) { return std::isfinite(h) && h >= 0.0 && h <= 1.0; }

}  // namespace

void validate(const RelayNode& r) {
  if (r.id == 0) relay_error(r, "id must be positive");
  if (!in_unit_interval(r.h_src)) relay_error(r, "h_src outside [0, 1]");
  if (!in_unit_interval(r.h_dst)) relay_error(r, "h_dst outside [0, 1]");
  if (!std::isfinite(r.power) || r.power <= 0.0) relay_error(r, "power must be > 0");
  if (!std::isfinite(r.min_power) || r.min_power < 0.0) relay_error(r, "min_power must be >= 0");
  if (r.min_power > r.power) relay_error(r, "min_power exceeds power");
  if (!std::isfinite(r.noise_var) || r.noise_var < 0.0) relay_error(r, "noise_var must be >= 0");
}

void validate_population(std::span<const RelayNode> relays) {
  std::unordered_set<RelayId> seen;
  seen.reserve(relays.size());
  for (const auto& r : relays) {
    validate(r);
    if (!seen.insert(r.id).second) relay_error(r, "duplicate id");
  }
}

SourceSignal::SourceSignal(std::vector<double> y, double power)
    : SourceSignal(y, power, std::inner_product(y.begin(), y.end(), y.begin(), 0.0)) {}

SourceSignal::SourceSignal(std::vector<double> y, double power, double y_sq)
    : y_(std::move(y)), power_(power), y_sq_(y_sq) {
  if (y_.empty()) throw Error(ErrorCode::InvalidSignal, "signal dimension must be >= 1");
  for (double v : y_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSignal, "signal has a non-finite entry");
  }
  // Zero power is allowed so that the silent-source case can be evaluated.
  if (!std::isfinite(power_) || power_ < 0.0) {
    throw Error(ErrorCode::InvalidSignal, "source power must be >= 0");
  }
}

SourceSignal SourceSignal::scalar(double y_sq, double power) {
  if (!std::isfinite(y_sq) || y_sq < 0.0) {
    throw Error(ErrorCode::InvalidSignal, "|y|^2 must be >= 0");
  }
  return SourceSignal({std::sqrt(y_sq)}, power, y_sq);
}

SourceSignal SourceSignal::scaled(double c) const {
  std::vector<double> y = y_;
  for (double& v : y) v *= c;
  return SourceSignal(std::move(y), power_, y_sq_ * c * c);
}

PathSnr::PathSnr(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::InvalidSnr, "SNR must be finite and >= 0, got " + std::to_string(value));
  }
}

}  // namespace v2x
