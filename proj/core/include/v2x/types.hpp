#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace v2x {

using RelayId = std::uint32_t;

enum class RelayKind { vehicle, uav, mobile, fixed_station };

std::string_view to_string(RelayKind kind) noexcept;

/// One cooperative relay. Coefficients are unitless gains of the two hops,
/// powers and noise variances are in watts.
struct RelayNode {
  RelayId id = 1;
  RelayKind kind = RelayKind::vehicle;
  double h_src = 0.0;  ///< source -> relay
  double h_dst = 0.0;  ///< relay -> destination
  double power = 1.0;
  double min_power = 0.0;
  double noise_var = 0.0;
};

/// Throws Error(InvalidRelay) naming the first violated invariant.
void validate(const RelayNode& relay);

/// Throws Error(InvalidRelay) on an invalid member or a duplicated id.
void validate_population(std::span<const RelayNode> relays);

/// The transmitting vehicle's sensing vector and transmit power.
class SourceSignal {
 public:
  SourceSignal(std::vector<double> y, double power);

  /// A one-dimensional signal whose squared magnitude is exactly `y_sq`.
  static SourceSignal scalar(double y_sq, double power);

  [[nodiscard]] std::span<const double> y() const noexcept { return y_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return y_.size(); }
  [[nodiscard]] double power() const noexcept { return power_; }
  [[nodiscard]] double y_sq() const noexcept { return y_sq_; }

  /// Same signal scaled by `c`; y_sq scales by c^2.
  [[nodiscard]] SourceSignal scaled(double c) const;

 private:
  SourceSignal(std::vector<double> y, double power, double y_sq);

  std::vector<double> y_;
  double power_;
  double y_sq_;
};

struct DestinationNode {
  double noise_var = 0.0;
};

/// Linear (not dB) signal-to-noise ratio; always finite and non-negative.
class PathSnr {
 public:
  constexpr PathSnr() = default;
  explicit PathSnr(double value);

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const PathSnr&, const PathSnr&) = default;

 private:
  double value_ = 0.0;
};

}  // namespace v2x
