#pragma once

#include <algorithm>
#include <cmath>

namespace v2x {

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsFloor = 1e-12;

/// a <= b up to max(kRelTol * max(|a|, |b|), kAbsFloor).
[[nodiscard]] inline bool leq_within(double a, double b, double rel = kRelTol,
                                     double abs_floor = kAbsFloor) noexcept {
  const double slack = std::max(rel * std::max(std::fabs(a), std::fabs(b)), abs_floor);
  return a <= b + slack;
}

[[nodiscard]] inline bool near_within(double a, double b, double rel = kRelTol,
                                      double abs_floor = kAbsFloor) noexcept {
  return leq_within(a, b, rel, abs_floor) && leq_within(b, a, rel, abs_floor);
}

}  // namespace v2x
