#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace v2x {

/// Folds a key tuple such as (master_seed, trial, relay) into one 64-bit seed
/// with the SplitMix64 finalizer. Distinct tuples give independent substreams.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> keys) noexcept;

/// std::mt19937_64 with platform-independent mappings to doubles and ranges.
/// The standard distributions are implementation-defined, so they are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [0, n), unbiased. n must be > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace v2x
