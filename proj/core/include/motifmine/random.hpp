#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace motifmine {

/// Seeded random stream with platform-independent draws.
///
/// Every generator in the library takes an `Rng&`; identical seeds give
/// byte-identical outputs on any standard library because the distributions
/// are implemented here on top of the raw 64-bit engine output rather than
/// through `<random>`'s implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Independent child stream keyed by (seed, keys...). Used to give every
  /// graph / epoch / repetition its own stream so results never depend on
  /// iteration or thread schedule.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t below(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; also used for config hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace motifmine
