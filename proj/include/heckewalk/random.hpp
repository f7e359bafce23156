#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <boost/random/exponential_distribution.hpp>

namespace hw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream handle. Streams for parallel trials are derived from
/// (root seed, trial index) so a trial's draws do not depend on scheduling.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng stream(std::uint64_t root_seed, std::uint64_t index) {
    return Rng(splitmix64(root_seed) ^ splitmix64(~index * 0xd1342543de82ef95ULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with the given rate (ziggurat method).
  double exponential(double rate) {
    return boost::random::exponential_distribution<double>(1.0)(engine_) / rate;
  }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace hw
