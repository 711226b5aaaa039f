#pragma once

#include <cstdint>

// SplitMix64, used as a splittable counter-style generator: every (seed,
// stream) pair derives an independent sub-generator, so parallel sampling is
// reproducible regardless of scheduling. Output is bit-exact across
// platforms (no std::*_distribution involved).

namespace dlab::rng {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t s) : state_(s) {}
  explicit SplitMix64(RngSeed s) : state_(mix(s.seed + 0x9e3779b97f4a7c15ULL * (s.stream + 1))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0,1] (safe to take log of).
  double next_double_open() { return 1.0 - next_double(); }

  /// Standard normal via Box-Muller (deterministic, platform independent).
  double next_normal();

  /// Derive an independent child generator.
  SplitMix64 split() { return SplitMix64(next_u64() ^ 0xd1342543de82ef95ULL); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dlab::rng
