#pragma once

#include <cstdint>

namespace cliquedec {

/// SplitMix64: the fixed deterministic generator used for all seeded
/// randomness. Same seed gives the same stream on every platform.
/// fork(tag) derives an independent substream, so parallel consumers can
/// draw reproducibly without sharing state.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  SplitMix64 fork(std::uint64_t tag) const {
    SplitMix64 t(state ^ (0x9e3779b97f4a7c15ull * (tag + 1)));
    t.next();
    return t;
  }
};

}  // namespace cliquedec
