#pragma once

#include <cstdint>
#include <random>

namespace ldic {

// splitmix64 step; the standard finalizer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based derivation: stream k of a master seed is independent of how
// many streams exist and of evaluation order. Used for per-trial seeds and
// for splitting codebook/state/noise randomness off one config seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xA076'1D64'78BD'642Full * (stream + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

// Unbiased draw from [0, n) by rejection. std::uniform_int_distribution is
// implementation-defined, which would break byte-identical reproducibility
// across toolchains; this is pinned.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace ldic
