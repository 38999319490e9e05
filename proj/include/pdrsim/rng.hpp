#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Counter-based deterministic RNG. Every consumer owns a Stream keyed by
// (seed, stream class, entity id); a draw is a pure function of (key, counter),
// so parallel evaluation order cannot perturb any other consumer's values.

namespace pdrsim::rng {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(a, mix(b, c));
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

enum class StreamClass : std::uint64_t {
  PlaceHome = 1,
  PlacePoi = 2,
  InitReturn = 3,
  Thresholds = 4,
  Decision = 5,
};

inline double to_unit(std::uint64_t x) {
  return double(x >> 11) * 0x1.0p-53;  // [0,1)
}

// value at an absolute counter position, independent of draw history
inline double unit_at(std::uint64_t key, std::uint64_t ctr) {
  return to_unit(mix64(key ^ mix64(ctr)));
}

struct Stream {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  std::uint64_t next_u64() { return mix64(key ^ mix64(ctr++)); }
  double next_unit() { return to_unit(next_u64()); }

  bool bernoulli(double p) { return next_unit() < p; }

  // Box-Muller, consumes exactly two uniforms (second variate discarded so
  // the draw count per call is fixed; determinism depends on that)
  double normal(double mu, double sigma) {
    double u1 = 1.0 - next_unit();  // (0,1]
    double u2 = next_unit();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    return mu + sigma * z;
  }
};

inline Stream stream(std::uint64_t seed, StreamClass cls, std::uint64_t id) {
  return Stream{mix(seed, static_cast<std::uint64_t>(cls), id), 0};
}

}  // namespace pdrsim::rng
