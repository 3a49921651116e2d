#pragma once

#include <cmath>
#include <cstdint>

namespace ltspec {

// SplitMix64: 64-bit counter-based generator (Steele, Lea, Flood 2014).
// Bit-exact across platforms, which is what makes seeded potentials
// byte-reproducible in reports.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0,1), 53-bit mantissa.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal via Box-Muller; avoids std::normal_distribution,
  // whose stream is implementation-defined.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

}  // namespace ltspec
