#pragma once

// SplitMix64 with counter-derived substreams. A substream is fixed by
// (seed, sample, edge), so draws never depend on how work is split.

#include <cmath>
#include <cstdint>

namespace flowpotts {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  // Substream for one (sample, edge) cell of a run.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t sample, std::uint64_t edge) {
    std::uint64_t key = splitmix64_mix(seed + kGamma * (sample + 1));
    key = splitmix64_mix(key ^ (kGamma * (edge + 1)));
    return SplitMix64(key);
  }

  std::uint64_t next() { return splitmix64_mix(state_ += kGamma); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Poisson(λ) by inversion of the cumulative distribution, in double so the
// draw is the same on every platform for the same uniform.
inline std::uint32_t poisson_inversion(double lambda, double u) {
  if (lambda <= 0) return 0;
  double p = std::exp(-lambda);
  double cdf = p;
  std::uint32_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= lambda / k;
    double next = cdf + p;
    if (next == cdf) break;  // remaining mass is below double resolution
    cdf = next;
  }
  return k;
}

}  // namespace flowpotts
