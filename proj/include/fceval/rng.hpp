#pragma once

#include <cstdint>

namespace fceval {

// Counter-based random generator. A stream is keyed by (seed, stream) and
// every draw is a pure function of its 64-bit counter, so (seed, stream,
// counter) fully determines the draw. Streams derived from distinct
// (seed, stream) pairs are independent for Monte Carlo purposes, which gives
// bitwise-reproducible parallelism across replications.
//
// The bit mixer is two rounds of the SplitMix64 finalizer with the stream key
// folded in between rounds.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t bits(std::uint64_t counter) const;

  // Uniform on the open interval (0,1).
  double uniform(std::uint64_t counter) const;

  // Standard normal via the inverse CDF (Wichura's AS241 algorithm).
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

// Inverse of the standard normal CDF, accurate to ~1e-15 for p in (0,1).
double inverse_normal_cdf(double p);

}  // namespace fceval
