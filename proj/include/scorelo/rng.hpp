#pragma once

#include <cstdint>

namespace scorelo {

// SplitMix64 (Vigna, 2015; public domain): a 64-bit Weyl sequence pushed
// through an avalanching finalizer. Chosen because the whole algorithm fits
// in a dozen lines, so any implementation in any language reproduces the
// exact stream from the seed alone.
inline constexpr const char* kRngAlgorithm = "splitmix64";

std::uint64_t mix64(std::uint64_t z);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double();

  // Uniform in {0, ..., n-1}, unbiased via rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Independent substream k of a master seed; replications use substream(seed, k).
SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

// Exact Poisson sampling: Knuth's uniform-product method, with the
// lambda = lambda/2 + lambda/2 additivity split applied above 500 so the
// e^-lambda threshold never underflows.
std::int64_t sample_poisson(SplitMix64& rng, double lambda);

}  // namespace scorelo
