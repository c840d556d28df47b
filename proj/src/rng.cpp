#include "scorelo/rng.hpp"

#include <cmath>

#include "scorelo/core.hpp"

namespace scorelo {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) {
    throw validation_error("below(0) is undefined");
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + kGolden * (index + 1)));
}

std::int64_t sample_poisson(SplitMix64& rng, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw validation_error("poisson rate must be finite and non-negative");
  }
  if (lambda == 0.0) return 0;
  if (lambda > 500.0) {
    return sample_poisson(rng, lambda / 2.0) + sample_poisson(rng, lambda / 2.0);
  }
  const double threshold = std::exp(-lambda);
  std::int64_t count = -1;
  double product = 1.0;
  do {
    ++count;
    product *= rng.next_double();
  } while (product > threshold);
  return count;
}

}  // namespace scorelo
