#include <doctest.h>

#include <cmath>

#include "scorelo/core.hpp"
#include "scorelo/rng.hpp"

using namespace scorelo;

TEST_CASE("splitmix64 reproduces the published reference stream") {
  // First outputs for seed 1234567, as listed in the algorithm's reference
  // implementation test vectors.
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
}

TEST_CASE("next_double stays in [0, 1)") {
  SplitMix64 rng(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below is bounded and rejects zero") {
  SplitMix64 rng(10);
  for (int i = 0; i < 10000; ++i) {
    CHECK(rng.below(7) < 7);
  }
  CHECK_THROWS_AS(rng.below(0), validation_error);
}

TEST_CASE("substreams differ from each other and are reproducible") {
  SplitMix64 a = substream(5, 0);
  SplitMix64 b = substream(5, 1);
  SplitMix64 a_again = substream(5, 0);
  CHECK(a.next() != b.next());
  CHECK(substream(5, 0).next() == a_again.next());
}

TEST_CASE("poisson sampling matches its first two moments") {
  SUBCASE("small rate") {
    SplitMix64 rng(21);
    const double lambda = 2.5;
    const int draws = 200000;
    double sum = 0.0, sum_squares = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double x = static_cast<double>(sample_poisson(rng, lambda));
      sum += x;
      sum_squares += x * x;
    }
    const double mean = sum / draws;
    const double variance = sum_squares / draws - mean * mean;
    CHECK(std::abs(mean - lambda) <= 3.0 * std::sqrt(lambda / draws));
    CHECK(std::abs(variance - lambda) <= 0.05 * lambda);
  }
  SUBCASE("large rate goes through the additivity split") {
    SplitMix64 rng(22);
    const double lambda = 700.0;  // above the split threshold
    const int draws = 20000;
    double sum = 0.0, sum_squares = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double x = static_cast<double>(sample_poisson(rng, lambda));
      sum += x;
      sum_squares += x * x;
    }
    const double mean = sum / draws;
    const double variance = sum_squares / draws - mean * mean;
    CHECK(std::abs(mean - lambda) <= 3.0 * std::sqrt(lambda / draws));
    CHECK(std::abs(variance - lambda) <= 0.05 * lambda);
  }
  SUBCASE("edge rates") {
    SplitMix64 rng(23);
    CHECK(sample_poisson(rng, 0.0) == 0);
    CHECK_THROWS_AS(sample_poisson(rng, -1.0), validation_error);
  }
}
