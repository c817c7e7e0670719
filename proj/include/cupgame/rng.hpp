#pragma once

// Counter-based random streams keyed by (master seed, trial, consumer).
//
// Each consumer (filler, emptier, initial-state generator) of each trial gets
// an independent stream, so swapping the emptier never perturbs the filler's
// draws and trials can run in any order.

#include "cupgame/numeric.hpp"

#include <cstdint>
#include <limits>

namespace cupgame {

enum class Stream : std::uint64_t {
  filler = 1,
  emptier = 2,
  initial = 3,
  test = 99,
};

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t trial = 0, Stream consumer = Stream::test);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

  // Exact when the denominator fits in 64 bits.
  bool bernoulli(const Rational& p);

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace cupgame
