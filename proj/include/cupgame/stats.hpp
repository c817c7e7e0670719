#pragma once

#include "cupgame/numeric.hpp"

#include <cstdint>
#include <vector>

namespace cupgame {

struct BinomialInterval {
  double lower = 0;
  double upper = 1;
};

// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence = 0.99);

// Nearest-rank quantile of a nonempty sample: the smallest value with at
// least a fraction q of the sample at or below it. Stays exact on rationals.
Rational quantile(std::vector<Rational> sample, const Rational& q);

// Mean of the two middle values for even sizes.
Rational median(std::vector<Rational> sample);

}  // namespace cupgame
