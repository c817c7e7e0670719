#include "cupgame/stats.hpp"

#include "cupgame/game.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>

namespace cupgame {

BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0 || successes > trials) throw ConfigError("clopper_pearson needs 0 <= successes <= trials >= 1");
  const double alpha = 1 - confidence;
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  BinomialInterval out;
  if (successes > 0) out.lower = boost::math::quantile(boost::math::beta_distribution<>(x, n - x + 1), alpha / 2);
  if (successes < trials) {
    out.upper = boost::math::quantile(boost::math::beta_distribution<>(x + 1, n - x), 1 - alpha / 2);
  }
  return out;
}

Rational quantile(std::vector<Rational> sample, const Rational& q) {
  if (sample.empty()) throw ConfigError("quantile of an empty sample");
  if (q < 0 || q > 1) throw ConfigError("quantile level outside [0, 1]");
  std::sort(sample.begin(), sample.end());
  const BigInt rank = ceil_div(Rational(q * Rational(sample.size())));
  const std::size_t index = rank <= 0 ? 0 : static_cast<std::size_t>(rank.get_ui()) - 1;
  return sample[index];
}

Rational median(std::vector<Rational> sample) {
  if (sample.empty()) throw ConfigError("median of an empty sample");
  std::sort(sample.begin(), sample.end());
  const std::size_t m = sample.size() / 2;
  if (sample.size() % 2 == 1) return sample[m];
  return Rational((sample[m - 1] + sample[m]) / 2);
}

}  // namespace cupgame
