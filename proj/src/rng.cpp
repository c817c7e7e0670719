#include "cupgame/rng.hpp"

#include "cupgame/game.hpp"

namespace cupgame {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t trial, Stream consumer)
    : key_(mix64(mix64(seed) ^ mix64(trial * 0xd1b54a32d192ed03ULL + 1)) ^
           mix64(static_cast<std::uint64_t>(consumer) + 0x632be59bd9b4e019ULL)) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::below with empty range");
  // Rejection sampling keeps the result exactly uniform on every platform.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    std::uint64_t x = (*this)();
    if (x < limit) return x % bound;
  }
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw ConfigError("Rng::between with empty range");
  if (lo == 0 && hi == max()) return (*this)();
  return lo + below(hi - lo + 1);
}

bool Rng::bernoulli(const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  if (p.get_den().fits_ulong_p()) {
    const std::uint64_t den = p.get_den().get_ui();
    const std::uint64_t num = p.get_num().get_ui();
    return below(den) < num;
  }
  const double u = static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  return u < p.get_d();
}

}  // namespace cupgame
