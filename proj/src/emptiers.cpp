#include "cupgame/emptiers.hpp"

#include <algorithm>
#include <numeric>

namespace cupgame {

template <class Num>
EmptyMove greedy_select(const CupState<Num>& state, std::size_t p) {
  if (p > state.size()) throw InvalidEmpty("greedy asked for more cups than exist");
  return EmptyMove::select(state.top(p), p);
}

template <class Num>
EmptyMove perturbed_delta_greedy_select(const CupState<Num>& state, std::size_t p, const Rational& delta,
                                        Rng& rng) {
  if (delta < 0) throw ConfigError("perturbation width must be nonnegative");
  if (p > state.size()) throw InvalidEmpty("emptier asked for more cups than exist");
  if (delta == 0) return greedy_select(state, p);

  const std::size_t n = state.size();
  const Num scale = NumTraits<Num>::from(Rational(delta / Rational(4294967296UL)));
  std::vector<Num> key(n);
  for (CupId c = 0; c < n; ++c) {
    const long r = static_cast<long>(rng() >> 32);
    key[c] = state.fill(c) + scale * NumTraits<Num>::integer(r);
  }
  std::vector<CupId> order(n);
  std::iota(order.begin(), order.end(), CupId{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p), order.end(),
                    [&](CupId a, CupId b) {
                      if (key[a] != key[b]) return key[a] > key[b];
                      return a < b;
                    });
  order.resize(p);
  return EmptyMove::select(std::move(order), p);
}

template <class Num>
std::optional<DeltaGreedyWitness<Num>> check_delta_greedy(const CupState<Num>& state, const EmptyMove& move,
                                                          const Rational& delta) {
  std::optional<CupId> high;  // fullest unemptied
  std::optional<CupId> low;   // emptiest emptied
  for (CupId c = 0; c < state.size(); ++c) {
    if (move.contains(c)) {
      if (!low || state.fill(c) < state.fill(*low)) low = c;
    } else {
      if (!high || state.fill(c) > state.fill(*high)) high = c;
    }
  }
  if (!high || !low) return std::nullopt;
  const Num bound = state.fill(*low) + NumTraits<Num>::from(delta);
  if (!(state.fill(*high) > bound)) return std::nullopt;
  return DeltaGreedyWitness<Num>{state.round(), *high, *low, state.fill(*high), state.fill(*low)};
}

namespace {

std::vector<CupId> sample_distinct(std::size_t n, std::size_t p, Rng& rng) {
  std::vector<CupId> pool(n);
  std::iota(pool.begin(), pool.end(), CupId{0});
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(p);
  return pool;
}

}  // namespace

template <class Num>
EmptyMove uniform_random_valid(const CupState<Num>& state, std::size_t p, Rng& rng, const Rational& extra_prob,
                               std::uint64_t extra_left) {
  const std::size_t n = state.size();
  if (p > n) throw InvalidEmpty("emptier asked for more cups than exist");
  std::vector<CupId> cups = sample_distinct(n, p, rng);
  if (extra_prob > 0 && extra_left > 0 && p < n && rng.bernoulli(extra_prob)) {
    // One more distinct cup, uniform over those not yet chosen.
    std::vector<bool> taken(n, false);
    for (CupId c : cups) taken[c] = true;
    std::size_t pick = static_cast<std::size_t>(rng.below(n - p));
    for (CupId c = 0; c < n; ++c) {
      if (taken[c]) continue;
      if (pick-- == 0) {
        cups.push_back(c);
        break;
      }
    }
  }
  return EmptyMove::select(std::move(cups), p);
}

template <class Num>
EmptyMove lazy_skipper(const CupState<Num>& state, std::size_t p, const Rational& skip_prob, Rng& rng,
                       std::optional<std::uint64_t> skips_left) {
  std::vector<CupId> chosen = uniform_random_valid(state, p, rng).cups;
  if (skip_prob <= 0) return EmptyMove::select(std::move(chosen), p);
  std::vector<CupId> kept;
  std::uint64_t skipped = 0;
  for (CupId c : chosen) {
    const bool budget = !skips_left || skipped < *skips_left;
    if (budget && rng.bernoulli(skip_prob)) {
      ++skipped;
    } else {
      kept.push_back(c);
    }
  }
  return EmptyMove::select(std::move(kept), p);
}

namespace {

template <class Num>
class GreedyEmptier final : public EmptierStrategy<Num> {
 public:
  EmptyMove choose(const CupState<Num>& state, const BudgetView&) override {
    return greedy_select(state, state.processors());
  }
  std::string name() const override { return "greedy"; }
};

template <class Num>
class PerturbedEmptier final : public EmptierStrategy<Num> {
 public:
  PerturbedEmptier(const Rational& delta, std::uint64_t seed, std::uint64_t trial)
      : delta_(delta), rng_(seed, trial, Stream::emptier) {
    if (delta_ < 0) throw ConfigError("perturbation width must be nonnegative");
  }
  EmptyMove choose(const CupState<Num>& state, const BudgetView&) override {
    return perturbed_delta_greedy_select(state, state.processors(), delta_, rng_);
  }
  std::string name() const override { return "perturbed:delta=" + format_rational(delta_); }

 private:
  Rational delta_;
  Rng rng_;
};

template <class Num>
class UniformEmptier final : public EmptierStrategy<Num> {
 public:
  UniformEmptier(std::uint64_t seed, std::uint64_t trial, const Rational& extra_prob)
      : rng_(seed, trial, Stream::emptier), extra_prob_(extra_prob) {}
  EmptyMove choose(const CupState<Num>& state, const BudgetView& budget) override {
    return uniform_random_valid(state, state.processors(), rng_, extra_prob_, budget.extra_left);
  }
  std::string name() const override {
    return extra_prob_ > 0 ? "uniform:extra=" + format_rational(extra_prob_) : "uniform";
  }

 private:
  Rng rng_;
  Rational extra_prob_;
};

template <class Num>
class LazyEmptier final : public EmptierStrategy<Num> {
 public:
  LazyEmptier(const Rational& skip_prob, std::uint64_t seed, std::uint64_t trial)
      : skip_prob_(skip_prob), rng_(seed, trial, Stream::emptier) {}
  EmptyMove choose(const CupState<Num>& state, const BudgetView& budget) override {
    return lazy_skipper(state, state.processors(), skip_prob_, rng_, budget.skips_left);
  }
  std::string name() const override { return "lazy:skip=" + format_rational(skip_prob_); }

 private:
  Rational skip_prob_;
  Rng rng_;
};

}  // namespace

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_greedy_emptier() {
  return std::make_unique<GreedyEmptier<Num>>();
}

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_perturbed_emptier(const Rational& delta, std::uint64_t seed,
                                                             std::uint64_t trial) {
  return std::make_unique<PerturbedEmptier<Num>>(delta, seed, trial);
}

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_uniform_emptier(std::uint64_t seed, std::uint64_t trial,
                                                           const Rational& extra_prob) {
  return std::make_unique<UniformEmptier<Num>>(seed, trial, extra_prob);
}

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_lazy_emptier(const Rational& skip_prob, std::uint64_t seed,
                                                        std::uint64_t trial) {
  return std::make_unique<LazyEmptier<Num>>(skip_prob, seed, trial);
}

#define CUPGAME_EMPTIERS(Num)                                                                              \
  template EmptyMove greedy_select<Num>(const CupState<Num>&, std::size_t);                               \
  template EmptyMove perturbed_delta_greedy_select<Num>(const CupState<Num>&, std::size_t, const Rational&, \
                                                        Rng&);                                            \
  template std::optional<DeltaGreedyWitness<Num>> check_delta_greedy<Num>(const CupState<Num>&,           \
                                                                          const EmptyMove&,               \
                                                                          const Rational&);               \
  template EmptyMove uniform_random_valid<Num>(const CupState<Num>&, std::size_t, Rng&, const Rational&,  \
                                               std::uint64_t);                                            \
  template EmptyMove lazy_skipper<Num>(const CupState<Num>&, std::size_t, const Rational&, Rng&,          \
                                       std::optional<std::uint64_t>);                                     \
  template std::unique_ptr<EmptierStrategy<Num>> make_greedy_emptier<Num>();                              \
  template std::unique_ptr<EmptierStrategy<Num>> make_perturbed_emptier<Num>(const Rational&,             \
                                                                             std::uint64_t, std::uint64_t); \
  template std::unique_ptr<EmptierStrategy<Num>> make_uniform_emptier<Num>(std::uint64_t, std::uint64_t,  \
                                                                           const Rational&);              \
  template std::unique_ptr<EmptierStrategy<Num>> make_lazy_emptier<Num>(const Rational&, std::uint64_t,   \
                                                                        std::uint64_t);

CUPGAME_EMPTIERS(Rational)
CUPGAME_EMPTIERS(double)

}  // namespace cupgame
