#pragma once

// Emptier strategies: greedy, a randomized Delta-greedy-like family, and two
// stress emptiers (uniformly random cups, random skipping).

#include "cupgame/game.hpp"
#include "cupgame/rng.hpp"

#include <memory>
#include <optional>
#include <string>

namespace cupgame {

struct BudgetView {
  std::uint64_t extra_left = 0;
  std::optional<std::uint64_t> skips_left;  // nullopt: unbounded
};

template <class Num>
BudgetView budget_of(const GameConfig& cfg, const CupState<Num>& state) {
  BudgetView b;
  b.extra_left = cfg.extra_budget - state.extra_used();
  if (cfg.skip_budget) b.skips_left = *cfg.skip_budget - state.skips_used();
  return b;
}

template <class Num>
class EmptierStrategy {
 public:
  virtual ~EmptierStrategy() = default;
  // Called on the intermediate state; p is state.processors().
  virtual EmptyMove choose(const CupState<Num>& state, const BudgetView& budget) = 0;
  virtual std::string name() const = 0;
};

template <class Num>
struct DeltaGreedyWitness {
  std::uint64_t round = 0;
  CupId c1 = 0;  // left unemptied
  CupId c2 = 0;  // emptied
  Num fill1{};
  Num fill2{};
};

// The p fullest cups under the rank order.
template <class Num>
EmptyMove greedy_select(const CupState<Num>& state, std::size_t p);

// Every cup gets u_c = Delta * r / 2^32 with r uniform on 32 bits, so u_c is
// uniform on a grid in [0, Delta); the p cups with the largest fill + u_c are
// emptied. A cup more than Delta fuller than another always outranks it.
template <class Num>
EmptyMove perturbed_delta_greedy_select(const CupState<Num>& state, std::size_t p, const Rational& delta, Rng& rng);

// Witness pairs the fullest unemptied cup with the emptiest emptied one.
template <class Num>
std::optional<DeltaGreedyWitness<Num>> check_delta_greedy(const CupState<Num>& state, const EmptyMove& move,
                                                          const Rational& delta);

// p distinct cups, uniformly. With probability extra_prob (and budget left)
// one further random cup is emptied as an extra emptying.
template <class Num>
EmptyMove uniform_random_valid(const CupState<Num>& state, std::size_t p, Rng& rng,
                               const Rational& extra_prob = Rational(0), std::uint64_t extra_left = 0);

// uniform_random_valid, then each chosen emptying is dropped with
// probability skip_prob while the skip budget lasts.
template <class Num>
EmptyMove lazy_skipper(const CupState<Num>& state, std::size_t p, const Rational& skip_prob, Rng& rng,
                       std::optional<std::uint64_t> skips_left);

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_greedy_emptier();

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_perturbed_emptier(const Rational& delta, std::uint64_t seed,
                                                             std::uint64_t trial);

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_uniform_emptier(std::uint64_t seed, std::uint64_t trial,
                                                           const Rational& extra_prob = Rational(0));

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> make_lazy_emptier(const Rational& skip_prob, std::uint64_t seed,
                                                        std::uint64_t trial);

}  // namespace cupgame
