#pragma once

// Adaptive fillers: trivalg, adaptive amplification and the two recursion
// drivers built from it.
//
// A recipe is a reusable description of a strategy; start() binds it to a
// set of cups and returns a run, which yields one move per round until it
// finishes and names its target cup. Runs nest: an amplification run drives
// an inner run on a subset of the cups and adds its own anchor units to every
// move the inner run produces. A run borrows its recipe, which must outlive it.

#include "cupgame/filler.hpp"
#include "cupgame/guarantee.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cupgame {

template <class Num>
class AdaptiveRun {
 public:
  virtual ~AdaptiveRun() = default;
  virtual std::optional<FillMove<Num>> next(const CupState<Num>& state) = 0;
  // The emptier's reply to the last move this run produced.
  virtual void observe(const EmptyMove& move) { (void)move; }
  virtual CupId target() const = 0;
  virtual std::vector<CupId> anchors() const { return {}; }
};

template <class Num>
class AdaptiveRecipe {
 public:
  virtual ~AdaptiveRecipe() = default;
  virtual const GuaranteePtr& guarantee() const = 0;
  // `cups` must be nonempty; the run's zero level is their current mean.
  virtual std::unique_ptr<AdaptiveRun<Num>> start(std::vector<CupId> cups,
                                                  const CupState<Num>& state) const = 0;
};

template <class Num>
using AdaptiveRecipePtr = std::shared_ptr<const AdaptiveRecipe<Num>>;

template <class Num>
AdaptiveRecipePtr<Num> make_trivalg(std::size_t max_n);

template <class Num>
AdaptiveRecipePtr<Num> make_amplified(AdaptiveRecipePtr<Num> inner, const Rational& delta);

// amplify(amplify(trivalg, 1/2), 1/2)
template <class Num>
AdaptiveRecipePtr<Num> make_trivalg2(std::size_t max_n);

// Base trivalg2, then amplify with delta = 1/(i+1) for i = 1..floor(n/8)-1.
template <class Num>
AdaptiveRecipePtr<Num> make_adaptive_linear(std::size_t n);

struct PolyPlan {
  Rational eps;
  Rational delta;
  std::size_t levels = 0;
  BigInt g0;
};

// Largest delta = 2^-j (j >= 1) with (1/delta)^eps >= bound, compared exactly.
Rational power_of_two_delta(const Rational& eps, const Rational& bound);

// Smallest i with (1 - delta)^i <= 1/n.
std::size_t levels_to_cover(const Rational& delta, std::size_t n);

// g_0 given, g_i = floor(g_{i-1} / (1 - delta)).
std::vector<BigInt> g_sequence(const BigInt& g0, const Rational& delta, std::size_t levels);

PolyPlan plan_adaptive_poly(const Rational& eps, std::size_t n);

template <class Num>
AdaptiveRecipePtr<Num> make_adaptive_poly(const PolyPlan& plan, std::size_t max_n);

// Guarantee-only chain (no strategy objects), for certification at sizes far
// beyond anything simulated.
GuaranteePtr adaptive_poly_guarantee(const PolyPlan& plan, std::size_t levels, std::size_t max_n);

struct ClaimCheck {
  bool holds = true;
  std::size_t checked = 0;
  // First failing (level, k), if any.
  std::size_t level = 0;
  std::size_t k = 0;
};

// f_i(k) >= c k^(1-eps) - 1 for all k <= g_i, i <= levels, with c fitted so
// that c g_0^(1-eps) - 1 = 1/2. Exact: for eps = a/b the test is
// (f + 1)^b >= c^b k^(b-a).
ClaimCheck check_adaptive_poly_claim(const PolyPlan& plan, std::size_t levels);

// c^b for the claim above, exposed for reporting.
Rational adaptive_poly_claim_constant_pow(const PolyPlan& plan);

// Wraps a recipe as an engine-facing filler on all n cups. Playing more than
// 2 T(n) rounds raises NonTermination.
template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_adaptive_filler(AdaptiveRecipePtr<Num> recipe, std::size_t n,
                                                          std::string name);

}  // namespace cupgame
