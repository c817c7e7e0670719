#pragma once

// Oblivious fillers. Runs here never see a CupState: a run is a move
// generator driven only by its own private random stream. The cup sets they
// work on (anchors, the non-anchor remainder, the designated output) are the
// filler's own bookkeeping.

#include "cupgame/filler.hpp"
#include "cupgame/guarantee.hpp"
#include "cupgame/rng.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cupgame {

template <class Num>
class ObliviousRun {
 public:
  virtual ~ObliviousRun() = default;
  virtual std::optional<FillMove<Num>> next(Rng& rng) = 0;
  virtual std::optional<CupId> target() const { return std::nullopt; }
  virtual std::vector<CupId> anchors() const { return {}; }
};

// A run borrows its recipe, which must outlive it.
template <class Num>
class ObliviousRecipe {
 public:
  virtual ~ObliviousRecipe() = default;
  virtual std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const = 0;
  virtual GuaranteePtr guarantee() const { return nullptr; }
};

template <class Num>
using ObliviousRecipePtr = std::shared_ptr<const ObliviousRecipe<Num>>;

struct RepParams {
  Rational delta = Rational(1, 2);
  std::uint64_t M = 1;               // m0 is drawn uniformly from [1, M]
  std::uint64_t flatten_rounds = 0;  // flatalg rounds before every application
};

struct ObliviousBaseParams {
  Rational h = 2;
  std::optional<Rational> H;        // pump target; default h/8
  std::size_t k = 0;                // randalg size; 0 means ceil(e^(2h+1))
  std::optional<Rational> delta_b;  // default 1/(2k)
  std::uint64_t M = 32;
  std::uint64_t flatten_rounds = 256;
  std::size_t n_b = 0;  // smallest size credited with H; 0 means the smallest workable size
};

// Defaults filled in; throws ConfigError on inconsistent values.
ObliviousBaseParams resolve(const ObliviousBaseParams& params);

// Smallest cup count on which the base construction keeps at least k cups in
// B through every donation-process.
std::size_t oblivious_base_min_size(const ObliviousBaseParams& resolved);

// Each round: p = floor(|B|/2), p/|B| into every cup of B.
template <class Num>
ObliviousRecipePtr<Num> make_flatalg(std::uint64_t rounds);

// Active set = first k cups; each round 1/|active| into every active cup with
// p = 1, then one uniformly random active cup is evicted. k - 1 rounds; the
// survivor is the target.
template <class Num>
ObliviousRecipePtr<Num> make_randalg(std::size_t k);

// Donation game: ceil(delta n) donation-processes, each applying `inner` to B
// m0 times (each after flattening B) and donating the last target to A. Every
// anchor cup gets one unit per round. The run's anchors() is A.
template <class Num>
ObliviousRecipePtr<Num> make_rep(ObliviousRecipePtr<Num> inner, const RepParams& params);

// rep(randalg(k), delta_b), then ceil(5H) rounds of one unit into a fixed
// non-anchor cup, which becomes the target.
template <class Num>
ObliviousRecipePtr<Num> make_oblivious_base(const ObliviousBaseParams& params, std::size_t max_n);

// Step 1: rep(inner, delta, M, flatten). Step 2: flatten A, then inner on A.
// Sizes on the delegate branch of the guarantee run `inner` directly.
template <class Num>
ObliviousRecipePtr<Num> make_oblivious_amplified(ObliviousRecipePtr<Num> inner, const AmplifyParams& params);

GuaranteePtr oblivious_base_guarantee(const ObliviousBaseParams& params, std::size_t max_n);

struct ObliviousPolyPlan {
  Rational eps;
  Rational delta;
  std::size_t levels = 0;
  std::size_t n_b = 0;
  BigInt g0;
};

// delta: largest power of two with (1/delta)^eps >= 2(3 - eps), unless
// overridden. levels: smallest i with g_i >= n, unless overridden.
ObliviousPolyPlan plan_oblivious_poly(const Rational& eps, std::size_t n, std::size_t n_b,
                                      std::optional<Rational> delta_override,
                                      std::optional<std::size_t> levels_override);

template <class Num>
ObliviousRecipePtr<Num> make_oblivious_poly(const ObliviousPolyPlan& plan, const ObliviousBaseParams& base,
                                            const AmplifyParams& level_params, std::size_t max_n);

// Pure recurrence (no size threshold) for the oblivious recursion, checked
// against f_i(k) >= (k/n_b)^(1-eps) - 1 for k <= min(g_i, max_n).
struct ObliviousClaim {
  bool holds = true;
  std::size_t checked = 0;
  std::size_t level = 0;
  std::size_t k = 0;
};
ObliviousClaim check_oblivious_poly_claim(const ObliviousPolyPlan& plan, const ObliviousBaseParams& base,
                                          std::size_t max_n);

// Engine-facing wrapper. The random stream is (seed, trial, filler).
template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_oblivious_filler(ObliviousRecipePtr<Num> recipe, std::size_t n,
                                                           std::string name, std::uint64_t seed,
                                                           std::uint64_t trial);

}  // namespace cupgame
