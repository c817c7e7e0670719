#pragma once

// Builds strategies, monitors and starting states from their spec strings.
//
//   fillers   trivalg  trivalg2  adaptive-linear  adaptive-poly:eps=
//             flatalg:rounds=  randalg:k=  rep:k=,delta=,M=,flatten=
//             oblivious-base:h=,H=,k=,delta=,nb=,M=,flatten=
//             oblivious-amplify:delta=,M=,flatten=,<base keys as base_*>
//             oblivious-poly:eps=,levels=,delta=,nb=,M=,flatten=,<base keys>
//             uniform-random  oscillating  uniform
//             any filler also takes repeat=1 (fresh application on the
//             current state whenever it finishes) or episodes=1 (fresh game)
//   emptiers  greedy  perturbed:delta=  uniform[:extra=]  lazy:skip=
//   monitors  greedy-invariant  flatness:R=  conservation  mass-escape:N=
//             delta-greedy:delta=
//   initial   zeros  list:a,b,...  linear:R  split:R  random:R

#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/filler.hpp"
#include "cupgame/monitors.hpp"
#include "cupgame/oblivious.hpp"
#include "cupgame/spec_string.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cupgame {

template <class Num>
struct BuiltFiller {
  std::unique_ptr<FillerStrategy<Num>> filler;
  RepeatMode repeat = RepeatMode::stop;
};

template <class Num>
BuiltFiller<Num> build_filler(const std::string& spec, std::size_t n, std::uint64_t seed, std::uint64_t trial);

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> build_emptier(const std::string& spec, std::uint64_t seed, std::uint64_t trial);

// Survey mode (strict = false) keeps playing after a violation.
template <class Num>
std::vector<std::unique_ptr<Monitor<Num>>> build_monitors(const std::string& spec, FillSemantics semantics,
                                                          bool strict);

// Shapes other than list put every fill in [0, R] with both ends attained
// (n >= 2). random:R draws the interior cups on a grid of step R/16 from the
// initial-state stream of (seed, trial).
template <class Num>
std::vector<Num> build_initial(const std::string& spec, std::size_t n, std::uint64_t seed, std::uint64_t trial);

// Oblivious base keys (h, H, k, delta, M, flatten, nb), each under `prefix`.
ObliviousBaseParams oblivious_base_params(const StrategySpec& spec, const std::string& prefix);

// Certified curve of a constructed chain up to max_n, or nullptr for fillers
// that carry none. adaptive-poly uses its guarantee-only chain, so very large
// max_n stays cheap.
GuaranteePtr filler_guarantee(const std::string& spec, std::size_t max_n);

}  // namespace cupgame
