#pragma once

// Simple fillers used as workloads and baselines.

#include "cupgame/filler.hpp"

#include <cstdint>
#include <memory>

namespace cupgame {

// Oblivious: p uniform in [1, n]; every cup draws j/4 units with j uniform in
// {0, ..., 4}, then random quarter units are removed until the total is at
// most p. Water usually lands on more than p cups. Never finishes.
template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_uniform_random_filler(std::size_t n, std::uint64_t seed,
                                                                std::uint64_t trial);

// Adaptive p_t oscillation: even rounds p = n with one unit in every cup, odd
// rounds p = 1 with 1/(n-1) in every cup but the fullest. Never finishes.
template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_oscillating_filler(std::size_t n);

// Null strategy: p = max(1, floor(n/2)) spread evenly over all cups. Never finishes.
template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_uniform_filler(std::size_t n);

}  // namespace cupgame
