#pragma once

// Core state machine of the variable-processor cup game.
//
// A round is: the filler picks p_t and pours at most one unit into each cup
// (at most p_t units in total), producing the intermediate state; the emptier
// then removes one unit from each of the cups it selects. In standard-fill
// mode a cup never drops below zero; in negative-fill mode emptying always
// subtracts exactly one.

#include "cupgame/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cupgame {

using CupId = std::size_t;

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidFill : public GameError {
 public:
  using GameError::GameError;
};
class InvalidEmpty : public GameError {
 public:
  using GameError::GameError;
};
class BudgetExceeded : public GameError {
 public:
  using GameError::GameError;
};
class DuplicateCup : public GameError {
 public:
  using GameError::GameError;
};
class EmptySet : public GameError {
 public:
  using GameError::GameError;
};
class PhaseError : public GameError {
 public:
  using GameError::GameError;
};
class ConfigError : public GameError {
 public:
  using GameError::GameError;
};
class NonTermination : public GameError {
 public:
  using GameError::GameError;
};

enum class FillSemantics { standard, negative };
enum class Arithmetic { exact, fast };
enum class Phase { start, intermediate };

std::string to_string(FillSemantics s);
std::string to_string(Arithmetic a);
FillSemantics parse_semantics(std::string_view s);
Arithmetic parse_arithmetic(std::string_view s);

struct GameConfig {
  std::size_t n = 0;
  FillSemantics semantics = FillSemantics::negative;
  std::uint64_t extra_budget = 0;
  std::optional<std::uint64_t> skip_budget;  // nullopt: unbounded (the regular game)
  std::uint64_t seed = 0;
  Arithmetic arithmetic = Arithmetic::exact;

  void validate() const;
};

template <class Num>
struct FillMove {
  std::vector<std::pair<CupId, Num>> per_cup;
  std::size_t p = 1;

  bool operator==(const FillMove&) const = default;
};

struct EmptyMove {
  std::vector<CupId> cups;  // ascending, distinct
  std::size_t skipped = 0;

  // Canonical move for a round with p_t processors: sorts the cups and
  // records max(0, p - |cups|) skips.
  static EmptyMove select(std::vector<CupId> cups, std::size_t p);

  bool contains(CupId c) const;
  bool operator==(const EmptyMove&) const = default;
};

template <class Num>
struct EmptyOutcome;

template <class Num>
class CupState {
 public:
  CupState() = default;
  explicit CupState(std::size_t n);
  explicit CupState(std::vector<Num> fills);

  std::size_t size() const { return fills_.size(); }
  const Num& fill(CupId c) const { return fills_.at(c); }
  const std::vector<Num>& fills() const { return fills_; }
  std::uint64_t round() const { return round_; }
  Phase phase() const { return phase_; }
  // p_t of the current round; meaningful in the intermediate phase.
  std::size_t processors() const { return processors_; }
  std::uint64_t extra_used() const { return extra_used_; }
  std::uint64_t skips_used() const { return skips_used_; }

  Num backlog() const;
  Num anti_backlog() const;
  Num fill_range() const;
  Num mass() const;
  Num mean_fill() const;
  Num mass(std::span<const CupId> cups) const;
  Num mean_fill(std::span<const CupId> cups) const;
  Num fill_range(std::span<const CupId> cups) const;

  // Cups ordered by fill descending, equal fills by ascending id.
  std::vector<CupId> ranking() const;
  // 1-based rank, as in "the rank-1 cup is the fullest".
  CupId rank(std::size_t r) const;
  std::vector<CupId> ranked_set(std::span<const std::size_t> ranks) const;
  std::vector<CupId> top(std::size_t k) const;
  // True when a is ahead of b in the rank order.
  bool ranks_before(CupId a, CupId b) const;

  bool operator==(const CupState&) const = default;

 private:
  template <class N>
  friend void apply_fill_in_place(const GameConfig&, CupState<N>&, const FillMove<N>&);
  template <class N>
  friend EmptyOutcome<N> apply_empty_in_place(const GameConfig&, CupState<N>&, const EmptyMove&);

  std::vector<Num> fills_;
  std::uint64_t round_ = 0;
  Phase phase_ = Phase::start;
  std::size_t processors_ = 0;
  std::uint64_t extra_used_ = 0;
  std::uint64_t skips_used_ = 0;
};

template <class Num>
struct EmptyOutcome {
  std::size_t zeroed = 0;   // cups emptied while holding less than one unit (standard mode)
  Num removed{};            // water actually taken out this round
  std::size_t extra = 0;
  std::size_t skipped = 0;
};

template <class Num>
struct EmptyResult {
  CupState<Num> state;
  EmptyOutcome<Num> outcome;
};

template <class Num>
struct StateMetrics {
  Num backlog;
  Num anti_backlog;
  Num mass;
  Num mean;
  Num fill_range;
  std::vector<CupId> ranking;
};

template <class Num>
struct RoundTrace {
  std::uint64_t round = 0;
  std::size_t p = 0;
  Num backlog{};
  Num anti_backlog{};
  Num mass{};
  Num fill_range{};
  std::size_t zeroed = 0;
  bool neglect = false;

  bool operator==(const RoundTrace&) const = default;
};

// Throws InvalidFill on amounts outside [0, 1], a total above p, or p outside [1, n].
template <class Num>
void validate_fill(const GameConfig& cfg, const FillMove<Num>& move);

template <class Num>
void apply_fill_in_place(const GameConfig& cfg, CupState<Num>& state, const FillMove<Num>& move);

template <class Num>
EmptyOutcome<Num> apply_empty_in_place(const GameConfig& cfg, CupState<Num>& state,
                                       const EmptyMove& move);

template <class Num>
CupState<Num> apply_fill(const GameConfig& cfg, CupState<Num> state, const FillMove<Num>& move) {
  apply_fill_in_place(cfg, state, move);
  return state;
}

template <class Num>
EmptyResult<Num> apply_empty(const GameConfig& cfg, CupState<Num> state, const EmptyMove& move) {
  EmptyOutcome<Num> outcome = apply_empty_in_place(cfg, state, move);
  return {std::move(state), std::move(outcome)};
}

template <class Num>
StateMetrics<Num> metrics(const CupState<Num>& state);

extern template class CupState<Rational>;
extern template class CupState<double>;

}  // namespace cupgame
