#pragma once

// Online verifiers attached to a game. A monitor only reads; the engine gives
// it const views of S_{t+1} and both moves of every round, plus I_t for
// monitors that ask for it (copying I_t costs a full state copy per round).

#include "cupgame/game.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cupgame {

template <class Num>
struct RoundRecord {
  std::uint64_t round;                 // t
  const CupState<Num>* intermediate;  // I_t, null unless wants_intermediate()
  const CupState<Num>& after;         // S_{t+1}
  const FillMove<Num>& fill;
  const EmptyMove& empty;
  const EmptyOutcome<Num>& outcome;
};

enum class VerdictStatus { holds, violated, triggered };
std::string to_string(VerdictStatus s);

// Values are exact "num/den" strings in exact mode, so a violation can be
// rechecked by hand.
struct Violation {
  std::uint64_t round = 0;
  std::size_t k = 0;
  std::string lhs;
  std::string rhs;
  std::string note;
};

struct InvariantVerdict {
  std::string monitor;
  VerdictStatus status = VerdictStatus::holds;
  bool strict = true;
  std::uint64_t checks = 0;
  std::optional<Violation> first;
};

template <class Num>
class Monitor {
 public:
  explicit Monitor(bool strict) : strict_(strict) {}
  virtual ~Monitor() = default;
  virtual void observe_start(const CupState<Num>& state) { (void)state; }
  virtual void observe_round(const RoundRecord<Num>& record) = 0;
  virtual InvariantVerdict verdict() const = 0;
  virtual bool wants_intermediate() const { return false; }
  bool strict() const { return strict_; }
  bool violated() const { return verdict().status == VerdictStatus::violated; }

 private:
  bool strict_;
};

// Mean of the k fullest cups <= 2n - k for every k, at every round start.
template <class Num>
InvariantVerdict check_greedy_invariants(const CupState<Num>& state);

template <class Num>
InvariantVerdict check_flatness(const CupState<Num>& state, const Rational& R);

// status is `triggered` once mass >= N^2.
template <class Num>
InvariantVerdict check_mass_escape(const CupState<Num>& state, std::size_t N);

// Replays a move log from `initial` and compares the running mass, derived
// from the moves alone, with the mass of each replayed state.
template <class Num>
InvariantVerdict check_conservation(const GameConfig& cfg, const CupState<Num>& initial,
                                    const std::vector<FillMove<Num>>& fills,
                                    const std::vector<EmptyMove>& empties);

template <class Num>
std::unique_ptr<Monitor<Num>> make_greedy_invariant_monitor(bool strict = true);
template <class Num>
std::unique_ptr<Monitor<Num>> make_flatness_monitor(const Rational& R, bool strict = true);
template <class Num>
std::unique_ptr<Monitor<Num>> make_mass_escape_monitor(std::size_t N);
template <class Num>
std::unique_ptr<Monitor<Num>> make_conservation_monitor(FillSemantics semantics, bool strict = true);
template <class Num>
std::unique_ptr<Monitor<Num>> make_delta_greedy_monitor(const Rational& delta, bool strict = true);

}  // namespace cupgame
