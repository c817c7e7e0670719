#pragma once

#include "cupgame/emptiers.hpp"
#include "cupgame/filler.hpp"
#include "cupgame/game.hpp"
#include "cupgame/monitors.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cupgame {

// What happens when the filler finishes before the round budget is spent.
//   stop       the game ends
//   restart    the filler starts a fresh application on the current state
//   episodes   the game itself restarts from S_0 and the filler with it;
//              monitors see each new S_0 and the round column keeps counting
// A filler that finishes again without moving idles for a round (p = 1, no
// water) so the budget is always consumed.
enum class RepeatMode { stop, restart, episodes };

template <class Num>
struct RunOptions {
  std::optional<std::vector<Num>> initial_fills;  // default: all zero
  RepeatMode repeat = RepeatMode::stop;
  bool record_moves = false;
  bool record_trace = true;
};

template <class Num>
struct GameResult {
  CupState<Num> initial_state;
  CupState<Num> final_state;
  std::vector<RoundTrace<Num>> trace;
  std::vector<InvariantVerdict> verdicts;
  std::vector<FillMove<Num>> fill_log;
  std::vector<EmptyMove> empty_log;
  std::uint64_t rounds_played = 0;
  bool filler_finished = false;
  std::uint64_t episodes = 1;
  bool aborted = false;  // a strict monitor reported a violation
  std::optional<CupId> target;
  Num max_backlog{};  // over every round-start state, S_0 included
  std::vector<bool> touched;  // cups emptied at least once
  std::uint64_t neglected_rounds = 0;
};

// Plays up to `rounds` rounds. Stops early when the filler finishes (in stop
// mode) or a strict monitor fails. With episodes, max_backlog covers the
// whole run while final_state, target and touched describe the last episode.
template <class Num>
GameResult<Num> run_game(const GameConfig& cfg, FillerStrategy<Num>& filler, EmptierStrategy<Num>& emptier,
                         std::uint64_t rounds, std::span<Monitor<Num>* const> monitors = {},
                         const RunOptions<Num>& options = {});

}  // namespace cupgame
