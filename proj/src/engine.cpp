#include "cupgame/engine.hpp"

namespace cupgame {

template <class Num>
GameResult<Num> run_game(const GameConfig& cfg, FillerStrategy<Num>& filler, EmptierStrategy<Num>& emptier,
                         std::uint64_t rounds, std::span<Monitor<Num>* const> monitors,
                         const RunOptions<Num>& options) {
  cfg.validate();
  GameResult<Num> result;
  CupState<Num> state = options.initial_fills ? CupState<Num>(*options.initial_fills) : CupState<Num>(cfg.n);
  if (state.size() != cfg.n) throw ConfigError("initial fills do not match n");
  if (cfg.semantics == FillSemantics::standard) {
    for (const Num& f : state.fills()) {
      if (f < NumTraits<Num>::integer(0)) throw ConfigError("standard-fill game cannot start with negative fill");
    }
  }
  result.initial_state = state;
  result.touched.assign(cfg.n, false);
  result.max_backlog = state.backlog();

  bool want_intermediate = false;
  for (Monitor<Num>* m : monitors) {
    m->observe_start(state);
    want_intermediate = want_intermediate || m->wants_intermediate();
  }
  auto strict_failure = [&] {
    for (Monitor<Num>* m : monitors) {
      if (m->strict() && m->violated()) return true;
    }
    return false;
  };
  result.aborted = strict_failure();

  const EmptyMove* last_empty = nullptr;
  EmptyMove previous;
  std::optional<CupState<Num>> intermediate;
  for (std::uint64_t t = 0; t < rounds && !result.aborted; ++t) {
    std::optional<FillMove<Num>> fill = filler.play(RoundView<Num>{state, last_empty});
    if (!fill) {
      if (options.repeat == RepeatMode::stop) {
        result.filler_finished = true;
        break;
      }
      if (options.repeat == RepeatMode::episodes) {
        state = result.initial_state;
        last_empty = nullptr;
        result.touched.assign(cfg.n, false);
        ++result.episodes;
        for (Monitor<Num>* m : monitors) m->observe_start(state);
        result.aborted = strict_failure();
        if (result.aborted) break;
      }
      filler.restart();
      fill = filler.play(RoundView<Num>{state, last_empty});
      if (!fill) {
        fill.emplace();
        fill->p = 1;
      }
    }
    const std::vector<CupId> anchors = filler.anchors();
    const std::uint64_t round = t;

    apply_fill_in_place(cfg, state, *fill);
    if (want_intermediate) intermediate = state;
    EmptyMove empty = emptier.choose(state, budget_of(cfg, state));
    EmptyOutcome<Num> outcome = apply_empty_in_place(cfg, state, empty);

    bool neglect = false;
    for (CupId a : anchors) {
      if (!empty.contains(a)) {
        neglect = true;
        break;
      }
    }
    if (neglect) ++result.neglected_rounds;
    for (CupId c : empty.cups) result.touched[c] = true;

    Num backlog = state.backlog();
    if (backlog > result.max_backlog) result.max_backlog = backlog;
    if (options.record_trace) {
      RoundTrace<Num> rec;
      rec.round = round;
      rec.p = fill->p;
      rec.anti_backlog = state.anti_backlog();
      rec.fill_range = Num(backlog - rec.anti_backlog);
      rec.backlog = std::move(backlog);
      rec.mass = state.mass();
      rec.zeroed = outcome.zeroed;
      rec.neglect = neglect;
      result.trace.push_back(std::move(rec));
    }

    if (!monitors.empty()) {
      RoundRecord<Num> record{round, want_intermediate ? &*intermediate : nullptr, state, *fill, empty, outcome};
      for (Monitor<Num>* m : monitors) m->observe_round(record);
      result.aborted = strict_failure();
    }

    if (options.record_moves) {
      result.fill_log.push_back(*fill);
      result.empty_log.push_back(empty);
    }
    previous = std::move(empty);
    last_empty = &previous;
    ++result.rounds_played;
  }

  result.target = filler.target();
  for (Monitor<Num>* m : monitors) result.verdicts.push_back(m->verdict());
  result.final_state = std::move(state);
  return result;
}

template GameResult<Rational> run_game<Rational>(const GameConfig&, FillerStrategy<Rational>&,
                                                 EmptierStrategy<Rational>&, std::uint64_t,
                                                 std::span<Monitor<Rational>* const>, const RunOptions<Rational>&);
template GameResult<double> run_game<double>(const GameConfig&, FillerStrategy<double>&, EmptierStrategy<double>&,
                                             std::uint64_t, std::span<Monitor<double>* const>,
                                             const RunOptions<double>&);

}  // namespace cupgame
