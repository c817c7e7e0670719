#include "cupgame/basic_fillers.hpp"
#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/monitors.hpp"

#include <doctest.h>

using namespace cupgame;

namespace {

// Brute force over every subset: some k-subset has mean above 2n - k.
bool violates_by_subsets(const std::vector<Rational>& fills) {
  const std::size_t n = fills.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Rational sum = 0;
    long k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum += fills[i];
        ++k;
      }
    }
    if (sum > Rational(k * (2 * static_cast<long>(n) - k))) return true;
  }
  return false;
}

GameConfig config(std::size_t n, FillSemantics s = FillSemantics::standard) {
  GameConfig cfg;
  cfg.n = n;
  cfg.semantics = s;
  return cfg;
}

}  // namespace

TEST_CASE("prefix check agrees with a brute-force subset search") {
  Rng rng(31);
  int violations = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<Rational> fills;
    const long top = 8 * (2 * static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) fills.push_back(make_rational(static_cast<long>(rng.below(top)), 8));
    const bool expected = violates_by_subsets(fills);
    InvariantVerdict v = check_greedy_invariants(CupState<Rational>(fills));
    CHECK((v.status == VerdictStatus::violated) == expected);
    violations += expected;
  }
  // The sample has to exercise both outcomes.
  CHECK(violations > 100);
  CHECK(violations < 2900);
}

TEST_CASE("greedy-invariant violations report k and exact values") {
  InvariantVerdict v = check_greedy_invariants(CupState<Rational>(std::vector<Rational>{Rational(11, 2), 1, 0}));
  REQUIRE(v.status == VerdictStatus::violated);
  REQUIRE(v.first.has_value());
  CHECK(v.first->k == 1);
  CHECK(v.first->lhs == "11/2");
  CHECK(v.first->rhs == "5");
  CHECK(check_greedy_invariants(CupState<Rational>(std::vector<Rational>{5, 3, 0})).status == VerdictStatus::holds);
  // Every single cup and pair is fine; the top three average 6 > 2n - 3 = 5.
  v = check_greedy_invariants(CupState<Rational>(std::vector<Rational>{6, 6, 6, 0}));
  REQUIRE(v.first.has_value());
  CHECK(v.first->k == 3);
}

TEST_CASE("flatness and mass escape") {
  CupState<Rational> s(std::vector<Rational>{-2, 1, 3});
  CHECK(check_flatness(s, Rational(5)).status == VerdictStatus::holds);
  InvariantVerdict v = check_flatness(s, Rational(9, 2));
  CHECK(v.status == VerdictStatus::violated);
  CHECK(v.first->lhs == "5/1");
  CHECK(check_mass_escape(CupState<Rational>(std::vector<Rational>{8, 8}), 4).status == VerdictStatus::triggered);
  CHECK(check_mass_escape(CupState<Rational>(std::vector<Rational>{8, 7}), 4).status == VerdictStatus::holds);
  CHECK_FALSE(check_mass_escape(CupState<Rational>(std::vector<Rational>{8, 8}), 4).strict);
}

TEST_CASE("conservation holds on replayed logs in both fill modes") {
  for (FillSemantics sem : {FillSemantics::standard, FillSemantics::negative}) {
    GameConfig cfg = config(6, sem);
    auto filler = make_uniform_random_filler<Rational>(6, 3, 0);
    auto emptier = make_lazy_emptier<Rational>(Rational(1, 3), 3, 0);
    RunOptions<Rational> opt;
    opt.record_moves = true;
    auto r = run_game(cfg, *filler, *emptier, 500, {}, opt);
    InvariantVerdict v = check_conservation(cfg, r.initial_state, r.fill_log, r.empty_log);
    CHECK(v.status == VerdictStatus::holds);
    CHECK(v.checks == 500);
  }
}

TEST_CASE("the conservation monitor flags a state that lost water") {
  auto m = make_conservation_monitor<Rational>(FillSemantics::standard);
  CupState<Rational> before(std::vector<Rational>{Rational(1, 2), 2});
  m->observe_start(before);
  FillMove<Rational> fill{{{0, Rational(1, 2)}}, 1};
  const GameConfig cfg = config(2);
  CupState<Rational> mid = apply_fill(cfg, before, fill);
  EmptyMove empty = EmptyMove::select({1}, 1);
  auto honest = apply_empty(cfg, mid, empty);
  m->observe_round(RoundRecord<Rational>{0, &mid, honest.state, fill, empty, honest.outcome});
  CHECK(m->verdict().status == VerdictStatus::holds);
  // A state claiming cup 0 is empty although nobody emptied it.
  CupState<Rational> forged(std::vector<Rational>{0, 1});
  m->observe_round(RoundRecord<Rational>{1, &mid, forged, fill, empty, honest.outcome});
  CHECK(m->verdict().status == VerdictStatus::violated);
  CHECK(m->verdict().first->round == 1);
}

TEST_CASE("the delta-greedy monitor judges the intermediate state") {
  auto m = make_delta_greedy_monitor<Rational>(Rational(1, 2));
  const GameConfig cfg = config(3);
  CupState<Rational> mid = apply_fill(cfg, CupState<Rational>(std::vector<Rational>{1, 2, Rational(9, 4)}),
                                      FillMove<Rational>{{}, 1});
  EmptyMove ok = EmptyMove::select({1}, 1);
  auto r = apply_empty(cfg, mid, ok);
  m->observe_round(RoundRecord<Rational>{0, &mid, r.state, FillMove<Rational>{{}, 1}, ok, r.outcome});
  CHECK(m->verdict().status == VerdictStatus::holds);
  EmptyMove bad = EmptyMove::select({0}, 1);
  r = apply_empty(cfg, mid, bad);
  m->observe_round(RoundRecord<Rational>{1, &mid, r.state, FillMove<Rational>{{}, 1}, bad, r.outcome});
  CHECK(m->verdict().status == VerdictStatus::violated);
  CHECK(m->verdict().first->lhs == "5/4");
}

TEST_CASE("a strict monitor stops the game at the first violation") {
  const GameConfig cfg = config(2);
  auto filler = make_uniform_filler<Rational>(2);
  auto emptier = make_greedy_emptier<Rational>();
  auto monitor = make_greedy_invariant_monitor<Rational>(true);
  Monitor<Rational>* ms[] = {monitor.get()};
  RunOptions<Rational> opt;
  opt.initial_fills = std::vector<Rational>{4, 0};
  auto r = run_game(cfg, *filler, *emptier, 50, std::span<Monitor<Rational>* const>(ms), opt);
  CHECK(r.aborted);
  CHECK(r.rounds_played == 0);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].status == VerdictStatus::violated);

  auto survey = make_greedy_invariant_monitor<Rational>(false);
  Monitor<Rational>* ss[] = {survey.get()};
  auto s = run_game(cfg, *filler, *emptier, 50, std::span<Monitor<Rational>* const>(ss), opt);
  CHECK_FALSE(s.aborted);
  CHECK(s.rounds_played == 50);
}

TEST_CASE("monitors are pure observers") {
  const GameConfig cfg = config(7);
  auto play = [&](bool with_monitors) {
    auto filler = make_uniform_random_filler<Rational>(7, 12, 0);
    auto emptier = make_perturbed_emptier<Rational>(Rational(1, 2), 12, 0);
    std::vector<std::unique_ptr<Monitor<Rational>>> owned;
    if (with_monitors) {
      owned.push_back(make_greedy_invariant_monitor<Rational>(false));
      owned.push_back(make_conservation_monitor<Rational>(FillSemantics::standard, false));
      owned.push_back(make_delta_greedy_monitor<Rational>(Rational(1, 2), false));
      owned.push_back(make_flatness_monitor<Rational>(Rational(1), false));
      owned.push_back(make_mass_escape_monitor<Rational>(2));
    }
    std::vector<Monitor<Rational>*> ptrs;
    for (auto& m : owned) ptrs.push_back(m.get());
    return run_game(cfg, *filler, *emptier, 400, std::span<Monitor<Rational>* const>(ptrs));
  };
  auto bare = play(false);
  auto watched = play(true);
  CHECK(bare.trace == watched.trace);
  CHECK(bare.final_state == watched.final_state);
  REQUIRE(watched.verdicts.size() == 5);
  CHECK(watched.verdicts[0].status == VerdictStatus::holds);
  CHECK(watched.verdicts[1].status == VerdictStatus::holds);
  CHECK(watched.verdicts[2].status == VerdictStatus::holds);
  CHECK(watched.verdicts[0].checks == 401);
}
