#include "cupgame/adaptive.hpp"
#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"

#include <doctest.h>

#include <map>

using namespace cupgame;

namespace {

// Independent evaluator of the adaptive chain curves. Sizes are computed
// with plain integer arithmetic on the delta fraction, memoized per level.
struct Oracle {
  std::vector<Rational> deltas;  // innermost level first
  std::map<std::pair<std::size_t, std::size_t>, std::pair<Rational, BigInt>> memo;

  std::pair<Rational, BigInt> at(std::size_t level, std::size_t n) {
    if (level == 0) return n >= 2 ? std::pair{Rational(1, 2), BigInt(1)} : std::pair{Rational(0), BigInt(0)};
    auto key = std::pair{level, n};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Rational& d = deltas[level - 1];
    const unsigned long num = d.get_num().get_ui(), den = d.get_den().get_ui();
    const std::size_t nA = (num * n + den - 1) / den;
    const std::size_t nB = n - nA;
    auto result = at(level - 1, n);
    if (nB > 0) {
      auto [fB, TB] = at(level - 1, nB);
      auto [fA, TA] = at(level - 1, nA);
      Rational share(nB, n);
      share.canonicalize();
      const Rational cand = share * fB + fA;
      if (cand > result.first) result = {cand, BigInt(static_cast<unsigned long>(n * nA)) * TB + TA};
    }
    memo[key] = result;
    return result;
  }
};

Oracle linear_oracle(std::size_t n) {
  Oracle o;
  o.deltas = {Rational(1, 2), Rational(1, 2)};
  for (std::size_t i = 1; i < n / 8; ++i) o.deltas.push_back(make_rational(1, static_cast<long>(i + 1)));
  return o;
}

struct Outcome {
  GameResult<Rational> game;
  Rational gain;
};

Outcome play(AdaptiveRecipePtr<Rational> recipe, std::size_t n, EmptierStrategy<Rational>& emptier,
             std::uint64_t rounds, FillSemantics semantics = FillSemantics::negative) {
  GameConfig cfg;
  cfg.n = n;
  cfg.semantics = semantics;
  auto filler = make_adaptive_filler(recipe, n, "chain");
  Outcome out{run_game(cfg, *filler, emptier, rounds), 0};
  REQUIRE(out.game.target.has_value());
  out.gain = out.game.final_state.fill(*out.game.target) - out.game.initial_state.mean_fill();
  return out;
}

}  // namespace

TEST_CASE("trivalg: one half on two or more cups, in one round") {
  auto g = StrategyGuarantee::trivalg(5);
  CHECK(g->f(1) == 0);
  CHECK(g->T(1) == 0);
  for (std::size_t n = 2; n <= 5; ++n) {
    CHECK(g->f(n) == Rational(1, 2));
    CHECK(g->T(n) == 1);
  }
}

TEST_CASE("desk-scale guarantee values") {
  CHECK(make_trivalg2<Rational>(8)->guarantee()->f(8) == Rational(9, 8));
  CHECK(make_trivalg2<Rational>(8)->guarantee()->T(8) == 297);
  auto g16 = make_adaptive_linear<Rational>(16)->guarantee();
  CHECK(g16->f(16) == Rational(27, 16));
  CHECK(g16->T(16) == 38313);
  auto g24 = make_adaptive_linear<Rational>(24)->guarantee();
  CHECK(g24->f(24) == Rational(9, 4));
  CHECK(g24->T(24) == 7356393);
  CHECK(g24->depth() == 4);
}

TEST_CASE("chain tables agree with an independent recurrence evaluator") {
  for (std::size_t n : {8u, 16u, 24u, 40u}) {
    auto g = make_adaptive_linear<Rational>(n)->guarantee();
    Oracle o = linear_oracle(n);
    for (std::size_t k = 1; k <= n; ++k) {
      auto [f, T] = o.at(o.deltas.size(), k);
      CHECK(g->f(k) == f);
      CHECK(g->T(k) == T);
    }
  }
  // Odd sizes where delta n is fractional use the n_B / n share.
  Oracle thirds;
  thirds.deltas = {Rational(1, 3), Rational(1, 3)};
  auto g = StrategyGuarantee::adaptive_amplified(StrategyGuarantee::adaptive_amplified(StrategyGuarantee::trivalg(31),
                                                                                     Rational(1, 3)),
                                                 Rational(1, 3));
  for (std::size_t k = 1; k <= 31; ++k) CHECK(g->f(k) == thirds.at(2, k).first);
}

TEST_CASE("the anchor share is n_B / n") {
  CHECK(adaptive_keep(8, Rational(1, 2)) == Rational(1, 2));
  CHECK(adaptive_keep(5, Rational(1, 2)) == Rational(2, 5));
  CHECK(adaptive_keep(10, Rational(1, 3)) == Rational(3, 5));
}

TEST_CASE("recursion plan for the power-law driver") {
  PolyPlan p = plan_adaptive_poly(Rational(1, 4), 64);
  CHECK(p.delta == Rational(1, 256));
  CHECK(p.g0 == 4096);
  CHECK(p.levels == 1063);
  CHECK(power_of_two_delta(Rational(1, 2), Rational(2)) == Rational(1, 4));
  CHECK(levels_to_cover(Rational(1, 2), 8) == 3);
  CHECK(levels_to_cover(Rational(1, 2), 9) == 4);
  auto g = g_sequence(BigInt(4096), Rational(1, 256), 3);
  REQUIRE(g.size() == 4);
  CHECK(g[1] == 4112);
  CHECK(g[3] == 4144);
  CHECK_THROWS_AS(plan_adaptive_poly(Rational(1, 2), 8), ConfigError);
}

TEST_CASE("power-law claim holds over the first levels") {
  PolyPlan p = plan_adaptive_poly(Rational(1, 4), 4096);
  ClaimCheck c = check_adaptive_poly_claim(p, 3);
  CHECK(c.holds);
  CHECK(c.checked > 4096);
  CHECK(adaptive_poly_claim_constant_pow(p) == Rational(81, 16) / pow(Rational(4096), 3));
}

TEST_CASE("chains reach their certified backlog within T(n) rounds") {
  struct Case {
    AdaptiveRecipePtr<Rational> recipe;
    std::size_t n;
  };
  const Case cases[] = {{make_trivalg<Rational>(2), 2}, {make_trivalg2<Rational>(8), 8},
                        {make_trivalg2<Rational>(11), 11}, {make_adaptive_linear<Rational>(16), 16}};
  for (const Case& c : cases) {
    const Rational f = c.recipe->guarantee()->f(c.n);
    const BigInt T = c.recipe->guarantee()->T(c.n);
    std::vector<std::unique_ptr<EmptierStrategy<Rational>>> emptiers;
    emptiers.push_back(make_greedy_emptier<Rational>());
    emptiers.push_back(make_perturbed_emptier<Rational>(Rational(1, 2), 3, 0));
    emptiers.push_back(make_uniform_emptier<Rational>(3, 0));
    emptiers.push_back(make_lazy_emptier<Rational>(Rational(1, 4), 3, 0));
    for (auto& e : emptiers) {
      CAPTURE(c.n);
      CAPTURE(e->name());
      Outcome o = play(c.recipe, c.n, *e, T.get_ui() + 1);
      CHECK(o.game.filler_finished);
      CHECK(BigInt(static_cast<unsigned long>(o.game.rounds_played)) <= T);
      CHECK(o.gain >= f);
    }
  }
}

TEST_CASE("the zero level is the mean of the starting state") {
  std::vector<Rational> start{5, -3, 2, 0, 1, 1, -4, 6};
  GameConfig cfg;
  cfg.n = 8;
  auto filler = make_adaptive_filler(make_trivalg2<Rational>(8), 8, "trivalg2");
  auto greedy = make_greedy_emptier<Rational>();
  RunOptions<Rational> opt;
  opt.initial_fills = start;
  auto r = run_game(cfg, *filler, *greedy, 1000, {}, opt);
  REQUIRE(r.target.has_value());
  CHECK(r.final_state.fill(*r.target) - Rational(1) >= Rational(9, 8));
}

TEST_CASE("every neglected round raises the anchor mass by at least one") {
  const std::size_t n = 16;
  GameConfig cfg;
  cfg.n = n;
  auto filler = make_adaptive_filler(make_adaptive_linear<Rational>(n), n, "adaptive-linear");
  auto emptier = make_uniform_emptier<Rational>(8, 0);
  CupState<Rational> s(n);
  const EmptyMove* last = nullptr;
  EmptyMove previous;
  std::size_t neglects = 0;
  for (int t = 0; t < 20000; ++t) {
    auto move = filler->play(RoundView<Rational>{s, last});
    if (!move) break;
    const std::vector<CupId> anchors = filler->anchors();
    const Rational before = anchors.empty() ? Rational(0) : s.mass(anchors);
    s = apply_fill(cfg, s, *move);
    previous = emptier->choose(s, budget_of(cfg, s));
    s = apply_empty(cfg, s, previous).state;
    last = &previous;
    bool neglected = false;
    if (anchors.empty()) continue;
    for (CupId a : anchors) neglected = neglected || !previous.contains(a);
    if (neglected) {
      ++neglects;
      CHECK(s.mass(anchors) >= before + 1);
    }
  }
  CHECK(neglects > 0);
}

TEST_CASE("fast arithmetic follows the exact game on trivalg2") {
  GameConfig cfg;
  cfg.n = 8;
  auto exact = make_adaptive_filler(make_trivalg2<Rational>(8), 8, "trivalg2");
  auto fast = make_adaptive_filler(make_trivalg2<double>(8), 8, "trivalg2");
  auto ge = make_greedy_emptier<Rational>();
  auto gf = make_greedy_emptier<double>();
  auto re = run_game(cfg, *exact, *ge, 400);
  cfg.arithmetic = Arithmetic::fast;
  auto rf = run_game(cfg, *fast, *gf, 400);
  CHECK(re.rounds_played == rf.rounds_played);
  CHECK(re.target == rf.target);
  CHECK(rf.final_state.fill(*rf.target) == doctest::Approx(re.final_state.fill(*re.target).get_d()));
}
