#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/oblivious.hpp"
#include "cupgame/registry.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace cupgame;

namespace {

std::vector<CupId> iota_cups(std::size_t n) {
  std::vector<CupId> v(n);
  std::iota(v.begin(), v.end(), CupId{0});
  return v;
}

Rational total(const FillMove<Rational>& m) {
  Rational s = 0;
  for (const auto& [c, a] : m.per_cup) s += a;
  return s;
}

// Fill log of a full game against the given emptier.
std::vector<FillMove<Rational>> fill_stream(const std::string& filler_spec, std::size_t n,
                                            EmptierStrategy<Rational>& emptier, std::uint64_t rounds) {
  GameConfig cfg;
  cfg.n = n;
  BuiltFiller<Rational> f = build_filler<Rational>(filler_spec, n, 42, 0);
  RunOptions<Rational> opt;
  opt.record_moves = true;
  opt.record_trace = false;
  opt.repeat = f.repeat;
  return run_game(cfg, *f.filler, emptier, rounds, {}, opt).fill_log;
}

}  // namespace

TEST_CASE("flatalg pours p = floor(m/2) spread evenly for the requested rounds") {
  auto run = make_flatalg<Rational>(5)->start({2, 4, 6, 7, 9});
  Rng rng(1);
  int rounds = 0;
  while (auto m = run->next(rng)) {
    ++rounds;
    CHECK(m->p == 2);
    CHECK(m->per_cup.size() == 5);
    for (const auto& [c, a] : m->per_cup) CHECK(a == Rational(2, 5));
    CHECK(total(*m) == 2);
  }
  CHECK(rounds == 5);
  CHECK_FALSE(make_flatalg<Rational>(5)->start({3})->next(rng).has_value());
}

TEST_CASE("randalg plays k - 1 unit rounds and its survivor is uniform") {
  for (std::size_t k : {2u, 3u, 4u}) {
    std::vector<int> survived(k, 0);
    Rng rng(k);
    for (int trial = 0; trial < 3000; ++trial) {
      auto run = make_randalg<Rational>(k)->start(iota_cups(k + 3));
      std::size_t rounds = 0;
      std::size_t active = k;
      while (auto m = run->next(rng)) {
        ++rounds;
        CHECK(m->p == 1);
        CHECK(m->per_cup.size() == active);
        CHECK(total(*m) == 1);
        --active;
      }
      CHECK(rounds == k - 1);
      REQUIRE(run->target().has_value());
      REQUIRE(*run->target() < k);
      ++survived[*run->target()];
    }
    for (int s : survived) CHECK(std::abs(s - 3000 / static_cast<int>(k)) < 150);
  }
  Rng rng(1);
  CHECK_THROWS_AS(make_randalg<Rational>(5)->start(iota_cups(4)), ConfigError);
}

TEST_CASE("rep donates ceil(delta m) cups and pours one unit into each anchor every round") {
  RepParams params{Rational(1, 4), 3, 2};
  // Runs borrow their recipe, which must outlive them.
  auto recipe = make_rep<Rational>(make_randalg<Rational>(3), params);
  auto run = recipe->start(iota_cups(10));
  Rng rng(5);
  std::size_t rounds = 0;
  while (auto m = run->next(rng)) {
    ++rounds;
    const std::vector<CupId> anchors = run->anchors();
    std::set<CupId> poured;
    for (const auto& [c, a] : m->per_cup) {
      if (std::find(anchors.begin(), anchors.end(), c) != anchors.end()) {
        CHECK(a == 1);
        poured.insert(c);
      }
    }
    CHECK(poured.size() == anchors.size());
    CHECK(total(*m) <= Rational(static_cast<long>(m->p)));
  }
  CHECK(run->anchors().size() == anchor_size(10, Rational(1, 4)));
  CHECK(run->anchors().size() == 3);
  // Each donation takes between 1 and M applications, each preceded by flattening.
  CHECK(rounds >= 3 * (2 + 2));
  CHECK(rounds <= 3 * 3 * (2 + 2));
}

TEST_CASE("base parameters resolve to their defaults") {
  ObliviousBaseParams p = resolve(ObliviousBaseParams{});
  CHECK(*p.H == Rational(1, 4));
  CHECK(p.k == 149);
  CHECK(*p.delta_b == Rational(1, 298));
  ObliviousBaseParams small;
  small.k = 3;
  small.M = 2;
  small.flatten_rounds = 8;
  ObliviousBaseParams r = resolve(small);
  CHECK(*r.delta_b == Rational(1, 6));
  const std::size_t m = oblivious_base_min_size(r);
  CHECK(m - anchor_size(m, *r.delta_b) + 1 >= 3);
  CHECK((m - 1) - anchor_size(m - 1, *r.delta_b) + 1 < 3);
  ObliviousBaseParams bad;
  bad.h = 0;
  CHECK_THROWS_AS(resolve(bad), ConfigError);
}

TEST_CASE("oblivious amplification agrees with a direct evaluation of its recurrence") {
  std::vector<Rational> f(41, Rational(0));
  std::vector<BigInt> T(41, BigInt(0));
  for (std::size_t m = 3; m <= 40; ++m) {
    f[m] = Rational(1, 4);
    T[m] = static_cast<unsigned long>(m);
  }
  auto base = StrategyGuarantee::table("test-base", f, T, true);
  const AmplifyParams ap{Rational(1, 4), 3, 5, false};
  auto g = StrategyGuarantee::oblivious_amplified(base, ap);
  for (std::size_t n = 1; n <= 40; ++n) {
    const std::size_t nA = (n + 3) / 4;
    const std::size_t nB = n - nA;
    Rational want = f[n];
    BigInt want_T = T[n];
    const Rational cand = Rational(9, 16) * f[nB] + f[nA];
    if (nB > 0 && cand > want) {
      want = cand;
      want_T = 5 + T[nA];
      for (std::size_t i = 0; i < nA; ++i) want_T += 3 * (5 + T[n - i]);
    }
    CAPTURE(n);
    CHECK(g->f(n) == want);
    CHECK(g->T(n) == want_T);
  }
  // With the size threshold on, sizes below ceil(4/delta^2) = 64 delegate.
  auto gated = StrategyGuarantee::oblivious_amplified(base, AmplifyParams{Rational(1, 4), 3, 5, true});
  for (std::size_t n = 1; n <= 40; ++n) CHECK(gated->branch(n) == Branch::delegate);
}

TEST_CASE("registry refuses an amplification level that can only delegate") {
  CHECK_THROWS_AS(build_filler<Rational>("oblivious-amplify:delta=1/4,base_k=3", 32, 1, 0), ConfigError);
  CHECK_NOTHROW(build_filler<Rational>("oblivious-amplify:delta=1/4,base_k=3", 64, 1, 0));
  CHECK_NOTHROW(build_filler<Rational>("oblivious-amplify:delta=1/4,base_k=3,threshold=0", 32, 1, 0));
}

TEST_CASE("oblivious recursion plan") {
  ObliviousPolyPlan p = plan_oblivious_poly(Rational(1, 4), 1 << 20, 8, std::nullopt, std::nullopt);
  CHECK(p.delta == Rational(1, 1024));
  CHECK(p.g0 == 8 * 16384);
  CHECK(p.levels > 0);
  ObliviousPolyPlan q = plan_oblivious_poly(Rational(1, 4), 64, 8, Rational(1, 2), std::size_t{2});
  CHECK(q.delta == Rational(1, 2));
  CHECK(q.levels == 2);
  CHECK(q.g0 == 256);
}

TEST_CASE("fill streams do not depend on the emptier") {
  const std::size_t n = 12;
  const char* specs[] = {"flatalg:rounds=20", "randalg:k=4,repeat=1", "rep:k=3,delta=1/4,M=2,flatten=3",
                         "uniform-random", "oblivious-base:h=1/2,k=3,M=2,flatten=4"};
  for (const char* spec : specs) {
    CAPTURE(spec);
    auto greedy = make_greedy_emptier<Rational>();
    auto perturbed = make_perturbed_emptier<Rational>(Rational(1, 2), 7, 0);
    auto lazy = make_lazy_emptier<Rational>(Rational(1, 3), 7, 0);
    auto a = fill_stream(spec, n, *greedy, 300);
    auto b = fill_stream(spec, n, *perturbed, 300);
    auto c = fill_stream(spec, n, *lazy, 300);
    REQUIRE_FALSE(a.empty());
    const std::size_t common = std::min({a.size(), b.size(), c.size()});
    CHECK(std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(common), b.begin()));
    CHECK(std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(common), c.begin()));
  }
}

TEST_CASE("the oblivious wrapper rejects a mismatched cup count") {
  auto f = make_oblivious_filler<Rational>(make_flatalg<Rational>(3), 4, "flatalg", 1, 0);
  CupState<Rational> s(5);
  CHECK_THROWS_AS(f->play(RoundView<Rational>{s, nullptr}), ConfigError);
  CHECK(f->oblivious());
}
