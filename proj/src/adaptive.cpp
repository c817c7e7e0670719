#include "cupgame/adaptive.hpp"

#include <algorithm>

namespace cupgame {
namespace {

template <class Num>
Num subset_mean(const CupState<Num>& state, const std::vector<CupId>& cups) {
  return state.mean_fill(std::span<const CupId>(cups));
}

// Fullest cup of a subset under the global rank order.
template <class Num>
CupId fullest(const CupState<Num>& state, const std::vector<CupId>& cups) {
  return *std::min_element(cups.begin(), cups.end(),
                           [&](CupId a, CupId b) { return state.ranks_before(a, b); });
}

template <class Num>
CupId least_full(const CupState<Num>& state, const std::vector<CupId>& cups) {
  return *std::max_element(cups.begin(), cups.end(),
                           [&](CupId a, CupId b) { return state.ranks_before(a, b); });
}

// ---------------------------------------------------------------- trivalg

template <class Num>
class TrivalgRun final : public AdaptiveRun<Num> {
 public:
  TrivalgRun(std::vector<CupId> cups, const CupState<Num>& state)
      : cups_(std::move(cups)), offset_(subset_mean(state, cups_)), target_(cups_.front()) {}

  std::optional<FillMove<Num>> next(const CupState<Num>& state) override {
    if (stage_ == Stage::placed) {
      target_ = state.ranks_before(a_, b_) ? a_ : b_;
      stage_ = Stage::done;
    }
    if (stage_ == Stage::done) return std::nullopt;

    stage_ = Stage::done;
    if (cups_.size() == 1) return std::nullopt;
    std::vector<CupId> order = cups_;
    std::partial_sort(order.begin(), order.begin() + 2, order.end(),
                      [&](CupId x, CupId y) { return state.ranks_before(x, y); });
    a_ = order[0];
    b_ = order[1];
    target_ = a_;
    const Num half = NumTraits<Num>::ratio(1, 2);
    Num alpha = state.fill(a_) - offset_;
    if (alpha >= half) return std::nullopt;

    stage_ = Stage::placed;
    FillMove<Num> move;
    move.p = 1;
    move.per_cup.emplace_back(a_, Num(half - alpha));
    move.per_cup.emplace_back(b_, Num(half + alpha));
    return move;
  }

  CupId target() const override { return target_; }

 private:
  enum class Stage { fresh, placed, done };
  std::vector<CupId> cups_;
  Num offset_;
  CupId a_ = 0, b_ = 0;
  CupId target_;
  Stage stage_ = Stage::fresh;
};

template <class Num>
class TrivalgRecipe final : public AdaptiveRecipe<Num> {
 public:
  explicit TrivalgRecipe(std::size_t max_n) : guarantee_(StrategyGuarantee::trivalg(max_n)) {}
  const GuaranteePtr& guarantee() const override { return guarantee_; }
  std::unique_ptr<AdaptiveRun<Num>> start(std::vector<CupId> cups,
                                          const CupState<Num>& state) const override {
    if (cups.empty()) throw EmptySet("trivalg on no cups");
    return std::make_unique<TrivalgRun<Num>>(std::move(cups), state);
  }

 private:
  GuaranteePtr guarantee_;
};

// ---------------------------------------------------------- amplification

template <class Num>
class AmplifiedRecipe;

template <class Num>
class AmplifiedRun final : public AdaptiveRun<Num> {
 public:
  AmplifiedRun(const AmplifiedRecipe<Num>& recipe, std::vector<CupId> cups, const CupState<Num>& state);

  std::optional<FillMove<Num>> next(const CupState<Num>& state) override;
  void observe(const EmptyMove& move) override;
  CupId target() const override { return target_; }
  std::vector<CupId> anchors() const override {
    return stage_ == Stage::step1 ? anchor_ : std::vector<CupId>{};
  }

 private:
  enum class Stage { step1, step2, done };

  const AmplifiedRecipe<Num>& recipe_;
  std::size_t n_;
  Num offset_;
  Num h_;
  std::vector<CupId> anchor_;      // A
  std::vector<CupId> non_anchor_;  // B
  std::unique_ptr<AdaptiveRun<Num>> child_;
  bool child_moved_ = false;
  bool neglected_ = false;
  Stage stage_ = Stage::step1;
  CupId target_ = 0;
};

template <class Num>
class AmplifiedRecipe final : public AdaptiveRecipe<Num> {
 public:
  AmplifiedRecipe(AdaptiveRecipePtr<Num> inner, const Rational& delta)
      : inner_(std::move(inner)),
        delta_(delta),
        guarantee_(StrategyGuarantee::adaptive_amplified(inner_->guarantee(), delta)) {}

  const GuaranteePtr& guarantee() const override { return guarantee_; }

  std::unique_ptr<AdaptiveRun<Num>> start(std::vector<CupId> cups,
                                          const CupState<Num>& state) const override {
    if (cups.empty()) throw EmptySet("amplification on no cups");
    if (guarantee_->branch(cups.size()) != Branch::amplify) return inner_->start(std::move(cups), state);
    return std::make_unique<AmplifiedRun<Num>>(*this, std::move(cups), state);
  }

  const AdaptiveRecipe<Num>& inner() const { return *inner_; }
  const Rational& delta() const { return delta_; }

 private:
  AdaptiveRecipePtr<Num> inner_;
  Rational delta_;
  GuaranteePtr guarantee_;
};

template <class Num>
AmplifiedRun<Num>::AmplifiedRun(const AmplifiedRecipe<Num>& recipe, std::vector<CupId> cups,
                                const CupState<Num>& state)
    : recipe_(recipe), n_(cups.size()), offset_(subset_mean(state, cups)) {
  const std::size_t nA = anchor_size(n_, recipe.delta());
  const std::size_t nB = n_ - nA;
  h_ = NumTraits<Num>::from(Rational(adaptive_keep(n_, recipe.delta()) * recipe.inner().guarantee()->f(nB)));

  std::vector<CupId> order = cups;
  std::sort(order.begin(), order.end(), [&](CupId a, CupId b) { return state.ranks_before(a, b); });
  anchor_.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nA));
  non_anchor_.assign(order.begin() + static_cast<std::ptrdiff_t>(nA), order.end());
  std::sort(anchor_.begin(), anchor_.end());
  std::sort(non_anchor_.begin(), non_anchor_.end());
}

template <class Num>
std::optional<FillMove<Num>> AmplifiedRun<Num>::next(const CupState<Num>& state) {
  for (;;) {
    if (stage_ == Stage::done) return std::nullopt;

    if (stage_ == Stage::step2) {
      std::optional<FillMove<Num>> move = child_->next(state);
      if (move) {
        child_moved_ = true;
        return move;
      }
      target_ = child_->target();
      child_.reset();
      stage_ = Stage::done;
      return std::nullopt;
    }

    // Step 1. Leave as soon as the anchors reach h, even mid-application.
    if (Num(subset_mean(state, anchor_) - offset_) >= h_) {
      child_ = recipe_.inner().start(anchor_, state);
      child_moved_ = false;
      stage_ = Stage::step2;
      continue;
    }

    // A neglected application can no longer succeed and its output is never
    // used, so it ends at once. Any emptying that missed A landed on B, which
    // also voids the inner strategy's own premises for the rest of it.
    if (child_ && neglected_) child_.reset();

    if (!child_) {
      child_ = recipe_.inner().start(non_anchor_, state);
      child_moved_ = false;
      neglected_ = false;
    }

    std::optional<FillMove<Num>> move = child_->next(state);
    if (move) {
      for (CupId a : anchor_) move->per_cup.emplace_back(a, NumTraits<Num>::integer(1));
      move->p += anchor_.size();
      child_moved_ = true;
      return move;
    }

    // A successful application ends the swapping-process.
    const CupId produced = child_->target();
    child_.reset();
    child_moved_ = false;
    const CupId weakest = least_full(state, anchor_);
    if (!(state.fill(produced) > state.fill(weakest))) {
      // With mean(A) < h a successful output always beats the weakest anchor
      // unless extra emptyings have pushed mean(A u B) below its start. Step 1
      // cannot make progress from here, so settle for the anchors as they are.
      child_ = recipe_.inner().start(anchor_, state);
      stage_ = Stage::step2;
      continue;
    }
    *std::find(anchor_.begin(), anchor_.end(), weakest) = produced;
    *std::find(non_anchor_.begin(), non_anchor_.end(), produced) = weakest;
    std::sort(anchor_.begin(), anchor_.end());
    std::sort(non_anchor_.begin(), non_anchor_.end());
  }
}

template <class Num>
void AmplifiedRun<Num>::observe(const EmptyMove& move) {
  if (!child_ || !child_moved_) return;
  if (stage_ == Stage::step1) {
    for (CupId a : anchor_) {
      if (!move.contains(a)) {
        neglected_ = true;
        break;
      }
    }
  }
  child_->observe(move);
}

// ---------------------------------------------------------------- filler

template <class Num>
class AdaptiveChainFiller final : public AdaptiveFiller<Num> {
 public:
  AdaptiveChainFiller(AdaptiveRecipePtr<Num> recipe, std::size_t n, std::string name)
      : recipe_(std::move(recipe)), n_(n), name_(std::move(name)) {
    if (recipe_->guarantee()->max_n() < n_) {
      throw ConfigError("strategy certified only up to " + std::to_string(recipe_->guarantee()->max_n()) +
                        " cups, game has " + std::to_string(n_));
    }
    cap_ = BigInt(2) * recipe_->guarantee()->T(n_);
  }

  std::string name() const override { return name_; }
  GuaranteePtr guarantee() const override { return recipe_->guarantee(); }
  std::optional<CupId> target() const override { return target_; }
  std::vector<CupId> anchors() const override { return run_ ? run_->anchors() : std::vector<CupId>{}; }

  void restart() override {
    run_.reset();
    moved_ = false;
    finished_ = false;
    rounds_ = 0;
    target_.reset();
  }

 protected:
  std::optional<FillMove<Num>> next(const CupState<Num>& state, const EmptyMove* last) override {
    if (finished_) return std::nullopt;
    if (state.size() != n_) throw ConfigError("filler built for a different cup count");
    if (!run_) {
      std::vector<CupId> all(n_);
      for (CupId c = 0; c < n_; ++c) all[c] = c;
      run_ = recipe_->start(std::move(all), state);
    } else if (moved_ && last) {
      run_->observe(*last);
    }
    std::optional<FillMove<Num>> move = run_->next(state);
    if (!move) {
      finished_ = true;
      target_ = run_->target();
      return std::nullopt;
    }
    ++rounds_;
    if (BigInt(static_cast<unsigned long>(rounds_)) > cap_) {
      throw NonTermination(name_ + " exceeded its round cap 2*T(" + std::to_string(n_) + ") = " +
                           cap_.get_str());
    }
    moved_ = true;
    return move;
  }

 private:
  AdaptiveRecipePtr<Num> recipe_;
  std::size_t n_;
  std::string name_;
  BigInt cap_;
  std::unique_ptr<AdaptiveRun<Num>> run_;
  bool moved_ = false;
  bool finished_ = false;
  std::uint64_t rounds_ = 0;
  std::optional<CupId> target_;
};

}  // namespace

template <class Num>
AdaptiveRecipePtr<Num> make_trivalg(std::size_t max_n) {
  return std::make_shared<TrivalgRecipe<Num>>(max_n);
}

template <class Num>
AdaptiveRecipePtr<Num> make_amplified(AdaptiveRecipePtr<Num> inner, const Rational& delta) {
  return std::make_shared<AmplifiedRecipe<Num>>(std::move(inner), delta);
}

template <class Num>
AdaptiveRecipePtr<Num> make_trivalg2(std::size_t max_n) {
  const Rational half(1, 2);
  return make_amplified<Num>(make_amplified<Num>(make_trivalg<Num>(max_n), half), half);
}

template <class Num>
AdaptiveRecipePtr<Num> make_adaptive_linear(std::size_t n) {
  AdaptiveRecipePtr<Num> chain = make_trivalg2<Num>(n);
  const std::size_t levels = n / 8;
  for (std::size_t i = 1; i < levels; ++i) {
    chain = make_amplified<Num>(chain, Rational(1, static_cast<unsigned long>(i + 1)));
  }
  return chain;
}

Rational power_of_two_delta(const Rational& eps, const Rational& bound) {
  if (eps <= 0) throw ConfigError("eps must be positive");
  // (2^j)^(a/b) >= bound  <=>  2^(j a) >= bound^b
  const unsigned long a = eps.get_num().get_ui();
  const unsigned long b = eps.get_den().get_ui();
  const Rational rhs = pow(bound, b);
  for (unsigned long j = 1; j <= 4096; ++j) {
    BigInt lhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), 2, j * a);
    if (Rational(lhs) >= rhs) {
      BigInt den;
      mpz_ui_pow_ui(den.get_mpz_t(), 2, j);
      return Rational(BigInt(1), den);
    }
  }
  throw ConfigError("no power-of-two delta found for eps = " + format_rational(eps));
}

std::size_t levels_to_cover(const Rational& delta, std::size_t n) {
  if (n <= 1) return 0;
  const Rational keep = Rational(1) - delta;
  const Rational goal(1, static_cast<unsigned long>(n));
  Rational q = 1;
  std::size_t i = 0;
  while (q > goal) {
    q *= keep;
    ++i;
  }
  return i;
}

std::vector<BigInt> g_sequence(const BigInt& g0, const Rational& delta, std::size_t levels) {
  std::vector<BigInt> g{g0};
  const Rational keep = Rational(1) - delta;
  for (std::size_t i = 1; i <= levels; ++i) g.push_back(floor_of(Rational(g.back()) / keep));
  return g;
}

PolyPlan plan_adaptive_poly(const Rational& eps, std::size_t n) {
  if (eps <= 0 || eps >= Rational(1, 2)) throw ConfigError("eps must lie in (0, 1/2)");
  PolyPlan plan;
  plan.eps = eps;
  plan.delta = power_of_two_delta(eps, Rational(2) * (Rational(2) - eps));
  plan.levels = levels_to_cover(plan.delta, n);
  plan.g0 = ceil_div(Rational(16) / plan.delta);
  return plan;
}

template <class Num>
AdaptiveRecipePtr<Num> make_adaptive_poly(const PolyPlan& plan, std::size_t max_n) {
  AdaptiveRecipePtr<Num> chain = make_trivalg<Num>(max_n);
  for (std::size_t i = 0; i < plan.levels; ++i) chain = make_amplified<Num>(chain, plan.delta);
  return chain;
}

GuaranteePtr adaptive_poly_guarantee(const PolyPlan& plan, std::size_t levels, std::size_t max_n) {
  GuaranteePtr g = StrategyGuarantee::trivalg(max_n);
  for (std::size_t i = 0; i < levels; ++i) g = StrategyGuarantee::adaptive_amplified(g, plan.delta);
  return g;
}

Rational adaptive_poly_claim_constant_pow(const PolyPlan& plan) {
  const unsigned long a = plan.eps.get_num().get_ui();
  const unsigned long b = plan.eps.get_den().get_ui();
  return pow(Rational(3, 2), b) / pow(Rational(plan.g0), b - a);
}

ClaimCheck check_adaptive_poly_claim(const PolyPlan& plan, std::size_t levels) {
  const unsigned long a = plan.eps.get_num().get_ui();
  const unsigned long b = plan.eps.get_den().get_ui();
  const Rational cb = adaptive_poly_claim_constant_pow(plan);
  const std::vector<BigInt> g = g_sequence(plan.g0, plan.delta, levels);
  const std::size_t max_n = g.back().get_ui();

  ClaimCheck out;
  GuaranteePtr level = StrategyGuarantee::trivalg(max_n);
  for (std::size_t i = 0; i <= levels; ++i) {
    if (i > 0) level = StrategyGuarantee::adaptive_amplified(level, plan.delta);
    const std::size_t gi = g[i].get_ui();
    for (std::size_t k = 1; k <= gi; ++k) {
      ++out.checked;
      Rational lhs = pow(Rational(level->f(k) + 1), b);
      Rational rhs = cb * pow(Rational(static_cast<unsigned long>(k)), b - a);
      if (lhs < rhs) {
        out.holds = false;
        out.level = i;
        out.k = k;
        return out;
      }
    }
  }
  return out;
}

template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_adaptive_filler(AdaptiveRecipePtr<Num> recipe, std::size_t n,
                                                          std::string name) {
  return std::make_unique<AdaptiveChainFiller<Num>>(std::move(recipe), n, std::move(name));
}

#define CUPGAME_ADAPTIVE(Num)                                                                     \
  template AdaptiveRecipePtr<Num> make_trivalg<Num>(std::size_t);                                \
  template AdaptiveRecipePtr<Num> make_amplified<Num>(AdaptiveRecipePtr<Num>, const Rational&);  \
  template AdaptiveRecipePtr<Num> make_trivalg2<Num>(std::size_t);                               \
  template AdaptiveRecipePtr<Num> make_adaptive_linear<Num>(std::size_t);                        \
  template AdaptiveRecipePtr<Num> make_adaptive_poly<Num>(const PolyPlan&, std::size_t);         \
  template std::unique_ptr<FillerStrategy<Num>> make_adaptive_filler<Num>(AdaptiveRecipePtr<Num>, \
                                                                          std::size_t, std::string);

CUPGAME_ADAPTIVE(Rational)
CUPGAME_ADAPTIVE(double)

}  // namespace cupgame
