#include "cupgame/oblivious.hpp"

#include "cupgame/adaptive.hpp"

#include <algorithm>
#include <cmath>

namespace cupgame {
namespace {

template <class Num>
void add_anchor_units(FillMove<Num>& move, const std::vector<CupId>& anchors) {
  for (CupId a : anchors) move.per_cup.emplace_back(a, NumTraits<Num>::integer(1));
  move.p += anchors.size();
}

template <class Num>
class FlatRun final : public ObliviousRun<Num> {
 public:
  FlatRun(std::vector<CupId> cups, std::uint64_t rounds)
      : cups_(std::move(cups)), rounds_(cups_.size() < 2 ? 0 : rounds) {
    const std::size_t p = cups_.size() / 2;
    if (p > 0) {
      share_ = NumTraits<Num>::ratio(static_cast<long>(p), static_cast<long>(cups_.size()));
    }
  }

  std::optional<FillMove<Num>> next(Rng&) override {
    if (played_ >= rounds_) return std::nullopt;
    ++played_;
    FillMove<Num> move;
    move.p = cups_.size() / 2;
    move.per_cup.reserve(cups_.size());
    for (CupId c : cups_) move.per_cup.emplace_back(c, share_);
    return move;
  }

 private:
  std::vector<CupId> cups_;
  std::uint64_t rounds_;
  std::uint64_t played_ = 0;
  Num share_{};
};

template <class Num>
class FlatRecipe final : public ObliviousRecipe<Num> {
 public:
  explicit FlatRecipe(std::uint64_t rounds) : rounds_(rounds) {}
  std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const override {
    return std::make_unique<FlatRun<Num>>(std::move(cups), rounds_);
  }

 private:
  std::uint64_t rounds_;
};

template <class Num>
class RandRun final : public ObliviousRun<Num> {
 public:
  RandRun(const std::vector<CupId>& cups, std::size_t k) {
    if (k == 0) throw ConfigError("randalg needs k >= 1");
    if (k > cups.size()) {
      throw ConfigError("randalg k = " + std::to_string(k) + " exceeds the " + std::to_string(cups.size()) +
                        " cups available");
    }
    active_.assign(cups.begin(), cups.begin() + static_cast<std::ptrdiff_t>(k));
  }

  std::optional<FillMove<Num>> next(Rng& rng) override {
    if (active_.size() <= 1) return std::nullopt;
    FillMove<Num> move;
    move.p = 1;
    const Num share = NumTraits<Num>::ratio(1, static_cast<long>(active_.size()));
    for (CupId c : active_) move.per_cup.emplace_back(c, share);
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(rng.below(active_.size())));
    return move;
  }

  std::optional<CupId> target() const override {
    if (active_.size() != 1) return std::nullopt;
    return active_.front();
  }

 private:
  std::vector<CupId> active_;
};

template <class Num>
class RandRecipe final : public ObliviousRecipe<Num> {
 public:
  explicit RandRecipe(std::size_t k) : k_(k) {}
  std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const override {
    return std::make_unique<RandRun<Num>>(cups, k_);
  }

 private:
  std::size_t k_;
};

// Algorithm of repeated applications and donations. Used directly by the base
// and amplification runs, which continue after it with their own phases.
template <class Num>
class RepRun final : public ObliviousRun<Num> {
 public:
  RepRun(std::vector<CupId> cups, const ObliviousRecipe<Num>& inner, const RepParams& params)
      : inner_(inner), params_(params), non_anchor_(std::move(cups)) {
    if (params_.M == 0) throw ConfigError("rep needs M >= 1");
    donations_ = anchor_size(non_anchor_.size(), params_.delta);
  }

  std::optional<FillMove<Num>> next(Rng& rng) override {
    for (;;) {
      if (anchor_.size() == donations_) return std::nullopt;
      if (!child_) {
        if (applications_left_ == 0) applications_left_ = rng.between(1, params_.M);
        child_ = std::make_unique<FlatRun<Num>>(non_anchor_, params_.flatten_rounds);
        flattening_ = true;
      }
      std::optional<FillMove<Num>> move = child_->next(rng);
      if (move) {
        add_anchor_units(*move, anchor_);
        return move;
      }
      if (flattening_) {
        child_ = inner_.start(non_anchor_);
        flattening_ = false;
        continue;
      }
      std::optional<CupId> produced = child_->target();
      child_.reset();
      if (!produced) throw ConfigError("rep's inner strategy designated no cup");
      if (--applications_left_ > 0) continue;
      // End of a donation-process: the last application's cup moves to A.
      auto it = std::find(non_anchor_.begin(), non_anchor_.end(), *produced);
      if (it == non_anchor_.end()) throw ConfigError("rep's inner strategy designated a cup outside B");
      non_anchor_.erase(it);
      anchor_.push_back(*produced);
    }
  }

  std::vector<CupId> anchors() const override { return anchor_; }
  const std::vector<CupId>& non_anchors() const { return non_anchor_; }
  std::optional<CupId> target() const override {
    if (anchor_.empty()) return std::nullopt;
    return anchor_.back();
  }

 private:
  const ObliviousRecipe<Num>& inner_;
  RepParams params_;
  std::vector<CupId> anchor_;
  std::vector<CupId> non_anchor_;
  std::size_t donations_ = 0;
  std::uint64_t applications_left_ = 0;
  std::unique_ptr<ObliviousRun<Num>> child_;
  bool flattening_ = false;
};

template <class Num>
class RepRecipe final : public ObliviousRecipe<Num> {
 public:
  RepRecipe(ObliviousRecipePtr<Num> inner, const RepParams& params) : inner_(std::move(inner)), params_(params) {}
  std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const override {
    return std::make_unique<RepRun<Num>>(std::move(cups), *inner_, params_);
  }

 private:
  ObliviousRecipePtr<Num> inner_;
  RepParams params_;
};

template <class Num>
class BaseRun final : public ObliviousRun<Num> {
 public:
  BaseRun(std::vector<CupId> cups, const ObliviousRecipe<Num>& randalg, const ObliviousBaseParams& params,
          bool feasible)
      : fallback_(cups.front()) {
    if (!feasible) return;
    RepParams rp{*params.delta_b, params.M, params.flatten_rounds};
    rep_ = std::make_unique<RepRun<Num>>(std::move(cups), randalg, rp);
    pump_rounds_ = ceil_div(Rational(5) * *params.H).get_ui();
  }

  std::optional<FillMove<Num>> next(Rng& rng) override {
    if (!rep_) return std::nullopt;
    if (!pumping_) {
      if (std::optional<FillMove<Num>> move = rep_->next(rng)) return move;
      pumping_ = true;
      pumped_cup_ = rep_->non_anchors().front();
    }
    if (pumped_ >= pump_rounds_) return std::nullopt;
    ++pumped_;
    FillMove<Num> move;
    move.p = 1;
    move.per_cup.emplace_back(pumped_cup_, NumTraits<Num>::integer(1));
    return move;
  }

  std::optional<CupId> target() const override {
    if (!rep_) return fallback_;
    if (!pumping_) return std::nullopt;
    return pumped_cup_;
  }
  std::vector<CupId> anchors() const override {
    return rep_ && !pumping_ ? rep_->anchors() : std::vector<CupId>{};
  }

 private:
  CupId fallback_;
  std::unique_ptr<RepRun<Num>> rep_;
  bool pumping_ = false;
  CupId pumped_cup_ = 0;
  std::uint64_t pump_rounds_ = 0;
  std::uint64_t pumped_ = 0;
};

template <class Num>
class BaseRecipe final : public ObliviousRecipe<Num> {
 public:
  BaseRecipe(const ObliviousBaseParams& params, std::size_t max_n)
      : params_(resolve(params)),
        randalg_(std::make_shared<RandRecipe<Num>>(params_.k)),
        guarantee_(oblivious_base_guarantee(params_, max_n)),
        min_size_(oblivious_base_min_size(params_)) {}

  std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const override {
    if (cups.empty()) throw EmptySet("oblivious base on no cups");
    const bool feasible = cups.size() >= min_size_;
    return std::make_unique<BaseRun<Num>>(std::move(cups), *randalg_, params_, feasible);
  }
  GuaranteePtr guarantee() const override { return guarantee_; }

 private:
  ObliviousBaseParams params_;
  ObliviousRecipePtr<Num> randalg_;
  GuaranteePtr guarantee_;
  std::size_t min_size_;
};

template <class Num>
class AmplifiedRun final : public ObliviousRun<Num> {
 public:
  AmplifiedRun(std::vector<CupId> cups, const ObliviousRecipe<Num>& inner, const AmplifyParams& params)
      : inner_(inner), flatten_rounds_(params.flatten_rounds) {
    rep_ = std::make_unique<RepRun<Num>>(std::move(cups), inner, RepParams{params.delta, params.M,
                                                                          params.flatten_rounds});
  }

  std::optional<FillMove<Num>> next(Rng& rng) override {
    for (;;) {
      switch (stage_) {
        case Stage::donate:
          if (std::optional<FillMove<Num>> move = rep_->next(rng)) return move;
          anchor_ = rep_->anchors();
          child_ = std::make_unique<FlatRun<Num>>(anchor_, flatten_rounds_);
          stage_ = Stage::flatten;
          continue;
        case Stage::flatten:
          if (std::optional<FillMove<Num>> move = child_->next(rng)) return move;
          child_ = inner_.start(anchor_);
          stage_ = Stage::finish;
          continue;
        case Stage::finish:
          if (std::optional<FillMove<Num>> move = child_->next(rng)) return move;
          target_ = child_->target();
          stage_ = Stage::done;
          continue;
        case Stage::done:
          return std::nullopt;
      }
    }
  }

  std::optional<CupId> target() const override { return target_; }
  std::vector<CupId> anchors() const override {
    return stage_ == Stage::donate ? rep_->anchors() : std::vector<CupId>{};
  }

 private:
  enum class Stage { donate, flatten, finish, done };
  const ObliviousRecipe<Num>& inner_;
  std::uint64_t flatten_rounds_;
  std::unique_ptr<RepRun<Num>> rep_;
  std::vector<CupId> anchor_;
  std::unique_ptr<ObliviousRun<Num>> child_;
  Stage stage_ = Stage::donate;
  std::optional<CupId> target_;
};

template <class Num>
class AmplifiedRecipe final : public ObliviousRecipe<Num> {
 public:
  AmplifiedRecipe(ObliviousRecipePtr<Num> inner, const AmplifyParams& params)
      : inner_(std::move(inner)), params_(params) {
    if (!inner_->guarantee()) throw ConfigError("oblivious amplification needs a certified inner strategy");
    guarantee_ = StrategyGuarantee::oblivious_amplified(inner_->guarantee(), params_);
  }

  std::unique_ptr<ObliviousRun<Num>> start(std::vector<CupId> cups) const override {
    if (cups.empty()) throw EmptySet("oblivious amplification on no cups");
    if (guarantee_->branch(cups.size()) != Branch::amplify) return inner_->start(std::move(cups));
    return std::make_unique<AmplifiedRun<Num>>(std::move(cups), *inner_, params_);
  }
  GuaranteePtr guarantee() const override { return guarantee_; }

 private:
  ObliviousRecipePtr<Num> inner_;
  AmplifyParams params_;
  GuaranteePtr guarantee_;
};

template <class Num>
class ObliviousChainFiller final : public ObliviousFiller<Num> {
 public:
  ObliviousChainFiller(ObliviousRecipePtr<Num> recipe, std::size_t n, std::string name, std::uint64_t seed,
                       std::uint64_t trial)
      : recipe_(std::move(recipe)), n_(n), name_(std::move(name)), rng_(seed, trial, Stream::filler) {}

  std::string name() const override { return name_; }
  GuaranteePtr guarantee() const override { return recipe_->guarantee(); }
  std::optional<CupId> target() const override { return run_ ? run_->target() : std::nullopt; }
  std::vector<CupId> anchors() const override { return run_ ? run_->anchors() : std::vector<CupId>{}; }
  void restart() override { run_.reset(); }

 protected:
  std::optional<FillMove<Num>> next(const ObliviousContext& ctx) override {
    if (ctx.n != n_) throw ConfigError("filler built for a different cup count");
    if (!run_) {
      std::vector<CupId> all(n_);
      for (CupId c = 0; c < n_; ++c) all[c] = c;
      run_ = recipe_->start(std::move(all));
    }
    return run_->next(rng_);
  }

 private:
  ObliviousRecipePtr<Num> recipe_;
  std::size_t n_;
  std::string name_;
  Rng rng_;
  std::unique_ptr<ObliviousRun<Num>> run_;
};

}  // namespace

ObliviousBaseParams resolve(const ObliviousBaseParams& params) {
  ObliviousBaseParams out = params;
  if (out.h <= 0) throw ConfigError("oblivious base needs h > 0");
  if (!out.H) out.H = Rational(out.h / 8);
  if (*out.H < 0) throw ConfigError("oblivious base needs H >= 0");
  if (out.k == 0) {
    out.k = static_cast<std::size_t>(std::ceil(std::exp(2.0 * out.h.get_d() + 1.0)));
  }
  if (!out.delta_b) out.delta_b = Rational(1, static_cast<unsigned long>(2 * out.k));
  if (*out.delta_b <= 0 || *out.delta_b > Rational(1, 2)) throw ConfigError("delta_b outside (0, 1/2]");
  if (out.M == 0) throw ConfigError("M must be at least 1");
  return out;
}

std::size_t oblivious_base_min_size(const ObliviousBaseParams& resolved) {
  // The last donation-process starts with m - (ceil(delta m) - 1) cups in B.
  const std::size_t floor_size = std::max<std::size_t>(resolved.n_b, 2);
  for (std::size_t m = floor_size;; ++m) {
    if (m - anchor_size(m, *resolved.delta_b) + 1 >= resolved.k) return m;
  }
}

GuaranteePtr oblivious_base_guarantee(const ObliviousBaseParams& params, std::size_t max_n) {
  const ObliviousBaseParams p = resolve(params);
  const std::size_t min_size = oblivious_base_min_size(p);
  const BigInt pump = ceil_div(Rational(5) * *p.H);
  const BigInt per_application(static_cast<unsigned long>(p.flatten_rounds + p.k - 1));
  std::vector<Rational> f(max_n + 1, Rational(0));
  std::vector<BigInt> T(max_n + 1, BigInt(0));
  for (std::size_t m = min_size; m <= max_n; ++m) {
    f[m] = *p.H;
    BigInt donations(static_cast<unsigned long>(anchor_size(m, *p.delta_b)));
    T[m] = donations * BigInt(static_cast<unsigned long>(p.M)) * per_application + pump;
  }
  return StrategyGuarantee::table("oblivious-base", std::move(f), std::move(T), true);
}

ObliviousPolyPlan plan_oblivious_poly(const Rational& eps, std::size_t n, std::size_t n_b,
                                      std::optional<Rational> delta_override,
                                      std::optional<std::size_t> levels_override) {
  if (eps <= 0 || eps >= Rational(1, 2)) throw ConfigError("eps must lie in (0, 1/2)");
  if (n_b == 0) throw ConfigError("n_b must be positive");
  ObliviousPolyPlan plan;
  plan.eps = eps;
  plan.n_b = n_b;
  plan.delta = delta_override ? *delta_override : power_of_two_delta(eps, Rational(2) * (Rational(3) - eps));
  plan.g0 = BigInt(static_cast<unsigned long>(n_b)) * ceil_div(Rational(16) / plan.delta);
  if (levels_override) {
    plan.levels = *levels_override;
  } else {
    const Rational keep = Rational(1) - plan.delta;
    BigInt g = plan.g0;
    while (g < BigInt(static_cast<unsigned long>(n))) {
      g = floor_of(Rational(g) / keep);
      ++plan.levels;
    }
  }
  return plan;
}

ObliviousClaim check_oblivious_poly_claim(const ObliviousPolyPlan& plan, const ObliviousBaseParams& base,
                                          std::size_t max_n) {
  const unsigned long a = plan.eps.get_num().get_ui();
  const unsigned long b = plan.eps.get_den().get_ui();
  const std::vector<BigInt> g = g_sequence(plan.g0, plan.delta, plan.levels);
  ObliviousBaseParams bp = base;
  bp.n_b = plan.n_b;
  GuaranteePtr level = oblivious_base_guarantee(bp, max_n);
  const AmplifyParams pure{plan.delta, 1, 0, false};
  ObliviousClaim out;
  for (std::size_t i = 0; i <= plan.levels; ++i) {
    if (i > 0) level = StrategyGuarantee::oblivious_amplified(level, pure);
    const std::size_t top = g[i] < BigInt(static_cast<unsigned long>(max_n)) ? g[i].get_ui() : max_n;
    for (std::size_t k = 1; k <= top; ++k) {
      ++out.checked;
      // f + 1 >= (k/n_b)^(1-eps)  <=>  (f + 1)^b >= (k/n_b)^(b-a)
      Rational lhs = pow(Rational(level->f(k) + 1), b);
      Rational rhs = pow(make_rational(static_cast<long>(k), static_cast<long>(plan.n_b)), b - a);
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
ObliviousRecipePtr<Num> make_flatalg(std::uint64_t rounds) {
  return std::make_shared<FlatRecipe<Num>>(rounds);
}

template <class Num>
ObliviousRecipePtr<Num> make_randalg(std::size_t k) {
  if (k == 0) throw ConfigError("randalg needs k >= 1");
  return std::make_shared<RandRecipe<Num>>(k);
}

template <class Num>
ObliviousRecipePtr<Num> make_rep(ObliviousRecipePtr<Num> inner, const RepParams& params) {
  if (params.delta <= 0 || params.delta > Rational(1, 2)) throw ConfigError("rep delta outside (0, 1/2]");
  if (params.M == 0) throw ConfigError("rep needs M >= 1");
  return std::make_shared<RepRecipe<Num>>(std::move(inner), params);
}

template <class Num>
ObliviousRecipePtr<Num> make_oblivious_base(const ObliviousBaseParams& params, std::size_t max_n) {
  return std::make_shared<BaseRecipe<Num>>(params, max_n);
}

template <class Num>
ObliviousRecipePtr<Num> make_oblivious_amplified(ObliviousRecipePtr<Num> inner, const AmplifyParams& params) {
  return std::make_shared<AmplifiedRecipe<Num>>(std::move(inner), params);
}

template <class Num>
ObliviousRecipePtr<Num> make_oblivious_poly(const ObliviousPolyPlan& plan, const ObliviousBaseParams& base,
                                            const AmplifyParams& level_params, std::size_t max_n) {
  ObliviousBaseParams bp = base;
  bp.n_b = plan.n_b;
  ObliviousRecipePtr<Num> chain = make_oblivious_base<Num>(bp, max_n);
  AmplifyParams ap = level_params;
  ap.delta = plan.delta;
  for (std::size_t i = 0; i < plan.levels; ++i) chain = make_oblivious_amplified<Num>(chain, ap);
  return chain;
}

template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_oblivious_filler(ObliviousRecipePtr<Num> recipe, std::size_t n,
                                                           std::string name, std::uint64_t seed,
                                                           std::uint64_t trial) {
  return std::make_unique<ObliviousChainFiller<Num>>(std::move(recipe), n, std::move(name), seed, trial);
}

#define CUPGAME_OBLIVIOUS(Num)                                                                              \
  template ObliviousRecipePtr<Num> make_flatalg<Num>(std::uint64_t);                                       \
  template ObliviousRecipePtr<Num> make_randalg<Num>(std::size_t);                                         \
  template ObliviousRecipePtr<Num> make_rep<Num>(ObliviousRecipePtr<Num>, const RepParams&);               \
  template ObliviousRecipePtr<Num> make_oblivious_base<Num>(const ObliviousBaseParams&, std::size_t);      \
  template ObliviousRecipePtr<Num> make_oblivious_amplified<Num>(ObliviousRecipePtr<Num>,                  \
                                                                 const AmplifyParams&);                    \
  template ObliviousRecipePtr<Num> make_oblivious_poly<Num>(const ObliviousPolyPlan&,                      \
                                                            const ObliviousBaseParams&,                    \
                                                            const AmplifyParams&, std::size_t);            \
  template std::unique_ptr<FillerStrategy<Num>> make_oblivious_filler<Num>(                                \
      ObliviousRecipePtr<Num>, std::size_t, std::string, std::uint64_t, std::uint64_t);

CUPGAME_OBLIVIOUS(Rational)
CUPGAME_OBLIVIOUS(double)

}  // namespace cupgame
