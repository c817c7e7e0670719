#include "cupgame/registry.hpp"

#include "cupgame/adaptive.hpp"
#include "cupgame/basic_fillers.hpp"
#include "cupgame/oblivious.hpp"
#include "cupgame/rng.hpp"

namespace cupgame {
namespace {

AmplifyParams level_params(const StrategySpec& s, const Rational& default_delta) {
  AmplifyParams ap;
  ap.delta = s.rational_or("delta", default_delta);
  ap.M = s.integer_or("M", 4);
  ap.flatten_rounds = s.integer_or("flatten", 16);
  ap.size_threshold = s.integer_or("threshold", 1) != 0;
  if (ap.delta <= 0 || ap.delta > Rational(1, 2)) throw ConfigError("delta must lie in (0, 1/2]");
  if (ap.M == 0) throw ConfigError("M must be at least 1");
  return ap;
}

template <class Num>
ObliviousRecipePtr<Num> oblivious_recipe(const StrategySpec& s, std::size_t n) {
  const std::string& name = s.name();
  if (name == "flatalg") {
    s.expect_only({"rounds", "repeat", "episodes"});
    return make_flatalg<Num>(s.integer_or("rounds", 4 * n));
  }
  if (name == "randalg") {
    s.expect_only({"k", "repeat", "episodes"});
    return make_randalg<Num>(s.integer_or("k", 3));
  }
  if (name == "rep") {
    s.expect_only({"k", "delta", "M", "flatten", "repeat", "episodes"});
    RepParams rp;
    rp.delta = s.rational_or("delta", rp.delta);
    rp.M = s.integer_or("M", rp.M);
    rp.flatten_rounds = s.integer_or("flatten", rp.flatten_rounds);
    return make_rep<Num>(make_randalg<Num>(s.integer_or("k", 3)), rp);
  }
  if (name == "oblivious-base") {
    s.expect_only({"h", "H", "k", "delta", "M", "flatten", "nb", "repeat", "episodes"});
    return make_oblivious_base<Num>(oblivious_base_params(s, ""), n);
  }
  if (name == "oblivious-amplify") {
    s.expect_only({"delta", "M", "flatten", "threshold", "repeat", "episodes", "base_h", "base_H", "base_k", "base_delta",
                   "base_M", "base_flatten", "base_nb"});
    const AmplifyParams ap = level_params(s, Rational(1, 4));
    const BigInt need = ceil_div(Rational(4) / (ap.delta * ap.delta));
    if (ap.size_threshold && BigInt(n) < need) {
      throw ConfigError("oblivious-amplify with delta = " + format_rational(ap.delta) + " needs at least " +
                        need.get_str() + " cups");
    }
    return make_oblivious_amplified<Num>(make_oblivious_base<Num>(oblivious_base_params(s, "base_"), n), ap);
  }
  if (name == "oblivious-poly") {
    s.expect_only({"eps", "levels", "delta", "nb", "M", "flatten", "threshold", "repeat", "episodes", "base_h", "base_H",
                   "base_k", "base_delta", "base_M", "base_flatten", "base_nb"});
    const ObliviousBaseParams bp = resolve(oblivious_base_params(s, "base_"));
    const std::size_t nb = s.integer_or("nb", bp.n_b ? bp.n_b : oblivious_base_min_size(bp));
    std::optional<std::size_t> levels;
    if (auto l = s.integer("levels")) levels = *l;
    const ObliviousPolyPlan plan =
        plan_oblivious_poly(s.rational_or("eps", Rational(1, 4)), n, nb, s.rational("delta"), levels);
    return make_oblivious_poly<Num>(plan, bp, level_params(s, plan.delta), n);
  }
  return nullptr;
}

template <class Num>
AdaptiveRecipePtr<Num> adaptive_recipe(const StrategySpec& s, std::size_t n) {
  const std::string& name = s.name();
  if (name == "trivalg") {
    s.expect_only({"repeat", "episodes"});
    return make_trivalg<Num>(n);
  }
  if (name == "trivalg2") {
    s.expect_only({"repeat", "episodes"});
    return make_trivalg2<Num>(n);
  }
  if (name == "adaptive-linear") {
    s.expect_only({"repeat", "episodes"});
    return make_adaptive_linear<Num>(n);
  }
  if (name == "adaptive-poly") {
    s.expect_only({"eps", "levels", "repeat", "episodes"});
    PolyPlan plan = plan_adaptive_poly(s.rational_or("eps", Rational(1, 4)), n);
    plan.levels = s.integer_or("levels", plan.levels);
    return make_adaptive_poly<Num>(plan, n);
  }
  return nullptr;
}

}  // namespace

ObliviousBaseParams oblivious_base_params(const StrategySpec& s, const std::string& prefix) {
  ObliviousBaseParams p;
  p.h = s.rational_or(prefix + "h", p.h);
  p.H = s.rational(prefix + "H");
  p.k = s.integer_or(prefix + "k", 0);
  p.delta_b = s.rational(prefix + "delta");
  p.M = s.integer_or(prefix + "M", p.M);
  p.flatten_rounds = s.integer_or(prefix + "flatten", p.flatten_rounds);
  p.n_b = s.integer_or(prefix + "nb", 0);
  return p;
}

template <class Num>
BuiltFiller<Num> build_filler(const std::string& text, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  const StrategySpec s = StrategySpec::parse(text);
  BuiltFiller<Num> out;
  if (s.flag("repeat") && s.flag("episodes")) throw ConfigError("repeat and episodes are exclusive");
  out.repeat = s.flag("episodes") ? RepeatMode::episodes : s.flag("repeat") ? RepeatMode::restart : RepeatMode::stop;
  if (auto recipe = adaptive_recipe<Num>(s, n)) {
    out.filler = make_adaptive_filler<Num>(std::move(recipe), n, text);
  } else if (auto orecipe = oblivious_recipe<Num>(s, n)) {
    out.filler = make_oblivious_filler<Num>(std::move(orecipe), n, text, seed, trial);
  } else if (s.name() == "uniform-random") {
    s.expect_only({"repeat", "episodes"});
    out.filler = make_uniform_random_filler<Num>(n, seed, trial);
  } else if (s.name() == "oscillating") {
    s.expect_only({"repeat", "episodes"});
    out.filler = make_oscillating_filler<Num>(n);
  } else if (s.name() == "uniform") {
    s.expect_only({"repeat", "episodes"});
    out.filler = make_uniform_filler<Num>(n);
  } else {
    throw SpecError("unknown filler '" + s.name() + "'", 1, 1);
  }
  return out;
}

template <class Num>
std::unique_ptr<EmptierStrategy<Num>> build_emptier(const std::string& text, std::uint64_t seed,
                                                    std::uint64_t trial) {
  const StrategySpec s = StrategySpec::parse(text);
  if (s.name() == "greedy") {
    s.expect_only({});
    return make_greedy_emptier<Num>();
  }
  if (s.name() == "perturbed") {
    s.expect_only({"delta"});
    return make_perturbed_emptier<Num>(s.rational_or("delta", Rational(1, 2)), seed, trial);
  }
  if (s.name() == "uniform") {
    s.expect_only({"extra"});
    return make_uniform_emptier<Num>(seed, trial, s.rational_or("extra", Rational(0)));
  }
  if (s.name() == "lazy") {
    s.expect_only({"skip"});
    return make_lazy_emptier<Num>(s.rational_or("skip", Rational(1, 4)), seed, trial);
  }
  throw SpecError("unknown emptier '" + s.name() + "'", 1, 1);
}

template <class Num>
std::vector<std::unique_ptr<Monitor<Num>>> build_monitors(const std::string& text, FillSemantics semantics,
                                                          bool strict) {
  std::vector<std::unique_ptr<Monitor<Num>>> out;
  for (const StrategySpec& s : parse_spec_list(text)) {
    if (s.name() == "greedy-invariant") {
      s.expect_only({});
      out.push_back(make_greedy_invariant_monitor<Num>(strict));
    } else if (s.name() == "flatness") {
      s.expect_only({"R"});
      out.push_back(make_flatness_monitor<Num>(s.rational_or("R", Rational(4)), strict));
    } else if (s.name() == "conservation") {
      s.expect_only({});
      out.push_back(make_conservation_monitor<Num>(semantics, strict));
    } else if (s.name() == "mass-escape") {
      s.expect_only({"N"});
      out.push_back(make_mass_escape_monitor<Num>(s.integer_or("N", 64)));
    } else if (s.name() == "delta-greedy") {
      s.expect_only({"delta"});
      out.push_back(make_delta_greedy_monitor<Num>(s.rational_or("delta", Rational(1, 2)), strict));
    } else {
      throw SpecError("unknown monitor '" + s.name() + "'", 1, 1);
    }
  }
  return out;
}

template <class Num>
std::vector<Num> build_initial(const std::string& text, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  using T = NumTraits<Num>;
  std::vector<Num> fills(n, T::integer(0));
  if (text.empty() || text == "zeros") return fills;

  const std::size_t colon = text.find(':');
  const std::string shape = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (shape == "list") {
    std::vector<Num> out;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t end = rest.find(',', pos);
      if (end == std::string::npos) end = rest.size();
      try {
        out.push_back(T::from(parse_rational(rest.substr(pos, end - pos))));
      } catch (const ConfigError& e) {
        throw SpecError(std::string("bad initial fill: ") + e.what(), 1, colon + 2 + pos);
      }
      pos = end + 1;
    }
    if (out.size() != n) {
      throw ConfigError("initial list has " + std::to_string(out.size()) + " fills for " + std::to_string(n) +
                        " cups");
    }
    return out;
  }

  Rational R;
  try {
    R = parse_rational(rest);
  } catch (const ConfigError& e) {
    throw SpecError(std::string("bad initial range: ") + e.what(), 1, colon + 2);
  }
  if (R < 0) throw ConfigError("initial range must be nonnegative");
  if (n < 2) return fills;
  if (shape == "linear") {
    for (std::size_t i = 0; i < n; ++i) fills[i] = T::from(Rational(R * make_rational(static_cast<long>(i), static_cast<long>(n - 1))));
  } else if (shape == "split") {
    for (std::size_t i = 0; i < n; ++i) fills[i] = T::from(i % 2 == 0 ? R : Rational(0));
  } else if (shape == "random") {
    Rng rng(seed, trial, Stream::initial);
    fills[0] = T::from(R);
    fills[1] = T::integer(0);
    for (std::size_t i = 2; i < n; ++i) fills[i] = T::from(Rational(R * Rational(rng.below(17), 16)));
  } else {
    throw SpecError("unknown initial shape '" + shape + "'", 1, 1);
  }
  return fills;
}

GuaranteePtr filler_guarantee(const std::string& text, std::size_t max_n) {
  const StrategySpec s = StrategySpec::parse(text);
  if (s.name() == "adaptive-poly") {
    s.expect_only({"eps", "levels", "repeat", "episodes"});
    PolyPlan plan = plan_adaptive_poly(s.rational_or("eps", Rational(1, 4)), max_n);
    return adaptive_poly_guarantee(plan, s.integer_or("levels", plan.levels), max_n);
  }
  if (auto recipe = adaptive_recipe<Rational>(s, max_n)) return recipe->guarantee();
  if (auto recipe = oblivious_recipe<Rational>(s, max_n)) return recipe->guarantee();
  return nullptr;
}

#define CUPGAME_REGISTRY(Num)                                                                                     \
  template BuiltFiller<Num> build_filler<Num>(const std::string&, std::size_t, std::uint64_t, std::uint64_t);   \
  template std::unique_ptr<EmptierStrategy<Num>> build_emptier<Num>(const std::string&, std::uint64_t,          \
                                                                    std::uint64_t);                             \
  template std::vector<std::unique_ptr<Monitor<Num>>> build_monitors<Num>(const std::string&, FillSemantics,    \
                                                                          bool);                                \
  template std::vector<Num> build_initial<Num>(const std::string&, std::size_t, std::uint64_t, std::uint64_t);

CUPGAME_REGISTRY(Rational)
CUPGAME_REGISTRY(double)

}  // namespace cupgame
