#include "cupgame/harness.hpp"

#include "cupgame/adaptive.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/oblivious.hpp"
#include "cupgame/registry.hpp"
#include "cupgame/spec_string.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace cupgame {

GameConfig ExperimentSpec::config() const {
  GameConfig cfg;
  cfg.n = n;
  cfg.semantics = parse_semantics(semantics);
  cfg.extra_budget = extra_budget;
  cfg.skip_budget = skip_budget;
  cfg.seed = seed;
  cfg.arithmetic = parse_arithmetic(arithmetic);
  cfg.validate();
  return cfg;
}

std::uint64_t ExperimentSpec::resolved_rounds() const {
  if (rounds) return *rounds;
  constexpr std::uint64_t cap = 1'000'000;
  GuaranteePtr g = filler_guarantee(filler, n);
  if (!g) return 1000;
  const BigInt t = g->T(n) + 1;
  return t > cap ? cap : t.get_ui();
}

Json to_json(const ExperimentSpec& s) {
  Json j;
  j["n"] = s.n;
  j["semantics"] = s.semantics;
  j["extra_budget"] = s.extra_budget;
  j["skip_budget"] = s.skip_budget ? Json(*s.skip_budget) : Json(nullptr);
  j["seed"] = s.seed;
  j["arithmetic"] = s.arithmetic;
  j["filler"] = s.filler;
  j["emptier"] = s.emptier;
  j["rounds"] = s.rounds ? Json(*s.rounds) : Json(nullptr);
  j["trials"] = s.trials;
  j["monitors"] = s.monitors;
  j["survey"] = s.survey;
  j["initial"] = s.initial;
  j["predicate"] = s.predicate;
  j["trace_path"] = s.trace_path;
  j["summary_path"] = s.summary_path;
  j["threads"] = s.threads;
  return j;
}

ExperimentSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentSpec s;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "n") s.n = v.get<std::size_t>();
      else if (key == "semantics") s.semantics = v.get<std::string>();
      else if (key == "extra_budget") s.extra_budget = v.get<std::uint64_t>();
      else if (key == "skip_budget") s.skip_budget = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "arithmetic") s.arithmetic = v.get<std::string>();
      else if (key == "filler") s.filler = v.get<std::string>();
      else if (key == "emptier") s.emptier = v.get<std::string>();
      else if (key == "rounds") s.rounds = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
      else if (key == "trials") s.trials = v.get<std::uint64_t>();
      else if (key == "monitors") s.monitors = v.get<std::string>();
      else if (key == "survey") s.survey = v.get<bool>();
      else if (key == "initial") s.initial = v.get<std::string>();
      else if (key == "predicate") s.predicate = v.get<std::string>();
      else if (key == "trace_path") s.trace_path = v.get<std::string>();
      else if (key == "summary_path") s.summary_path = v.get<std::string>();
      else if (key == "threads") s.threads = v.get<unsigned>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return s;
}

ExperimentSpec spec_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SpecError(std::string("invalid JSON config: ") + e.what(), line, column);
  }
  return spec_from_json(j);
}

namespace {

struct Predicate {
  enum class Kind { always, untouched, compare } kind = Kind::always;
  std::string metric;
  std::string op;
  std::optional<Rational> value;  // nullopt with infinite = -1/+1 encodes -inf/inf
  int infinite = 0;

  static Predicate parse(const std::string& text) {
    Predicate p;
    if (text.empty()) return p;
    if (text == "target-untouched") {
      p.kind = Kind::untouched;
      return p;
    }
    const std::size_t at = text.find_first_of("<>");
    if (at == std::string::npos || at == 0) throw SpecError("predicate needs <metric><op><value>", 1, 1);
    p.kind = Kind::compare;
    p.metric = text.substr(0, at);
    std::size_t vpos = at + 1;
    if (vpos < text.size() && text[vpos] == '=') ++vpos;
    p.op = text.substr(at, vpos - at);
    if (p.metric != "backlog" && p.metric != "max-backlog" && p.metric != "fill-range" && p.metric != "mass" &&
        p.metric != "target-gain") {
      throw SpecError("unknown predicate metric '" + p.metric + "'", 1, 1);
    }
    const std::string v = text.substr(vpos);
    if (v == "-inf") {
      p.infinite = -1;
    } else if (v == "inf" || v == "+inf") {
      p.infinite = 1;
    } else {
      try {
        p.value = parse_rational(v);
      } catch (const ConfigError& e) {
        throw SpecError(std::string("bad predicate value: ") + e.what(), 1, vpos + 1);
      }
    }
    return p;
  }

  bool compare(const Rational& x) const {
    int sign;  // sign of x - value
    if (infinite != 0) {
      sign = -infinite;
    } else {
      sign = cmp(x, *value);
      sign = sign > 0 ? 1 : (sign < 0 ? -1 : 0);
    }
    if (op == ">=") return sign >= 0;
    if (op == ">") return sign > 0;
    if (op == "<=") return sign <= 0;
    return sign < 0;
  }

  template <class Num>
  bool holds(const GameResult<Num>& r) const {
    switch (kind) {
      case Kind::always:
        return true;
      case Kind::untouched:
        return r.target && !r.touched[*r.target];
      case Kind::compare:
        break;
    }
    if (metric == "backlog") return compare(Rational(r.final_state.backlog()));
    if (metric == "max-backlog") return compare(Rational(r.max_backlog));
    if (metric == "fill-range") return compare(Rational(r.final_state.fill_range()));
    if (metric == "mass") return compare(Rational(r.final_state.mass()));
    if (!r.target) return false;
    return compare(Rational(r.final_state.fill(*r.target) - r.initial_state.mean_fill()));
  }
};

template <class Num>
struct Trial {
  GameResult<Num> result;
  bool strict_violation = false;
  bool predicate = true;
};

template <class Num>
Trial<Num> play_trial(const ExperimentSpec& spec, const GameConfig& cfg, std::uint64_t rounds,
                      const Predicate& predicate, std::uint64_t trial, bool record_trace) {
  BuiltFiller<Num> filler = build_filler<Num>(spec.filler, spec.n, spec.seed, trial);
  auto emptier = build_emptier<Num>(spec.emptier, spec.seed, trial);
  auto owned = build_monitors<Num>(spec.monitors, cfg.semantics, !spec.survey);
  std::vector<Monitor<Num>*> monitors;
  for (auto& m : owned) monitors.push_back(m.get());

  RunOptions<Num> options;
  options.initial_fills = build_initial<Num>(spec.initial, spec.n, spec.seed, trial);
  options.repeat = filler.repeat;
  options.record_trace = record_trace;

  Trial<Num> out;
  out.result = run_game<Num>(cfg, *filler.filler, *emptier, rounds, monitors, options);
  for (const InvariantVerdict& v : out.result.verdicts) {
    out.strict_violation = out.strict_violation || (v.strict && v.status == VerdictStatus::violated);
  }
  out.predicate = predicate.holds(out.result);
  return out;
}

Json verdict_json(const InvariantVerdict& v) {
  Json j;
  j["monitor"] = v.monitor;
  j["status"] = to_string(v.status);
  j["strict"] = v.strict;
  j["checks"] = v.checks;
  if (v.first) {
    j["first"] = {{"round", v.first->round}, {"k", v.first->k}, {"lhs", v.first->lhs},
                  {"rhs", v.first->rhs},     {"note", v.first->note}};
  } else {
    j["first"] = nullptr;
  }
  return j;
}

template <class Num>
std::string trace_csv(const std::vector<RoundTrace<Num>>& trace) {
  using T = NumTraits<Num>;
  std::ostringstream out;
  out << "round,p,backlog,anti_backlog,mass,fill_range,zeroed,neglect\n";
  for (const RoundTrace<Num>& r : trace) {
    out << r.round << ',' << r.p << ',' << T::format(r.backlog) << ',' << T::format(r.anti_backlog) << ','
        << T::format(r.mass) << ',' << T::format(r.fill_range) << ',' << r.zeroed << ',' << (r.neglect ? 1 : 0)
        << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

template <class Num>
RunReport run_typed(const ExperimentSpec& spec) {
  using T = NumTraits<Num>;
  const GameConfig cfg = spec.config();
  const std::uint64_t rounds = spec.resolved_rounds();
  const Predicate predicate = Predicate::parse(spec.predicate);
  Trial<Num> trial = play_trial<Num>(spec, cfg, rounds, predicate, 0, true);
  const GameResult<Num>& r = trial.result;

  RunReport report;
  report.csv = trace_csv(r.trace);
  Json& j = report.summary;
  j["config"] = to_json(spec);
  j["seed"] = spec.seed;
  j["rounds"] = rounds;
  j["rounds_played"] = r.rounds_played;
  j["filler_finished"] = r.filler_finished;
  j["episodes"] = r.episodes;
  j["aborted"] = r.aborted;
  j["final"] = {{"backlog", T::format(r.final_state.backlog())},
                {"anti_backlog", T::format(r.final_state.anti_backlog())},
                {"mass", T::format(r.final_state.mass())},
                {"mean_fill", T::format(r.final_state.mean_fill())},
                {"fill_range", T::format(r.final_state.fill_range())}};
  j["backlog"] = T::format(r.final_state.backlog());
  j["max_backlog"] = T::format(r.max_backlog);
  if (r.target) {
    j["target"] = {{"cup", *r.target},
                   {"fill", T::format(r.final_state.fill(*r.target))},
                   {"touched", static_cast<bool>(r.touched[*r.target])}};
  } else {
    j["target"] = nullptr;
  }
  j["neglected_rounds"] = r.neglected_rounds;
  Json verdicts = Json::array();
  for (const InvariantVerdict& v : r.verdicts) verdicts.push_back(verdict_json(v));
  j["verdicts"] = verdicts;
  if (!spec.predicate.empty()) j["predicate"] = {{"text", spec.predicate}, {"holds", trial.predicate}};
  report.ok = !trial.strict_violation && trial.predicate;
  j["ok"] = report.ok;

  if (!spec.trace_path.empty()) write_file(spec.trace_path, report.csv);
  if (!spec.summary_path.empty()) write_file(spec.summary_path, report.summary.dump(2) + "\n");
  return report;
}

template <class Num>
MonteCarloReport montecarlo_typed(const ExperimentSpec& spec) {
  const GameConfig cfg = spec.config();
  const std::uint64_t rounds = spec.resolved_rounds();
  const Predicate predicate = Predicate::parse(spec.predicate);
  const std::uint64_t trials = spec.trials;

  struct Row {
    Rational backlog;
    std::uint64_t rounds = 0;
    bool success = false;
    bool violation = false;
  };
  std::vector<Row> rows(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t t = next++; t < trials; t = next++) {
      try {
        Trial<Num> tr = play_trial<Num>(spec, cfg, rounds, predicate, t, false);
        rows[t] = Row{Rational(tr.result.final_state.backlog()), tr.result.rounds_played, tr.predicate,
                      tr.strict_violation};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloReport report;
  SummaryStats& s = report.stats;
  s.trials = trials;
  for (const Row& row : rows) {
    s.final_backlog.push_back(row.backlog);
    s.rounds_used.push_back(row.rounds);
    s.successes += row.success ? 1 : 0;
    s.strict_violations += row.violation ? 1 : 0;
  }
  s.min = quantile(s.final_backlog, 0);
  s.q25 = quantile(s.final_backlog, Rational(1, 4));
  s.median = median(s.final_backlog);
  s.q75 = quantile(s.final_backlog, Rational(3, 4));
  s.max = quantile(s.final_backlog, 1);
  s.rate = static_cast<double>(s.successes) / static_cast<double>(trials);
  s.ci = clopper_pearson(s.successes, trials);
  report.ok = s.strict_violations == 0;

  Json& j = report.summary;
  j["config"] = to_json(spec);
  j["seed"] = spec.seed;
  j["rounds"] = rounds;
  j["trials"] = trials;
  j["final_backlog"] = {{"min", format_rational(s.min)},
                        {"q25", format_rational(s.q25)},
                        {"median", format_rational(s.median)},
                        {"q75", format_rational(s.q75)},
                        {"max", format_rational(s.max)}};
  std::uint64_t total_rounds = 0;
  for (std::uint64_t r : s.rounds_used) total_rounds += r;
  j["rounds_used"] = total_rounds;
  j["predicate"] = {{"text", spec.predicate.empty() ? "true" : spec.predicate},
                    {"successes", s.successes},
                    {"rate", s.rate},
                    {"ci99", {s.ci.lower, s.ci.upper}}};
  j["strict_violations"] = s.strict_violations;
  Json per_trial = Json::array();
  for (const Rational& b : s.final_backlog) per_trial.push_back(format_rational(b));
  j["per_trial_backlog"] = per_trial;
  j["ok"] = report.ok;
  if (!spec.summary_path.empty()) write_file(spec.summary_path, j.dump(2) + "\n");
  return report;
}

}  // namespace

RunReport cmd_run(const ExperimentSpec& spec) {
  return spec.config().arithmetic == Arithmetic::exact ? run_typed<Rational>(spec) : run_typed<double>(spec);
}

MonteCarloReport cmd_montecarlo(const ExperimentSpec& spec) {
  if (spec.trials == 0) throw ConfigError("montecarlo needs trials >= 1");
  return spec.config().arithmetic == Arithmetic::exact ? montecarlo_typed<Rational>(spec)
                                                       : montecarlo_typed<double>(spec);
}

Json cmd_certify(const std::string& filler, std::size_t n_min, std::size_t n_max, std::size_t claim_levels) {
  if (n_min < 1 || n_max < n_min) throw ConfigError("certify needs 1 <= n_min <= n_max");
  GuaranteePtr g = filler_guarantee(filler, n_max);
  if (!g) throw ConfigError("'" + filler + "' is not a constructed chain and has no certified curve");

  Json j;
  j["filler"] = filler;
  j["construction"] = g->provenance();
  j["oblivious"] = g->oblivious();
  j["depth"] = g->depth();
  if (g->depth() > 0) j["delta"] = format_rational(g->delta());
  if (!g->failure_bound().empty()) j["failure_bound"] = g->failure_bound();
  Json table = Json::array();
  for (std::size_t n = n_min; n <= n_max; ++n) {
    table.push_back({{"n", n}, {"f", format_rational(g->f(n))}, {"T", g->T(n).get_str()},
                     {"branch", to_string(g->branch(n))}});
  }
  j["table"] = table;

  const StrategySpec s = StrategySpec::parse(filler);
  if (s.name() == "adaptive-poly") {
    const PolyPlan plan = plan_adaptive_poly(s.rational_or("eps", Rational(1, 4)), n_max);
    const std::vector<BigInt> gs = g_sequence(plan.g0, plan.delta, claim_levels);
    Json gj = Json::array();
    for (const BigInt& v : gs) gj.push_back(v.get_str());
    const ClaimCheck claim = check_adaptive_poly_claim(plan, claim_levels);
    j["plan"] = {{"eps", format_rational(plan.eps)},
                 {"delta", format_rational(plan.delta)},
                 {"levels", s.integer_or("levels", plan.levels)},
                 {"g0", plan.g0.get_str()},
                 {"g", gj},
                 {"claim_constant_pow", format_rational(adaptive_poly_claim_constant_pow(plan))}};
    j["claim"] = {{"statement", "f_i(k) >= c k^(1-eps) - 1 for k <= g_i"},
                  {"levels_checked", claim_levels},
                  {"holds", claim.holds},
                  {"checked", claim.checked}};
    if (!claim.holds) j["claim"]["first_failure"] = {{"level", claim.level}, {"k", claim.k}};
  } else if (s.name() == "oblivious-poly") {
    const ObliviousBaseParams bp = resolve(oblivious_base_params(s, "base_"));
    const std::size_t nb = s.integer_or("nb", bp.n_b ? bp.n_b : oblivious_base_min_size(bp));
    std::optional<std::size_t> levels;
    if (auto l = s.integer("levels")) levels = *l;
    const ObliviousPolyPlan plan =
        plan_oblivious_poly(s.rational_or("eps", Rational(1, 4)), n_max, nb, s.rational("delta"), levels);
    const ObliviousClaim claim = check_oblivious_poly_claim(plan, bp, n_max);
    j["plan"] = {{"eps", format_rational(plan.eps)},
                 {"delta", format_rational(plan.delta)},
                 {"levels", plan.levels},
                 {"n_b", plan.n_b},
                 {"g0", plan.g0.get_str()}};
    j["claim"] = {{"statement", "f_i(k) >= (k/n_b)^(1-eps) - 1 on the pure recurrence"},
                  {"holds", claim.holds},
                  {"checked", claim.checked}};
    if (!claim.holds) j["claim"]["first_failure"] = {{"level", claim.level}, {"k", claim.k}};
  }
  return j;
}

}  // namespace cupgame
