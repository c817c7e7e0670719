#pragma once

// Experiment plumbing behind the command-line tool: one serializable spec,
// three commands.

#include "cupgame/game.hpp"
#include "cupgame/stats.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cupgame {

using Json = nlohmann::ordered_json;

struct ExperimentSpec {
  std::size_t n = 8;
  std::string semantics = "negative";
  std::uint64_t extra_budget = 0;
  std::optional<std::uint64_t> skip_budget;  // unset: unlimited skips
  std::uint64_t seed = 1;
  std::string arithmetic = "exact";
  std::string filler = "uniform-random";
  std::string emptier = "greedy";
  // Unset: T(n) + 1 for a certified chain (so it can report finishing),
  // capped at 10^6, and 1000 otherwise.
  std::optional<std::uint64_t> rounds;
  std::uint64_t trials = 1;
  std::string monitors;
  bool survey = false;  // monitors log violations instead of stopping the game
  std::string initial = "zeros";
  // Success predicate for montecarlo (and checked by run when set):
  //   target-untouched | <metric> <op> <value>
  // with metric in {backlog, max-backlog, fill-range, mass, target-gain},
  // op in {>=, >, <=, <} and value a rational or -inf / inf.
  // target-gain is fill(target) minus the initial mean.
  std::string predicate;
  std::string trace_path;
  std::string summary_path;
  unsigned threads = 0;  // 0: one per hardware thread

  GameConfig config() const;
  std::uint64_t resolved_rounds() const;
};

Json to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const Json& j);
// Parse errors carry the line and column of the offending byte.
ExperimentSpec spec_from_json_text(const std::string& text);

struct RunReport {
  std::string csv;
  Json summary;
  bool ok = true;  // no strict violation and the predicate (if any) held
};

// Plays trial 0 of the spec. Writes trace_path / summary_path when set.
RunReport cmd_run(const ExperimentSpec& spec);

struct SummaryStats {
  std::uint64_t trials = 0;
  std::vector<Rational> final_backlog;  // per trial
  std::vector<std::uint64_t> rounds_used;
  Rational min, q25, median, q75, max;
  std::uint64_t successes = 0;
  double rate = 0;
  BinomialInterval ci;  // 99% Clopper-Pearson
  std::uint64_t strict_violations = 0;
};

struct MonteCarloReport {
  SummaryStats stats;
  Json summary;
  bool ok = true;  // no strict violation in any trial
};

// Trials are independent: trial t draws every stream from (seed, t), so the
// per-trial results do not depend on the thread count.
MonteCarloReport cmd_montecarlo(const ExperimentSpec& spec);

// f, T and branch for n in [n_min, n_max], with the construction chain.
// Recursion drivers add their parameter plan and a check of their power-law
// claim over `claim_levels` levels.
Json cmd_certify(const std::string& filler, std::size_t n_min, std::size_t n_max, std::size_t claim_levels = 4);

}  // namespace cupgame
