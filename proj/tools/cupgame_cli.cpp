// cupgame run | montecarlo | certify
//
// Exit status: 0 on success, 1 when a strict monitor was violated or the
// predicate failed, 2 on a configuration error.

#include "cupgame/harness.hpp"
#include "cupgame/spec_string.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using cupgame::ExperimentSpec;

struct Flags {
  std::string config;
  std::size_t n = 0;
  std::string semantics, arithmetic, filler, emptier, monitors, initial, predicate, trace, summary;
  std::uint64_t extra = 0, skips = 0, seed = 0, rounds = 0, trials = 0;
  unsigned threads = 0;
  bool survey = false;
};

// Registers the experiment flags; returns the options so set ones can be
// told apart from defaults.
std::map<std::string, CLI::Option*> add_experiment_flags(CLI::App& app, Flags& f) {
  std::map<std::string, CLI::Option*> o;
  o["config"] = app.add_option("--config", f.config, "JSON experiment config; flags given here override it");
  o["n"] = app.add_option("--n", f.n, "number of cups");
  o["semantics"] = app.add_option("--semantics", f.semantics, "negative | standard");
  o["arithmetic"] = app.add_option("--arithmetic", f.arithmetic, "exact | fast");
  o["filler"] = app.add_option("--filler", f.filler, "filler spec string");
  o["emptier"] = app.add_option("--emptier", f.emptier, "emptier spec string");
  o["monitors"] = app.add_option("--monitor", f.monitors, "comma-separated monitor specs");
  o["initial"] = app.add_option("--initial", f.initial, "zeros | list:a,b,.. | linear:R | split:R | random:R");
  o["predicate"] = app.add_option("--predicate", f.predicate, "e.g. backlog>=1, target-untouched");
  o["trace"] = app.add_option("--trace", f.trace, "CSV trace output path");
  o["summary"] = app.add_option("--summary", f.summary, "JSON summary output path");
  o["extra"] = app.add_option("--extra", f.extra, "extra-emptying budget E");
  o["skips"] = app.add_option("--skips", f.skips, "skip budget S (default unlimited)");
  o["seed"] = app.add_option("--seed", f.seed, "master seed");
  o["rounds"] = app.add_option("--rounds", f.rounds, "round budget");
  o["trials"] = app.add_option("--trials", f.trials, "Monte-Carlo trials");
  o["threads"] = app.add_option("--threads", f.threads, "worker threads (0: all cores)");
  o["survey"] = app.add_flag("--survey", f.survey, "log monitor violations instead of stopping");
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cupgame::ConfigError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentSpec resolve_spec(const Flags& f, const std::map<std::string, CLI::Option*>& o) {
  ExperimentSpec s = f.config.empty() ? ExperimentSpec{} : cupgame::spec_from_json_text(read_file(f.config));
  auto set = [&](const char* name) { return o.at(name)->count() > 0; };
  if (set("n")) s.n = f.n;
  if (set("semantics")) s.semantics = f.semantics;
  if (set("arithmetic")) s.arithmetic = f.arithmetic;
  if (set("filler")) s.filler = f.filler;
  if (set("emptier")) s.emptier = f.emptier;
  if (set("monitors")) s.monitors = f.monitors;
  if (set("initial")) s.initial = f.initial;
  if (set("predicate")) s.predicate = f.predicate;
  if (set("trace")) s.trace_path = f.trace;
  if (set("summary")) s.summary_path = f.summary;
  if (set("extra")) s.extra_budget = f.extra;
  if (set("skips")) s.skip_budget = f.skips;
  if (set("seed")) s.seed = f.seed;
  if (set("rounds")) s.rounds = f.rounds;
  if (set("trials")) s.trials = f.trials;
  if (set("threads")) s.threads = f.threads;
  if (set("survey")) s.survey = f.survey;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-processor cup game simulator"};
  app.require_subcommand(1);

  Flags run_flags, mc_flags;
  CLI::App* run = app.add_subcommand("run", "play one game and emit its trace and summary");
  auto run_opts = add_experiment_flags(*run, run_flags);
  CLI::App* mc = app.add_subcommand("montecarlo", "play independent seeded trials and aggregate");
  auto mc_opts = add_experiment_flags(*mc, mc_flags);

  CLI::App* certify = app.add_subcommand("certify", "print the certified f and T tables of a construction");
  std::string cert_filler, cert_config;
  std::size_t cert_n = 0, cert_min = 1, cert_max = 0, claim_levels = 4;
  certify->add_option("--config", cert_config, "JSON with filler, n_min, n_max, claim_levels");
  auto* cert_filler_opt = certify->add_option("--filler", cert_filler, "constructed filler spec");
  auto* cert_n_opt = certify->add_option("--n", cert_n, "single size (same as --n-min N --n-max N)");
  auto* cert_min_opt = certify->add_option("--n-min", cert_min, "smallest size");
  auto* cert_max_opt = certify->add_option("--n-max", cert_max, "largest size");
  auto* claim_opt = certify->add_option("--claim-levels", claim_levels, "levels for the power-law claim check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cupgame::RunReport report = cupgame::cmd_run(resolve_spec(run_flags, run_opts));
      if (run_flags.summary.empty() && report.summary["config"]["summary_path"] == "") {
        std::cout << report.summary.dump(2) << "\n";
      }
      return report.ok ? 0 : 1;
    }
    if (*mc) {
      cupgame::MonteCarloReport report = cupgame::cmd_montecarlo(resolve_spec(mc_flags, mc_opts));
      if (report.summary["config"]["summary_path"] == "") std::cout << report.summary.dump(2) << "\n";
      // The predicate is a success-rate report here, so only strict
      // violations fail the command.
      return report.ok ? 0 : 1;
    }
    std::string filler;
    std::size_t lo = 1, hi = 0, levels = 4;
    if (!cert_config.empty()) {
      const std::string text = read_file(cert_config);
      cupgame::Json j;
      try {
        j = cupgame::Json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = cupgame::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw cupgame::SpecError(std::string("invalid JSON config: ") + e.what(), line, column);
      }
      filler = j.value("filler", "");
      lo = j.value("n_min", std::size_t{1});
      hi = j.value("n_max", std::size_t{0});
      levels = j.value("claim_levels", std::size_t{4});
    }
    if (cert_filler_opt->count()) filler = cert_filler;
    if (cert_min_opt->count()) lo = cert_min;
    if (cert_max_opt->count()) hi = cert_max;
    if (cert_n_opt->count()) lo = hi = cert_n;
    if (claim_opt->count()) levels = claim_levels;
    if (filler.empty()) throw cupgame::ConfigError("certify needs --filler");
    if (hi == 0) hi = lo;
    std::cout << cupgame::cmd_certify(filler, lo, hi, levels).dump(2) << "\n";
    return 0;
  } catch (const cupgame::GameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
