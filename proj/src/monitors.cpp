#include "cupgame/monitors.hpp"

#include <algorithm>

namespace cupgame {

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds: return "holds";
    case VerdictStatus::violated: return "violated";
    case VerdictStatus::triggered: return "triggered";
  }
  return "?";
}

namespace {

template <class Num>
std::string fmt(const Num& v) {
  return NumTraits<Num>::format(v);
}

// First k where the top-k prefix sum exceeds k(2n - k), if any.
template <class Num>
std::optional<Violation> greedy_prefix_violation(const CupState<Num>& state) {
  const std::size_t n = state.size();
  std::vector<const Num*> order;
  order.reserve(n);
  for (const Num& f : state.fills()) order.push_back(&f);
  std::sort(order.begin(), order.end(), [](const Num* a, const Num* b) { return *a > *b; });
  Num prefix = NumTraits<Num>::integer(0);
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += *order[k - 1];
    const long bound = static_cast<long>(k) * (2 * static_cast<long>(n) - static_cast<long>(k));
    if (prefix > NumTraits<Num>::integer(bound)) {
      Violation v;
      v.round = state.round();
      v.k = k;
      v.lhs = fmt(Num(prefix / NumTraits<Num>::integer(static_cast<long>(k))));
      v.rhs = std::to_string(2 * n - k);
      v.note = "mean of the k fullest cups exceeds 2n - k";
      return v;
    }
  }
  return std::nullopt;
}

void record(InvariantVerdict& v, std::optional<Violation> found, VerdictStatus on_hit) {
  ++v.checks;
  if (found && !v.first) {
    v.first = std::move(found);
    v.status = on_hit;
  }
}

template <class Num>
class GreedyInvariantMonitor final : public Monitor<Num> {
 public:
  explicit GreedyInvariantMonitor(bool strict) : Monitor<Num>(strict) {
    verdict_.monitor = "greedy-invariant";
    verdict_.strict = strict;
  }
  void observe_start(const CupState<Num>& state) override {
    record(verdict_, greedy_prefix_violation(state), VerdictStatus::violated);
  }
  void observe_round(const RoundRecord<Num>& r) override {
    record(verdict_, greedy_prefix_violation(r.after), VerdictStatus::violated);
  }
  InvariantVerdict verdict() const override { return verdict_; }

 private:
  InvariantVerdict verdict_;
};

template <class Num>
std::optional<Violation> flatness_violation(const CupState<Num>& state, const Num& R) {
  Num range = state.fill_range();
  if (!(range > R)) return std::nullopt;
  Violation v;
  v.round = state.round();
  v.lhs = fmt(range);
  v.rhs = fmt(R);
  v.note = "fill-range exceeds R";
  return v;
}

template <class Num>
class FlatnessMonitor final : public Monitor<Num> {
 public:
  FlatnessMonitor(const Rational& R, bool strict) : Monitor<Num>(strict), R_(NumTraits<Num>::from(R)) {
    verdict_.monitor = "flatness:R=" + format_rational(R);
    verdict_.strict = strict;
  }
  void observe_start(const CupState<Num>& state) override {
    record(verdict_, flatness_violation(state, R_), VerdictStatus::violated);
  }
  void observe_round(const RoundRecord<Num>& r) override {
    record(verdict_, flatness_violation(r.after, R_), VerdictStatus::violated);
  }
  InvariantVerdict verdict() const override { return verdict_; }

 private:
  Num R_;
  InvariantVerdict verdict_;
};

template <class Num>
std::optional<Violation> escape_event(const CupState<Num>& state, std::size_t N) {
  Num mass = state.mass();
  const long goal = static_cast<long>(N * N);
  if (mass < NumTraits<Num>::integer(goal)) return std::nullopt;
  Violation v;
  v.round = state.round();
  v.lhs = fmt(mass);
  v.rhs = std::to_string(goal);
  v.note = "mass reached N^2";
  return v;
}

template <class Num>
class MassEscapeMonitor final : public Monitor<Num> {
 public:
  explicit MassEscapeMonitor(std::size_t N) : Monitor<Num>(false), N_(N) {
    verdict_.monitor = "mass-escape:N=" + std::to_string(N);
    verdict_.strict = false;
  }
  void observe_start(const CupState<Num>& state) override {
    record(verdict_, escape_event(state, N_), VerdictStatus::triggered);
  }
  void observe_round(const RoundRecord<Num>& r) override {
    record(verdict_, escape_event(r.after, N_), VerdictStatus::triggered);
  }
  InvariantVerdict verdict() const override { return verdict_; }

 private:
  std::size_t N_;
  InvariantVerdict verdict_;
};

// Water the emptier really removes from a cup holding `fill`.
template <class Num>
Num removal(const Num& fill, FillSemantics semantics) {
  const Num one = NumTraits<Num>::integer(1);
  if (semantics == FillSemantics::negative) return one;
  const Num zero = NumTraits<Num>::integer(0);
  if (fill <= zero) return zero;
  return fill < one ? fill : one;
}

template <class Num>
class ConservationMonitor final : public Monitor<Num> {
 public:
  ConservationMonitor(FillSemantics semantics, bool strict) : Monitor<Num>(strict), semantics_(semantics) {
    verdict_.monitor = "conservation";
    verdict_.strict = strict;
  }
  void observe_start(const CupState<Num>& state) override { mass_ = state.mass(); }
  void observe_round(const RoundRecord<Num>& r) override {
    for (const auto& entry : r.fill.per_cup) mass_ += entry.second;
    for (CupId c : r.empty.cups) mass_ -= removal(r.intermediate->fill(c), semantics_);
    Num actual = r.after.mass();
    std::optional<Violation> found;
    if (actual != mass_) {
      Violation v;
      v.round = r.round;
      v.lhs = fmt(actual);
      v.rhs = fmt(mass_);
      v.note = "state mass differs from the mass derived from the move log";
      found = v;
      mass_ = actual;
    }
    record(verdict_, std::move(found), VerdictStatus::violated);
  }
  InvariantVerdict verdict() const override { return verdict_; }
  bool wants_intermediate() const override { return true; }

 private:
  FillSemantics semantics_;
  Num mass_{};
  InvariantVerdict verdict_;
};

template <class Num>
class DeltaGreedyMonitor final : public Monitor<Num> {
 public:
  DeltaGreedyMonitor(const Rational& delta, bool strict) : Monitor<Num>(strict), delta_(delta) {
    verdict_.monitor = "delta-greedy:delta=" + format_rational(delta);
    verdict_.strict = strict;
  }
  void observe_round(const RoundRecord<Num>& r) override {
    std::optional<Violation> found;
    // Fullest unemptied vs emptiest emptied cup at I_t.
    const CupState<Num>& mid = *r.intermediate;
    std::optional<CupId> high, low;
    for (CupId c = 0; c < mid.size(); ++c) {
      const Num& f = mid.fill(c);
      if (r.empty.contains(c)) {
        if (!low || f < mid.fill(*low)) low = c;
      } else if (!high || f > mid.fill(*high)) {
        high = c;
      }
    }
    if (high && low) {
      Num gap = mid.fill(*high) - mid.fill(*low);
      if (gap > NumTraits<Num>::from(delta_)) {
        Violation v;
        v.round = r.round;
        v.k = *high;
        v.lhs = fmt(gap);
        v.rhs = format_rational(delta_);
        v.note = "cup " + std::to_string(*low) + " emptied while cup " + std::to_string(*high) +
                 " was fuller by more than delta";
        found = v;
      }
    }
    record(verdict_, std::move(found), VerdictStatus::violated);
  }
  InvariantVerdict verdict() const override { return verdict_; }
  bool wants_intermediate() const override { return true; }

 private:
  Rational delta_;
  InvariantVerdict verdict_;
};

}  // namespace

template <class Num>
InvariantVerdict check_greedy_invariants(const CupState<Num>& state) {
  InvariantVerdict v;
  v.monitor = "greedy-invariant";
  record(v, greedy_prefix_violation(state), VerdictStatus::violated);
  return v;
}

template <class Num>
InvariantVerdict check_flatness(const CupState<Num>& state, const Rational& R) {
  InvariantVerdict v;
  v.monitor = "flatness:R=" + format_rational(R);
  record(v, flatness_violation(state, NumTraits<Num>::from(R)), VerdictStatus::violated);
  return v;
}

template <class Num>
InvariantVerdict check_mass_escape(const CupState<Num>& state, std::size_t N) {
  InvariantVerdict v;
  v.monitor = "mass-escape:N=" + std::to_string(N);
  v.strict = false;
  record(v, escape_event(state, N), VerdictStatus::triggered);
  return v;
}

template <class Num>
InvariantVerdict check_conservation(const GameConfig& cfg, const CupState<Num>& initial,
                                    const std::vector<FillMove<Num>>& fills,
                                    const std::vector<EmptyMove>& empties) {
  if (fills.size() != empties.size()) throw ConfigError("move logs of different lengths");
  ConservationMonitor<Num> monitor(cfg.semantics, true);
  CupState<Num> state = initial;
  monitor.observe_start(state);
  for (std::size_t t = 0; t < fills.size(); ++t) {
    const std::uint64_t round = state.round();
    apply_fill_in_place(cfg, state, fills[t]);
    CupState<Num> intermediate = state;
    EmptyOutcome<Num> outcome = apply_empty_in_place(cfg, state, empties[t]);
    monitor.observe_round(RoundRecord<Num>{round, &intermediate, state, fills[t], empties[t], outcome});
  }
  return monitor.verdict();
}

template <class Num>
std::unique_ptr<Monitor<Num>> make_greedy_invariant_monitor(bool strict) {
  return std::make_unique<GreedyInvariantMonitor<Num>>(strict);
}
template <class Num>
std::unique_ptr<Monitor<Num>> make_flatness_monitor(const Rational& R, bool strict) {
  return std::make_unique<FlatnessMonitor<Num>>(R, strict);
}
template <class Num>
std::unique_ptr<Monitor<Num>> make_mass_escape_monitor(std::size_t N) {
  return std::make_unique<MassEscapeMonitor<Num>>(N);
}
template <class Num>
std::unique_ptr<Monitor<Num>> make_conservation_monitor(FillSemantics semantics, bool strict) {
  return std::make_unique<ConservationMonitor<Num>>(semantics, strict);
}
template <class Num>
std::unique_ptr<Monitor<Num>> make_delta_greedy_monitor(const Rational& delta, bool strict) {
  return std::make_unique<DeltaGreedyMonitor<Num>>(delta, strict);
}

#define CUPGAME_MONITORS(Num)                                                                           \
  template InvariantVerdict check_greedy_invariants<Num>(const CupState<Num>&);                         \
  template InvariantVerdict check_flatness<Num>(const CupState<Num>&, const Rational&);                 \
  template InvariantVerdict check_mass_escape<Num>(const CupState<Num>&, std::size_t);                  \
  template InvariantVerdict check_conservation<Num>(const GameConfig&, const CupState<Num>&,            \
                                                    const std::vector<FillMove<Num>>&,                  \
                                                    const std::vector<EmptyMove>&);                     \
  template std::unique_ptr<Monitor<Num>> make_greedy_invariant_monitor<Num>(bool);                      \
  template std::unique_ptr<Monitor<Num>> make_flatness_monitor<Num>(const Rational&, bool);             \
  template std::unique_ptr<Monitor<Num>> make_mass_escape_monitor<Num>(std::size_t);                    \
  template std::unique_ptr<Monitor<Num>> make_conservation_monitor<Num>(FillSemantics, bool);           \
  template std::unique_ptr<Monitor<Num>> make_delta_greedy_monitor<Num>(const Rational&, bool);

CUPGAME_MONITORS(Rational)
CUPGAME_MONITORS(double)

}  // namespace cupgame
