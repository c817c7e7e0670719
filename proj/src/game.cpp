#include "cupgame/game.hpp"

#include <algorithm>
#include <numeric>

namespace cupgame {

std::string to_string(FillSemantics s) {
  return s == FillSemantics::standard ? "standard" : "negative";
}

std::string to_string(Arithmetic a) { return a == Arithmetic::exact ? "exact" : "fast"; }

FillSemantics parse_semantics(std::string_view s) {
  if (s == "standard" || s == "standard-fill") return FillSemantics::standard;
  if (s == "negative" || s == "negative-fill") return FillSemantics::negative;
  throw ConfigError("unknown fill semantics: " + std::string(s));
}

Arithmetic parse_arithmetic(std::string_view s) {
  if (s == "exact") return Arithmetic::exact;
  if (s == "fast" || s == "float") return Arithmetic::fast;
  throw ConfigError("unknown arithmetic mode: " + std::string(s));
}

void GameConfig::validate() const {
  if (n == 0) throw ConfigError("game needs at least one cup");
}

EmptyMove EmptyMove::select(std::vector<CupId> cups, std::size_t p) {
  std::sort(cups.begin(), cups.end());
  EmptyMove move;
  move.skipped = cups.size() < p ? p - cups.size() : 0;
  move.cups = std::move(cups);
  return move;
}

bool EmptyMove::contains(CupId c) const {
  return std::binary_search(cups.begin(), cups.end(), c);
}

template <class Num>
CupState<Num>::CupState(std::size_t n) : fills_(n, NumTraits<Num>::integer(0)) {}

template <class Num>
CupState<Num>::CupState(std::vector<Num> fills) : fills_(std::move(fills)) {}

template <class Num>
Num CupState<Num>::backlog() const {
  if (fills_.empty()) throw EmptySet("backlog of an empty game");
  return *std::max_element(fills_.begin(), fills_.end());
}

template <class Num>
Num CupState<Num>::anti_backlog() const {
  if (fills_.empty()) throw EmptySet("anti-backlog of an empty game");
  return *std::min_element(fills_.begin(), fills_.end());
}

template <class Num>
Num CupState<Num>::fill_range() const {
  auto [lo, hi] = std::minmax_element(fills_.begin(), fills_.end());
  if (lo == fills_.end()) throw EmptySet("fill-range of an empty game");
  return Num(*hi - *lo);
}

template <class Num>
Num CupState<Num>::mass() const {
  Num total = NumTraits<Num>::integer(0);
  for (const Num& f : fills_) total += f;
  return total;
}

template <class Num>
Num CupState<Num>::mean_fill() const {
  if (fills_.empty()) throw EmptySet("mean fill of an empty game");
  return Num(mass() / NumTraits<Num>::integer(static_cast<long>(fills_.size())));
}

template <class Num>
Num CupState<Num>::mass(std::span<const CupId> cups) const {
  if (cups.empty()) throw EmptySet("mass of an empty cup set");
  Num total = NumTraits<Num>::integer(0);
  for (CupId c : cups) total += fills_.at(c);
  return total;
}

template <class Num>
Num CupState<Num>::mean_fill(std::span<const CupId> cups) const {
  return Num(mass(cups) / NumTraits<Num>::integer(static_cast<long>(cups.size())));
}

template <class Num>
Num CupState<Num>::fill_range(std::span<const CupId> cups) const {
  if (cups.empty()) throw EmptySet("fill-range of an empty cup set");
  const Num* lo = &fills_.at(cups.front());
  const Num* hi = lo;
  for (CupId c : cups) {
    const Num& f = fills_.at(c);
    if (f < *lo) lo = &f;
    if (*hi < f) hi = &f;
  }
  return Num(*hi - *lo);
}

template <class Num>
bool CupState<Num>::ranks_before(CupId a, CupId b) const {
  const Num& fa = fills_[a];
  const Num& fb = fills_[b];
  if (fa != fb) return fa > fb;
  return a < b;
}

template <class Num>
std::vector<CupId> CupState<Num>::ranking() const {
  std::vector<CupId> order(fills_.size());
  std::iota(order.begin(), order.end(), CupId{0});
  std::sort(order.begin(), order.end(), [this](CupId a, CupId b) { return ranks_before(a, b); });
  return order;
}

template <class Num>
CupId CupState<Num>::rank(std::size_t r) const {
  if (r == 0 || r > fills_.size()) throw ConfigError("rank out of range");
  std::vector<CupId> order(fills_.size());
  std::iota(order.begin(), order.end(), CupId{0});
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r - 1), order.end(),
                   [this](CupId a, CupId b) { return ranks_before(a, b); });
  return order[r - 1];
}

template <class Num>
std::vector<CupId> CupState<Num>::ranked_set(std::span<const std::size_t> ranks) const {
  const std::vector<CupId> order = ranking();
  std::vector<CupId> out;
  out.reserve(ranks.size());
  for (std::size_t r : ranks) {
    if (r == 0 || r > order.size()) throw ConfigError("rank out of range");
    out.push_back(order[r - 1]);
  }
  return out;
}

template <class Num>
std::vector<CupId> CupState<Num>::top(std::size_t k) const {
  if (k > fills_.size()) throw ConfigError("top-k larger than the game");
  std::vector<CupId> order(fills_.size());
  std::iota(order.begin(), order.end(), CupId{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [this](CupId a, CupId b) { return ranks_before(a, b); });
  order.resize(k);
  return order;
}

template <class Num>
void validate_fill(const GameConfig& cfg, const FillMove<Num>& move) {
  if (move.p < 1 || move.p > cfg.n) {
    throw InvalidFill("processor count " + std::to_string(move.p) + " outside [1, " +
                      std::to_string(cfg.n) + "]");
  }
  std::vector<bool> seen(cfg.n, false);
  Num total = NumTraits<Num>::integer(0);
  const Num zero = NumTraits<Num>::integer(0);
  Num one = NumTraits<Num>::integer(1);
  Num cap = NumTraits<Num>::integer(static_cast<long>(move.p));
  if constexpr (!NumTraits<Num>::exact) {
    // Shares such as p/|B| do not sum back to p exactly in floating point.
    one += 1e-12;
    cap += 1e-9 * static_cast<double>(move.p);
  }
  for (const auto& [cup, amount] : move.per_cup) {
    if (cup >= cfg.n) throw InvalidFill("fill targets unknown cup " + std::to_string(cup));
    if (seen[cup]) throw DuplicateCup("fill names cup " + std::to_string(cup) + " twice");
    seen[cup] = true;
    if (amount < zero || amount > one) {
      throw InvalidFill("amount " + NumTraits<Num>::format(amount) + " for cup " +
                        std::to_string(cup) + " outside [0, 1]");
    }
    total += amount;
  }
  if (total > cap) {
    throw InvalidFill("fill total " + NumTraits<Num>::format(total) + " exceeds p = " +
                      std::to_string(move.p));
  }
}

template <class Num>
void apply_fill_in_place(const GameConfig& cfg, CupState<Num>& state, const FillMove<Num>& move) {
  if (state.phase_ != Phase::start) throw PhaseError("apply_fill outside the start phase");
  if (state.size() != cfg.n) throw ConfigError("state size does not match the configuration");
  validate_fill(cfg, move);
  for (const auto& [cup, amount] : move.per_cup) state.fills_[cup] += amount;
  state.processors_ = move.p;
  state.phase_ = Phase::intermediate;
}

template <class Num>
EmptyOutcome<Num> apply_empty_in_place(const GameConfig& cfg, CupState<Num>& state,
                                       const EmptyMove& move) {
  if (state.phase_ != Phase::intermediate) {
    throw PhaseError("apply_empty outside the intermediate phase");
  }
  std::vector<bool> seen(state.size(), false);
  for (CupId c : move.cups) {
    if (c >= state.size()) throw InvalidEmpty("empty targets unknown cup " + std::to_string(c));
    if (seen[c]) throw DuplicateCup("emptier selected cup " + std::to_string(c) + " twice");
    seen[c] = true;
  }

  const std::size_t p = state.processors_;
  EmptyOutcome<Num> out;
  out.removed = NumTraits<Num>::integer(0);
  out.extra = move.cups.size() > p ? move.cups.size() - p : 0;
  out.skipped = move.cups.size() < p ? p - move.cups.size() : 0;
  if (move.skipped != out.skipped) {
    throw InvalidEmpty("empty move records " + std::to_string(move.skipped) + " skips, expected " +
                       std::to_string(out.skipped));
  }
  if (state.extra_used_ + out.extra > cfg.extra_budget) {
    throw BudgetExceeded("extra emptyings exceed budget E = " + std::to_string(cfg.extra_budget));
  }
  if (cfg.skip_budget && state.skips_used_ + out.skipped > *cfg.skip_budget) {
    throw BudgetExceeded("skipped emptyings exceed budget S = " + std::to_string(*cfg.skip_budget));
  }

  const Num one = NumTraits<Num>::integer(1);
  const Num zero = NumTraits<Num>::integer(0);
  for (CupId c : move.cups) {
    Num& f = state.fills_[c];
    if (cfg.semantics == FillSemantics::standard && f < one) {
      out.removed += f;
      f = zero;
      ++out.zeroed;
    } else {
      out.removed += one;
      f -= one;
    }
  }

  state.extra_used_ += out.extra;
  state.skips_used_ += out.skipped;
  state.processors_ = 0;
  state.phase_ = Phase::start;
  ++state.round_;
  return out;
}

template <class Num>
StateMetrics<Num> metrics(const CupState<Num>& state) {
  StateMetrics<Num> m;
  m.backlog = state.backlog();
  m.anti_backlog = state.anti_backlog();
  m.mass = state.mass();
  m.mean = state.mean_fill();
  m.fill_range = Num(m.backlog - m.anti_backlog);
  m.ranking = state.ranking();
  return m;
}

template class CupState<Rational>;
template class CupState<double>;

#define CUPGAME_INSTANTIATE(Num)                                                              \
  template void validate_fill<Num>(const GameConfig&, const FillMove<Num>&);                 \
  template void apply_fill_in_place<Num>(const GameConfig&, CupState<Num>&,                  \
                                         const FillMove<Num>&);                              \
  template EmptyOutcome<Num> apply_empty_in_place<Num>(const GameConfig&, CupState<Num>&,    \
                                                       const EmptyMove&);                    \
  template StateMetrics<Num> metrics<Num>(const CupState<Num>&);

CUPGAME_INSTANTIATE(Rational)
CUPGAME_INSTANTIATE(double)

}  // namespace cupgame
