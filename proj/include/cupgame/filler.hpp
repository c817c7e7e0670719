#pragma once

// Filler interface seen by the engine.
//
// The engine hands every filler a RoundView. Adaptive fillers get the state
// and the emptier's previous move. Oblivious fillers are sealed off from both:
// ObliviousFiller::play is final and forwards only the cup count and round
// index, so a subclass has no path to the state even by accident.

#include "cupgame/game.hpp"
#include "cupgame/guarantee.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cupgame {

template <class Num>
struct RoundView {
  const CupState<Num>& state;
  const EmptyMove* last_empty;  // null on the first round
};

struct ObliviousContext {
  std::size_t n = 0;
  std::uint64_t round = 0;
};

template <class Num>
class FillerStrategy {
 public:
  virtual ~FillerStrategy() = default;

  // Next move, or nullopt once the strategy has finished.
  virtual std::optional<FillMove<Num>> play(const RoundView<Num>& view) = 0;
  virtual bool oblivious() const = 0;
  virtual std::string name() const = 0;

  // Cup the strategy designates as its output, once known.
  virtual std::optional<CupId> target() const { return std::nullopt; }
  // Anchor cups of the outermost amplification level for the move just
  // played; the engine flags a round as neglected when one is not emptied.
  virtual std::vector<CupId> anchors() const { return {}; }
  // Certified curve, when the strategy is a constructed chain.
  virtual GuaranteePtr guarantee() const { return nullptr; }
  // Forget all progress; the next play() starts a fresh application.
  virtual void restart() = 0;
};

template <class Num>
class AdaptiveFiller : public FillerStrategy<Num> {
 public:
  std::optional<FillMove<Num>> play(const RoundView<Num>& view) final {
    return next(view.state, view.last_empty);
  }
  bool oblivious() const final { return false; }

 protected:
  virtual std::optional<FillMove<Num>> next(const CupState<Num>& state, const EmptyMove* last) = 0;
};

template <class Num>
class ObliviousFiller : public FillerStrategy<Num> {
 public:
  std::optional<FillMove<Num>> play(const RoundView<Num>& view) final {
    return next(ObliviousContext{view.state.size(), view.state.round()});
  }
  bool oblivious() const final { return true; }

 protected:
  virtual std::optional<FillMove<Num>> next(const ObliviousContext& ctx) = 0;
};

}  // namespace cupgame
