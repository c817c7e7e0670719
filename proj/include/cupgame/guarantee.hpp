#pragma once

// Certified backlog curves f(n) and round bounds T(n) for strategy chains.
//
// A guarantee is an immutable table over sizes 1..max_n plus a link to the
// guarantee it was amplified from. Tables are shared between the strategy
// objects that consult them, so one chain can serve many concurrent games.

#include "cupgame/numeric.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace cupgame {

enum class Branch { base, delegate, amplify };

std::string to_string(Branch b);

class StrategyGuarantee;

// Share of an adaptive level's target kept from the inner curve: the anchors
// are driven to h = keep * f(n_B). This is n_B / n, which equals 1 - delta
// when delta n is an integer and is smaller otherwise. Step 1 only reaches h
// if a swapped-in cup (at least mean(B) + f(n_B), with mean(B) >= -h n_A/n_B)
// clears h, i.e. if h <= f(n_B) n_B / n.
Rational adaptive_keep(std::size_t n, const Rational& delta);
using GuaranteePtr = std::shared_ptr<const StrategyGuarantee>;

struct AmplifyParams {
  Rational delta;
  // Oblivious amplification only.
  std::uint64_t M = 1;
  std::uint64_t flatten_rounds = 0;
  // Below ceil(4/delta^2) cups an oblivious level hands the whole game to its
  // inner strategy. Turning this off gives the pure recurrence.
  bool size_threshold = true;
};

class StrategyGuarantee {
 public:
  // trivalg: f(1) = 0, f(n) = 1/2 for n >= 2, one round.
  static GuaranteePtr trivalg(std::size_t max_n);

  // Adaptive amplification. f'(n) = max(f(n), keep f(n_B) + f(n_A)) and
  // T'(n) = n n_A T(n_B) + T(n_A) on the amplifying branch.
  static GuaranteePtr adaptive_amplified(GuaranteePtr inner, const Rational& delta);

  // Oblivious amplification. f'(n) = max(f(n), (1-d)^2 f(n_B) + f(n_A)).
  // T' counts every round the strategy can play: all donation-processes at
  // their largest m0, with each application preceded by its flattening phase.
  static GuaranteePtr oblivious_amplified(GuaranteePtr inner, const AmplifyParams& params);

  // Arbitrary base table (index 0 unused).
  static GuaranteePtr table(std::string construction, std::vector<Rational> f, std::vector<BigInt> T,
                            bool oblivious);

  std::size_t max_n() const { return f_.size() - 1; }
  const Rational& f(std::size_t n) const;
  const BigInt& T(std::size_t n) const;
  Branch branch(std::size_t n) const;

  const std::string& construction() const { return construction_; }
  const Rational& delta() const { return params_.delta; }
  const AmplifyParams& params() const { return params_; }
  bool oblivious() const { return oblivious_; }
  const GuaranteePtr& inner() const { return inner_; }
  // Number of amplification levels above the base.
  std::size_t depth() const { return depth_; }
  // Outermost level first, e.g. "adaptive-amplify(1/2) <- adaptive-amplify(1/2) <- trivalg".
  std::string provenance() const;
  // Failure probability recurrence, kept as text; empty for deterministic guarantees.
  const std::string& failure_bound() const { return failure_; }

 private:
  StrategyGuarantee() = default;

  std::string construction_;
  std::vector<Rational> f_;
  std::vector<BigInt> T_;
  std::vector<Branch> branch_;
  AmplifyParams params_;
  bool oblivious_ = false;
  GuaranteePtr inner_;
  std::size_t depth_ = 0;
  std::string failure_;
};

}  // namespace cupgame
