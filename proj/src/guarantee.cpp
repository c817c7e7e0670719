#include "cupgame/guarantee.hpp"

#include "cupgame/game.hpp"

namespace cupgame {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::base: return "base";
    case Branch::delegate: return "delegate";
    case Branch::amplify: return "amplify";
  }
  return "?";
}

const Rational& StrategyGuarantee::f(std::size_t n) const {
  if (n == 0 || n > max_n()) {
    throw ConfigError("guarantee queried at size " + std::to_string(n) + " outside [1, " +
                      std::to_string(max_n()) + "]");
  }
  return f_[n];
}

const BigInt& StrategyGuarantee::T(std::size_t n) const {
  f(n);
  return T_[n];
}

Branch StrategyGuarantee::branch(std::size_t n) const {
  f(n);
  return branch_[n];
}

GuaranteePtr StrategyGuarantee::table(std::string construction, std::vector<Rational> f,
                                      std::vector<BigInt> T, bool oblivious) {
  if (f.size() < 2 || f.size() != T.size()) throw ConfigError("malformed guarantee table");
  auto g = std::shared_ptr<StrategyGuarantee>(new StrategyGuarantee());
  g->construction_ = std::move(construction);
  g->f_ = std::move(f);
  g->T_ = std::move(T);
  g->branch_.assign(g->f_.size(), Branch::base);
  g->oblivious_ = oblivious;
  return g;
}

GuaranteePtr StrategyGuarantee::trivalg(std::size_t max_n) {
  std::vector<Rational> f(max_n + 1, Rational(0));
  std::vector<BigInt> T(max_n + 1, BigInt(0));
  for (std::size_t n = 2; n <= max_n; ++n) {
    f[n] = Rational(1, 2);
    T[n] = 1;
  }
  return table("trivalg", std::move(f), std::move(T), false);
}

Rational adaptive_keep(std::size_t n, const Rational& delta) {
  return make_rational(static_cast<long>(non_anchor_size(n, delta)), static_cast<long>(n));
}

GuaranteePtr StrategyGuarantee::adaptive_amplified(GuaranteePtr inner, const Rational& delta) {
  if (!inner) throw ConfigError("amplification needs an inner guarantee");
  if (delta <= 0 || delta > Rational(1, 2)) throw ConfigError("amplification delta outside (0, 1/2]");
  auto g = std::shared_ptr<StrategyGuarantee>(new StrategyGuarantee());
  const std::size_t max_n = inner->max_n();
  g->construction_ = "adaptive-amplify";
  g->params_.delta = delta;
  g->f_.assign(max_n + 1, Rational(0));
  g->T_.assign(max_n + 1, BigInt(0));
  g->branch_.assign(max_n + 1, Branch::delegate);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const std::size_t nA = anchor_size(n, delta);
    const std::size_t nB = n - nA;
    g->f_[n] = inner->f(n);
    g->T_[n] = inner->T(n);
    if (nB == 0) continue;
    Rational amplified = adaptive_keep(n, delta) * inner->f(nB) + inner->f(nA);
    if (inner->f(n) >= amplified) continue;
    g->f_[n] = amplified;
    g->T_[n] = BigInt(static_cast<unsigned long>(n * nA)) * inner->T(nB) + inner->T(nA);
    g->branch_[n] = Branch::amplify;
  }
  g->inner_ = std::move(inner);
  g->depth_ = g->inner_->depth_ + 1;
  return g;
}

GuaranteePtr StrategyGuarantee::oblivious_amplified(GuaranteePtr inner, const AmplifyParams& params) {
  if (!inner) throw ConfigError("amplification needs an inner guarantee");
  const Rational& delta = params.delta;
  if (delta <= 0 || delta > Rational(1, 2)) throw ConfigError("amplification delta outside (0, 1/2]");
  if (params.M == 0) throw ConfigError("M must be at least 1");
  auto g = std::shared_ptr<StrategyGuarantee>(new StrategyGuarantee());
  const std::size_t max_n = inner->max_n();
  g->construction_ = "oblivious-amplify";
  g->params_ = params;
  g->oblivious_ = true;
  g->f_.assign(max_n + 1, Rational(0));
  g->T_.assign(max_n + 1, BigInt(0));
  g->branch_.assign(max_n + 1, Branch::delegate);
  const Rational keep = (Rational(1) - delta) * (Rational(1) - delta);
  const BigInt threshold = ceil_div(Rational(4) / (delta * delta));
  const BigInt M(static_cast<unsigned long>(params.M));
  const BigInt F(static_cast<unsigned long>(params.flatten_rounds));
  for (std::size_t n = 1; n <= max_n; ++n) {
    const std::size_t nA = anchor_size(n, delta);
    const std::size_t nB = n - nA;
    g->f_[n] = inner->f(n);
    g->T_[n] = inner->T(n);
    if (nB == 0) continue;
    if (params.size_threshold && BigInt(static_cast<unsigned long>(n)) < threshold) continue;
    Rational amplified = keep * inner->f(nB) + inner->f(nA);
    if (inner->f(n) >= amplified) continue;
    BigInt rounds = F + inner->T(nA);
    for (std::size_t i = 0; i < nA; ++i) rounds += M * (F + inner->T(n - i));
    g->f_[n] = amplified;
    g->T_[n] = rounds;
    g->branch_[n] = Branch::amplify;
  }
  g->failure_ = "p'(n) <= n p(n_B) + 2^(-log^8 N)";
  g->inner_ = std::move(inner);
  g->depth_ = g->inner_->depth_ + 1;
  return g;
}

std::string StrategyGuarantee::provenance() const {
  // Runs of identical levels are collapsed: "adaptive-amplify(1/256)^886 <- trivalg".
  std::vector<std::string> levels;
  for (const StrategyGuarantee* g = this; g; g = g->inner_.get()) {
    std::string label = g->construction_;
    if (g->inner_) label += "(" + format_rational(g->params_.delta) + ")";
    levels.push_back(std::move(label));
  }
  std::string out;
  for (std::size_t i = 0; i < levels.size();) {
    std::size_t j = i;
    while (j < levels.size() && levels[j] == levels[i]) ++j;
    if (!out.empty()) out += " <- ";
    out += levels[i];
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace cupgame
