#include "cupgame/basic_fillers.hpp"

#include "cupgame/rng.hpp"

#include <algorithm>

namespace cupgame {
namespace {

template <class Num>
class UniformRandomFiller final : public ObliviousFiller<Num> {
 public:
  UniformRandomFiller(std::size_t n, std::uint64_t seed, std::uint64_t trial)
      : n_(n), rng_(seed, trial, Stream::filler) {
    for (long j = 0; j <= 4; ++j) quarters_.push_back(NumTraits<Num>::ratio(j, 4));
  }
  std::string name() const override { return "uniform-random"; }
  void restart() override {}

 protected:
  std::optional<FillMove<Num>> next(const ObliviousContext& ctx) override {
    if (ctx.n != n_) throw ConfigError("filler built for a different cup count");
    FillMove<Num> move;
    move.p = static_cast<std::size_t>(rng_.between(1, n_));
    std::vector<std::uint64_t> q(n_);
    std::uint64_t total = 0;
    for (std::uint64_t& j : q) total += (j = rng_.below(5));
    // Trim random quarters until the pour fits the p processors.
    std::vector<CupId> wet;
    for (CupId c = 0; c < n_; ++c) {
      if (q[c] > 0) wet.push_back(c);
    }
    while (total > 4 * move.p) {
      const std::size_t i = static_cast<std::size_t>(rng_.below(wet.size()));
      --total;
      if (--q[wet[i]] == 0) {
        wet[i] = wet.back();
        wet.pop_back();
      }
    }
    for (CupId c = 0; c < n_; ++c) {
      if (q[c] > 0) move.per_cup.emplace_back(c, quarters_[q[c]]);
    }
    return move;
  }

 private:
  std::size_t n_;
  Rng rng_;
  std::vector<Num> quarters_;
};

template <class Num>
class OscillatingFiller final : public AdaptiveFiller<Num> {
 public:
  explicit OscillatingFiller(std::size_t n)
      : n_(n), share_(NumTraits<Num>::ratio(1, static_cast<long>(std::max<std::size_t>(1, n - 1)))) {}
  std::string name() const override { return "oscillating"; }
  void restart() override { rounds_ = 0; }

 protected:
  std::optional<FillMove<Num>> next(const CupState<Num>& state, const EmptyMove*) override {
    if (state.size() != n_) throw ConfigError("filler built for a different cup count");
    FillMove<Num> move;
    if (rounds_++ % 2 == 0) {
      move.p = n_;
      for (CupId c = 0; c < n_; ++c) move.per_cup.emplace_back(c, NumTraits<Num>::integer(1));
    } else {
      move.p = 1;
      if (n_ == 1) {
        move.per_cup.emplace_back(0, NumTraits<Num>::integer(1));
      } else {
        const CupId top = state.rank(1);
        for (CupId c = 0; c < n_; ++c) {
          if (c != top) move.per_cup.emplace_back(c, share_);
        }
      }
    }
    return move;
  }

 private:
  std::size_t n_;
  Num share_;
  std::uint64_t rounds_ = 0;
};

template <class Num>
class UniformFiller final : public ObliviousFiller<Num> {
 public:
  explicit UniformFiller(std::size_t n)
      : n_(n),
        p_(std::max<std::size_t>(1, n / 2)),
        share_(NumTraits<Num>::ratio(static_cast<long>(p_), static_cast<long>(n))) {}
  std::string name() const override { return "uniform"; }
  void restart() override {}

 protected:
  std::optional<FillMove<Num>> next(const ObliviousContext& ctx) override {
    if (ctx.n != n_) throw ConfigError("filler built for a different cup count");
    FillMove<Num> move;
    move.p = p_;
    for (CupId c = 0; c < n_; ++c) move.per_cup.emplace_back(c, share_);
    return move;
  }

 private:
  std::size_t n_;
  std::size_t p_;
  Num share_;
};

}  // namespace

template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_uniform_random_filler(std::size_t n, std::uint64_t seed,
                                                                std::uint64_t trial) {
  return std::make_unique<UniformRandomFiller<Num>>(n, seed, trial);
}

template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_oscillating_filler(std::size_t n) {
  return std::make_unique<OscillatingFiller<Num>>(n);
}

template <class Num>
std::unique_ptr<FillerStrategy<Num>> make_uniform_filler(std::size_t n) {
  return std::make_unique<UniformFiller<Num>>(n);
}

template std::unique_ptr<FillerStrategy<Rational>> make_uniform_random_filler<Rational>(std::size_t, std::uint64_t,
                                                                                        std::uint64_t);
template std::unique_ptr<FillerStrategy<double>> make_uniform_random_filler<double>(std::size_t, std::uint64_t,
                                                                                    std::uint64_t);
template std::unique_ptr<FillerStrategy<Rational>> make_oscillating_filler<Rational>(std::size_t);
template std::unique_ptr<FillerStrategy<double>> make_oscillating_filler<double>(std::size_t);
template std::unique_ptr<FillerStrategy<Rational>> make_uniform_filler<Rational>(std::size_t);
template std::unique_ptr<FillerStrategy<double>> make_uniform_filler<double>(std::size_t);

}  // namespace cupgame
