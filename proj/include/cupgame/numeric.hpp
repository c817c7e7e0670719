#pragma once

// Number types used for cup fills.
//
// Exact mode uses GMP rationals; fast mode uses double. All game code is
// written against NumTraits so both modes share one implementation.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace cupgame {

using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(long num, long den = 1);

// Accepts "p/q", integers and finite decimals ("0.25").
Rational parse_rational(std::string_view text);

// Always "num/den", also for integers ("3/1"), so output is lossless and uniform.
std::string format_rational(const Rational& q);

// ceil(delta * n) and n - ceil(delta * n): the anchor/non-anchor split sizes.
std::size_t anchor_size(std::size_t n, const Rational& delta);
std::size_t non_anchor_size(std::size_t n, const Rational& delta);

// Harmonic gain d(k) = sum_{i=2}^{k} 1/i; d(0) = d(1) = 0.
Rational harmonic_gain(std::size_t k);

// Flatness target 2(2 + delta) for a delta-greedy-like emptier.
Rational flat_range(const Rational& delta);

Rational pow(const Rational& base, unsigned long exp);
BigInt ceil_div(const Rational& q);  // ceil(q)
BigInt floor_of(const Rational& q);

template <class Num>
struct NumTraits;

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational from(const Rational& q) { return q; }
  static Rational ratio(long num, long den) { return make_rational(num, den); }
  static Rational integer(long v) { return Rational(v); }
  static double to_double(const Rational& q) { return q.get_d(); }
  static std::string format(const Rational& q) { return format_rational(q); }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "fast";
  static double from(const Rational& q) { return q.get_d(); }
  static double ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double integer(long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }
  static std::string format(double v);
};

}  // namespace cupgame
