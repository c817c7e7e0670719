#include "cupgame/numeric.hpp"

#include "cupgame/game.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace cupgame {

Rational make_rational(long num, long den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  if (s.empty()) throw ConfigError("empty rational literal");
  if (s.front() == '+') s.erase(s.begin());

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ConfigError("malformed rational: " + std::string(text));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    BigInt num;
    if (num.set_str(digits, 10) != 0) throw ConfigError("malformed rational: " + std::string(text));
    BigInt den = 1;
    for (std::size_t i = 0; i < scale; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  Rational q;
  if (q.set_str(s, 10) != 0) throw ConfigError("malformed rational: " + std::string(text));
  if (q.get_den() == 0) throw ConfigError("rational with zero denominator: " + std::string(text));
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string NumTraits<double>::format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t anchor_size(std::size_t n, const Rational& delta) {
  Rational scaled = delta * Rational(static_cast<unsigned long>(n));
  return ceil_div(scaled).get_ui();
}

std::size_t non_anchor_size(std::size_t n, const Rational& delta) {
  return n - anchor_size(n, delta);
}

Rational harmonic_gain(std::size_t k) {
  Rational d = 0;
  for (std::size_t i = 2; i <= k; ++i) d += Rational(1, static_cast<unsigned long>(i));
  d.canonicalize();
  return d;
}

Rational flat_range(const Rational& delta) { return Rational(2) * (Rational(2) + delta); }

Rational pow(const Rational& base, unsigned long exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  out.canonicalize();
  return out;
}

BigInt ceil_div(const Rational& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

BigInt floor_of(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

}  // namespace cupgame
