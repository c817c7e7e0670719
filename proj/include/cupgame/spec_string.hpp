#pragma once

// Strategy strings such as "perturbed:delta=1/2" or
// "oblivious-base:h=2,M=32,flatten=256".
//
// Grammar: name [':' key '=' value (',' key '=' value)*]. In a list of specs
// ("greedy-invariant,flatness:R=4,conservation") a comma-separated piece
// without '=' starts the next spec.

#include "cupgame/game.hpp"
#include "cupgame/numeric.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cupgame {

class SpecError : public ConfigError {
 public:
  SpecError(std::string message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class StrategySpec {
 public:
  static StrategySpec parse(std::string_view text);

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }
  bool has(const std::string& key) const { return params_.count(key) != 0; }

  std::optional<Rational> rational(const std::string& key) const;
  std::optional<std::uint64_t> integer(const std::string& key) const;
  Rational rational_or(const std::string& key, const Rational& fallback) const;
  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key) const;

  // Throws SpecError naming the first key not in `known`.
  void expect_only(std::initializer_list<std::string_view> known) const;

 private:
  struct Param {
    std::string value;
    std::size_t column;  // 1-based column of the value in text_
  };
  std::string text_;
  std::string name_;
  std::map<std::string, Param> params_;
};

std::vector<StrategySpec> parse_spec_list(std::string_view text);

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

}  // namespace cupgame
