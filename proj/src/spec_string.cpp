#include "cupgame/spec_string.hpp"

#include <charconv>

namespace cupgame {

SpecError::SpecError(std::string message, std::size_t line, std::size_t column)
    : ConfigError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

StrategySpec StrategySpec::parse(std::string_view text) {
  StrategySpec spec;
  spec.text_ = std::string(text);
  const std::size_t colon = text.find(':');
  spec.name_ = std::string(text.substr(0, colon));
  if (spec.name_.empty()) throw SpecError("missing strategy name", 1, 1);
  if (colon == std::string_view::npos) return spec;

  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(pos, end - pos);
    const std::size_t eq = piece.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw SpecError("expected key=value in '" + std::string(text) + "'", 1, pos + 1);
    }
    std::string key(piece.substr(0, eq));
    if (spec.params_.count(key)) throw SpecError("duplicate key '" + key + "'", 1, pos + 1);
    spec.params_[key] = Param{std::string(piece.substr(eq + 1)), pos + eq + 2};
    pos = end + 1;
  }
  return spec;
}

std::optional<Rational> StrategySpec::rational(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) return std::nullopt;
  try {
    return parse_rational(it->second.value);
  } catch (const ConfigError& e) {
    throw SpecError("bad value for '" + key + "' in '" + text_ + "': " + e.what(), 1, it->second.column);
  }
}

std::optional<std::uint64_t> StrategySpec::integer(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) return std::nullopt;
  const std::string& v = it->second.value;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError("expected a nonnegative integer for '" + key + "' in '" + text_ + "'", 1, it->second.column);
  }
  return out;
}

Rational StrategySpec::rational_or(const std::string& key, const Rational& fallback) const {
  std::optional<Rational> v = rational(key);
  return v ? *v : fallback;
}

std::uint64_t StrategySpec::integer_or(const std::string& key, std::uint64_t fallback) const {
  return integer(key).value_or(fallback);
}

bool StrategySpec::flag(const std::string& key) const { return integer_or(key, 0) != 0; }

void StrategySpec::expect_only(std::initializer_list<std::string_view> known) const {
  for (const auto& [key, param] : params_) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || k == key;
    if (!ok) {
      throw SpecError("unknown parameter '" + key + "' for '" + name_ + "'", 1,
                      param.column - key.size() - 1);
    }
  }
}

std::vector<StrategySpec> parse_spec_list(std::string_view text) {
  std::vector<StrategySpec> out;
  std::vector<std::pair<std::size_t, std::string>> items;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(pos, end - pos);
    const bool continues = !items.empty() && piece.find('=') != std::string_view::npos &&
                           piece.find(':') == std::string_view::npos;
    if (continues) {
      items.back().second += "," + std::string(piece);
    } else if (!piece.empty()) {
      items.emplace_back(pos, std::string(piece));
    }
    pos = end + 1;
  }
  for (const auto& [offset, item] : items) {
    try {
      out.push_back(StrategySpec::parse(item));
    } catch (const SpecError& e) {
      throw SpecError(std::string(e.what()).substr(std::string(e.what()).find(' ') + 1), 1, offset + e.column());
    }
  }
  return out;
}

}  // namespace cupgame
