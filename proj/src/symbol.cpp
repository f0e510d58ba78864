#include "tarskiq/symbol.hpp"

#include <array>
#include <sstream>

#include "tarskiq/error.hpp"

namespace tarskiq {

namespace {
constexpr std::array<std::string_view, kSymbolCount> kNames = {"UP", "DN", "ST", "RT", "LT"};
}

std::string_view symbol_name(Symbol s) {
  const auto i = static_cast<std::size_t>(s);
  if (i >= kNames.size()) invalid_argument("unknown symbol code " + std::to_string(i));
  return kNames[i];
}

std::optional<Symbol> parse_symbol(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

std::string Letter::to_string() const {
  if (is_symbol()) return std::string(symbol_name(symbol()));
  return std::to_string(value);
}

std::string render_instance(std::string_view instance) {
  std::string out;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (i) out += ' ';
    out += symbol_name(static_cast<Symbol>(static_cast<unsigned char>(instance[i])));
  }
  return out;
}

std::string parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  std::string out;
  while (in >> token) {
    auto s = parse_symbol(token);
    if (!s) invalid_argument("unknown symbol name '" + token + "'");
    out += symbol_byte(*s);
  }
  return out;
}

}  // namespace tarskiq
