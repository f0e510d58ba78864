#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tarskiq {

// Byte codes are part of the file formats; do not renumber.
enum class Symbol : std::uint8_t {
  Up = 0,     // ↑
  Down = 1,   // ↓
  Star = 2,   // *
  Right = 3,  // →
  Left = 4,   // ←
};

inline constexpr int kSymbolCount = 5;

std::string_view symbol_name(Symbol s);
std::optional<Symbol> parse_symbol(std::string_view name);

inline char symbol_byte(Symbol s) { return static_cast<char>(s); }

/// An element of an output (or input) alphabet: either a symbol or a 1-based
/// index such as the answer of ordered search.
struct Letter {
  enum class Kind : std::uint8_t { Symbol, Index };

  Kind kind = Kind::Index;
  int value = 0;

  static Letter of(Symbol s) { return {Kind::Symbol, static_cast<int>(s)}; }
  static Letter index(int k) { return {Kind::Index, k}; }

  bool is_symbol() const { return kind == Kind::Symbol; }
  Symbol symbol() const { return static_cast<Symbol>(value); }

  std::string to_string() const;

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Renders an instance string ("UP ST DN").
std::string render_instance(std::string_view instance);

/// Inverse of render_instance; throws on unknown names.
std::string parse_instance(std::string_view text);

}  // namespace tarskiq
