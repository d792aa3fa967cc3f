#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace hitex {

enum class CefrLevel { A1 = 1, A2, B1, B2, C1, C2 };

// Classifier output space; C2 is only a word-list level.
inline constexpr std::array<CefrLevel, 5> kClassifiedLevels = {
    CefrLevel::A1, CefrLevel::A2, CefrLevel::B1, CefrLevel::B2, CefrLevel::C1};

inline constexpr int ordinal(CefrLevel level) { return static_cast<int>(level); }

inline constexpr std::string_view to_string(CefrLevel level) {
  switch (level) {
    case CefrLevel::A1: return "A1";
    case CefrLevel::A2: return "A2";
    case CefrLevel::B1: return "B1";
    case CefrLevel::B2: return "B2";
    case CefrLevel::C1: return "C1";
    case CefrLevel::C2: return "C2";
  }
  return "?";
}

// Accepts upper or lower case ("b1").
std::optional<CefrLevel> parse_cefr(std::string_view text);

// Throws hitex::Error on an unknown label.
CefrLevel parse_cefr_or_throw(std::string_view text);

inline int level_distance(CefrLevel a, CefrLevel b) {
  int d = ordinal(a) - ordinal(b);
  return d < 0 ? -d : d;
}

std::optional<CefrLevel> shift_level(CefrLevel level, int delta);

}  // namespace hitex
