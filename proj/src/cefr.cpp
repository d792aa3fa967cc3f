#include "hitex/cefr.hpp"

#include <cctype>

#include "hitex/error.hpp"

namespace hitex {

std::optional<CefrLevel> parse_cefr(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  char band = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  char step = text[1];
  if ((band != 'A' && band != 'B' && band != 'C') || (step != '1' && step != '2')) {
    return std::nullopt;
  }
  int value = (band - 'A') * 2 + (step - '1') + 1;
  return static_cast<CefrLevel>(value);
}

CefrLevel parse_cefr_or_throw(std::string_view text) {
  auto level = parse_cefr(text);
  if (!level) throw Error("unknown CEFR level '" + std::string(text) + "'");
  return *level;
}

std::optional<CefrLevel> shift_level(CefrLevel level, int delta) {
  int value = ordinal(level) + delta;
  if (value < ordinal(CefrLevel::A1) || value > ordinal(CefrLevel::C2)) return std::nullopt;
  return static_cast<CefrLevel>(value);
}

}  // namespace hitex
