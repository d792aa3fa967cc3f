#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers covering Latin script (ASCII, Latin-1, Latin Extended-A/B),
// which is what Swedish corpus text needs. Invalid bytes decode as U+FFFD.
namespace hitex::utf8 {

std::vector<char32_t> decode(std::string_view text);
std::string encode(const std::vector<char32_t>& codepoints);

std::size_t length(std::string_view text);

bool is_alpha(char32_t cp);
bool is_upper(char32_t cp);
char32_t to_lower(char32_t cp);

// Lowercases Latin letters; other code points pass through unchanged.
std::string fold_case(std::string_view text);

bool has_alpha(std::string_view text);

// First code point of `text`, or 0 when empty.
char32_t first(std::string_view text);

}  // namespace hitex::utf8
