#pragma once

#include <string>
#include <string_view>

namespace pairlens::utf8 {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD one byte at a
// time, so the function is total.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

bool is_space(char32_t c);
bool is_ascii_punct(char32_t c);
// ASCII letters plus the Latin-1 / Latin Extended-A/B letter blocks.
bool is_letter(char32_t c);
bool is_digit(char32_t c);
char32_t to_lower(char32_t c);

}  // namespace pairlens::utf8
