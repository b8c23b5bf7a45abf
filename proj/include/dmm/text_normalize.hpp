#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

namespace dmm {

namespace utf8 {

// Decodes the codepoint starting at in[pos] and advances pos. Bytes that do
// not form a valid UTF-8 sequence are passed through one at a time as their
// raw value, so the functions below are total on arbitrary byte strings.
char32_t decode_next(std::string_view in, size_t& pos);

void append(std::string& out, char32_t cp);

}  // namespace utf8

// Inclusive codepoint ranges removed from message text before language
// identification and tokenization: the Supplemental Multilingual Plane,
// planes 3 and up, the BMP symbol blocks 2500-2BFF, the BMP private use
// area, zero-width space/joiner/nonjoiner, and the two emoji variation
// selectors. Sorted and non-overlapping.
inline constexpr std::array<std::pair<char32_t, char32_t>, 6> kStripRanges = {{
    {0x200B, 0x200D},
    {0x2500, 0x2BFF},
    {0xE000, 0xEFFF},
    {0xFE0E, 0xFE0F},
    {0x10000, 0x1FFFF},
    {0x30000, 0x10FFFF},
}};

bool is_stripped_codepoint(char32_t cp);

// Removes every codepoint inside kStripRanges, preserving everything else
// (including whitespace left behind by stripped runs) in order.
std::string strip_symbols(std::string_view text);

// Removes whitespace-delimited tokens of the form '@' followed by one or
// more word characters. Remaining tokens are rejoined with single spaces.
std::string strip_mentions(std::string_view text);

bool is_unicode_space(char32_t cp);

}  // namespace dmm
