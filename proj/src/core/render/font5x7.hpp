#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pulse::render {

/// 5x7 column-major glyph: 5 bytes, bit 0 = top row.
struct Glyph {
  std::uint8_t columns[5];
};

/// Glyph for a Unicode codepoint; printable ASCII plus a few chart symbols,
/// hollow box for everything else.
const Glyph& glyph_for(char32_t codepoint);

/// Decode UTF-8 to codepoints; malformed bytes map to U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);

/// Display width in glyph cells (one cell per codepoint).
std::size_t display_width(std::string_view text);

}  // namespace pulse::render
