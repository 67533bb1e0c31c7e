#include "core/render/font5x7.hpp"

namespace pulse::render {

namespace {

// classic 5x7 bitmap set, ASCII 32..126
constexpr Glyph kAscii[95] = {
    {{0x00, 0x00, 0x00, 0x00, 0x00}},  // space
    {{0x00, 0x00, 0x5F, 0x00, 0x00}},  // !
    {{0x00, 0x07, 0x00, 0x07, 0x00}},  // "
    {{0x14, 0x7F, 0x14, 0x7F, 0x14}},  // #
    {{0x24, 0x2A, 0x7F, 0x2A, 0x12}},  // $
    {{0x23, 0x13, 0x08, 0x64, 0x62}},  // %
    {{0x36, 0x49, 0x55, 0x22, 0x50}},  // &
    {{0x00, 0x05, 0x03, 0x00, 0x00}},  // '
    {{0x00, 0x1C, 0x22, 0x41, 0x00}},  // (
    {{0x00, 0x41, 0x22, 0x1C, 0x00}},  // )
    {{0x14, 0x08, 0x3E, 0x08, 0x14}},  // *
    {{0x08, 0x08, 0x3E, 0x08, 0x08}},  // +
    {{0x00, 0x50, 0x30, 0x00, 0x00}},  // ,
    {{0x08, 0x08, 0x08, 0x08, 0x08}},  // -
    {{0x00, 0x60, 0x60, 0x00, 0x00}},  // .
    {{0x20, 0x10, 0x08, 0x04, 0x02}},  // /
    {{0x3E, 0x51, 0x49, 0x45, 0x3E}},  // 0
    {{0x00, 0x42, 0x7F, 0x40, 0x00}},  // 1
    {{0x42, 0x61, 0x51, 0x49, 0x46}},  // 2
    {{0x21, 0x41, 0x45, 0x4B, 0x31}},  // 3
    {{0x18, 0x14, 0x12, 0x7F, 0x10}},  // 4
    {{0x27, 0x45, 0x45, 0x45, 0x39}},  // 5
    {{0x3C, 0x4A, 0x49, 0x49, 0x30}},  // 6
    {{0x01, 0x71, 0x09, 0x05, 0x03}},  // 7
    {{0x36, 0x49, 0x49, 0x49, 0x36}},  // 8
    {{0x06, 0x49, 0x49, 0x29, 0x1E}},  // 9
    {{0x00, 0x36, 0x36, 0x00, 0x00}},  // :
    {{0x00, 0x56, 0x36, 0x00, 0x00}},  // ;
    {{0x08, 0x14, 0x22, 0x41, 0x00}},  // <
    {{0x14, 0x14, 0x14, 0x14, 0x14}},  // =
    {{0x00, 0x41, 0x22, 0x14, 0x08}},  // >
    {{0x02, 0x01, 0x51, 0x09, 0x06}},  // ?
    {{0x32, 0x49, 0x79, 0x41, 0x3E}},  // @
    {{0x7E, 0x11, 0x11, 0x11, 0x7E}},  // A
    {{0x7F, 0x49, 0x49, 0x49, 0x36}},  // B
    {{0x3E, 0x41, 0x41, 0x41, 0x22}},  // C
    {{0x7F, 0x41, 0x41, 0x22, 0x1C}},  // D
    {{0x7F, 0x49, 0x49, 0x49, 0x41}},  // E
    {{0x7F, 0x09, 0x09, 0x09, 0x01}},  // F
    {{0x3E, 0x41, 0x49, 0x49, 0x7A}},  // G
    {{0x7F, 0x08, 0x08, 0x08, 0x7F}},  // H
    {{0x00, 0x41, 0x7F, 0x41, 0x00}},  // I
    {{0x20, 0x40, 0x41, 0x3F, 0x01}},  // J
    {{0x7F, 0x08, 0x14, 0x22, 0x41}},  // K
    {{0x7F, 0x40, 0x40, 0x40, 0x40}},  // L
    {{0x7F, 0x02, 0x0C, 0x02, 0x7F}},  // M
    {{0x7F, 0x04, 0x08, 0x10, 0x7F}},  // N
    {{0x3E, 0x41, 0x41, 0x41, 0x3E}},  // O
    {{0x7F, 0x09, 0x09, 0x09, 0x06}},  // P
    {{0x3E, 0x41, 0x51, 0x21, 0x5E}},  // Q
    {{0x7F, 0x09, 0x19, 0x29, 0x46}},  // R
    {{0x46, 0x49, 0x49, 0x49, 0x31}},  // S
    {{0x01, 0x01, 0x7F, 0x01, 0x01}},  // T
    {{0x3F, 0x40, 0x40, 0x40, 0x3F}},  // U
    {{0x1F, 0x20, 0x40, 0x20, 0x1F}},  // V
    {{0x3F, 0x40, 0x38, 0x40, 0x3F}},  // W
    {{0x63, 0x14, 0x08, 0x14, 0x63}},  // X
    {{0x07, 0x08, 0x70, 0x08, 0x07}},  // Y
    {{0x61, 0x51, 0x49, 0x45, 0x43}},  // Z
    {{0x00, 0x7F, 0x41, 0x41, 0x00}},  // [
    {{0x02, 0x04, 0x08, 0x10, 0x20}},  // backslash
    {{0x00, 0x41, 0x41, 0x7F, 0x00}},  // ]
    {{0x04, 0x02, 0x01, 0x02, 0x04}},  // ^
    {{0x40, 0x40, 0x40, 0x40, 0x40}},  // _
    {{0x00, 0x01, 0x02, 0x04, 0x00}},  // `
    {{0x20, 0x54, 0x54, 0x54, 0x78}},  // a
    {{0x7F, 0x48, 0x44, 0x44, 0x38}},  // b
    {{0x38, 0x44, 0x44, 0x44, 0x20}},  // c
    {{0x38, 0x44, 0x44, 0x48, 0x7F}},  // d
    {{0x38, 0x54, 0x54, 0x54, 0x18}},  // e
    {{0x08, 0x7E, 0x09, 0x01, 0x02}},  // f
    {{0x0C, 0x52, 0x52, 0x52, 0x3E}},  // g
    {{0x7F, 0x08, 0x04, 0x04, 0x78}},  // h
    {{0x00, 0x44, 0x7D, 0x40, 0x00}},  // i
    {{0x20, 0x40, 0x44, 0x3D, 0x00}},  // j
    {{0x7F, 0x10, 0x28, 0x44, 0x00}},  // k
    {{0x00, 0x41, 0x7F, 0x40, 0x00}},  // l
    {{0x7C, 0x04, 0x18, 0x04, 0x78}},  // m
    {{0x7C, 0x08, 0x04, 0x04, 0x78}},  // n
    {{0x38, 0x44, 0x44, 0x44, 0x38}},  // o
    {{0x7C, 0x14, 0x14, 0x14, 0x08}},  // p
    {{0x08, 0x14, 0x14, 0x18, 0x7C}},  // q
    {{0x7C, 0x08, 0x04, 0x04, 0x08}},  // r
    {{0x48, 0x54, 0x54, 0x54, 0x20}},  // s
    {{0x04, 0x3F, 0x44, 0x40, 0x20}},  // t
    {{0x3C, 0x40, 0x40, 0x20, 0x7C}},  // u
    {{0x1C, 0x20, 0x40, 0x20, 0x1C}},  // v
    {{0x3C, 0x40, 0x30, 0x40, 0x3C}},  // w
    {{0x44, 0x28, 0x10, 0x28, 0x44}},  // x
    {{0x0C, 0x50, 0x50, 0x50, 0x3C}},  // y
    {{0x44, 0x64, 0x54, 0x4C, 0x44}},  // z
    {{0x00, 0x08, 0x36, 0x41, 0x00}},  // {
    {{0x00, 0x00, 0x7F, 0x00, 0x00}},  // |
    {{0x00, 0x41, 0x36, 0x08, 0x00}},  // }
    {{0x08, 0x04, 0x08, 0x10, 0x08}},  // ~
};

constexpr Glyph kUpArrow = {{0x04, 0x02, 0x7F, 0x02, 0x04}};    // U+2191
constexpr Glyph kDownArrow = {{0x10, 0x20, 0x7F, 0x20, 0x10}};  // U+2193
constexpr Glyph kBox = {{0x7F, 0x41, 0x41, 0x41, 0x7F}};        // fallback

}  // namespace

const Glyph& glyph_for(char32_t codepoint) {
  if (codepoint >= 32 && codepoint <= 126) return kAscii[codepoint - 32];
  if (codepoint == U'↑') return kUpArrow;
  if (codepoint == U'↓') return kDownArrow;
  return kBox;
}

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0 && i + 1 < text.size()) {
      cp = static_cast<char32_t>((c & 0x1F) << 6 |
                                 (static_cast<unsigned char>(text[i + 1]) & 0x3F));
      len = 2;
    } else if ((c & 0xF0) == 0xE0 && i + 2 < text.size()) {
      cp = static_cast<char32_t>((c & 0x0F) << 12 |
                                 (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6 |
                                 (static_cast<unsigned char>(text[i + 2]) & 0x3F));
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && i + 3 < text.size()) {
      cp = static_cast<char32_t>((c & 0x07) << 18 |
                                 (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12 |
                                 (static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6 |
                                 (static_cast<unsigned char>(text[i + 3]) & 0x3F));
      len = 4;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::size_t display_width(std::string_view text) { return decode_utf8(text).size(); }

}  // namespace pulse::render
