#pragma once

#include <cstdint>

namespace litecua::sim {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
// Horizontal advance: glyph plus one column of spacing.
inline constexpr int kGlyphAdvance = kGlyphWidth + 1;

// Column bitmap for a printable ASCII character (bit 0 = top row), or nullptr
// outside 0x20..0x7E. The classic 5×7 terminal font.
const std::uint8_t* glyph5x7(char c);

}  // namespace litecua::sim
