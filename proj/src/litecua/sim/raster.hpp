#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litecua/common/geometry.hpp"
#include "litecua/sim/desktop.hpp"

namespace litecua::sim {

struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Color&) const = default;
};

// Plain RGB8 raster, row-major, 3 bytes per pixel.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h, Color fill);

    Color at(int x, int y) const;
    void set(int x, int y, Color c);
    void fill_rect(Rect r, Color c);
    // 1-px border drawn inside the rectangle.
    void outline_rect(Rect r, Color c);
    // 5×7 glyphs, clipped against `clip` and the image.
    void draw_text(int x, int y, const std::string& text, Color c, Rect clip);

    bool operator==(const Image&) const = default;
};

// Draws the state: desktop background, windows back to front, widgets colored
// by role, focused widget outlined. The pointer is intentionally not drawn so
// that a widget change touches only that widget's pixels. Pure function of the
// state.
Image render_rgb(const DesktopState& state);

// render_rgb encoded as a PNG.
std::vector<std::uint8_t> emit_screenshot(const DesktopState& state);

}  // namespace litecua::sim
