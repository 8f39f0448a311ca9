#include "litecua/sim/raster.hpp"

#include <cmath>

#include "litecua/sim/font5x7.hpp"
#include "litecua/sim/png.hpp"

namespace litecua::sim {

namespace {

// Fixed palette; every render decision is a pure function of the state.
constexpr Color kDesktop{32, 96, 112};
constexpr Color kWindowFill{220, 220, 220};
constexpr Color kWindowBorder{40, 40, 40};
constexpr Color kButtonFill{182, 192, 205};
constexpr Color kFieldFill{255, 255, 255};
constexpr Color kCheckboxFill{250, 250, 250};
constexpr Color kCheckMark{40, 40, 40};
constexpr Color kTrackFill{165, 165, 165};
constexpr Color kThumbFill{85, 90, 105};
constexpr Color kListFill{235, 235, 240};
constexpr Color kListSelected{150, 170, 220};
constexpr Color kMenuFill{225, 225, 218};
constexpr Color kWidgetBorder{95, 95, 105};
constexpr Color kFocusRing{30, 90, 220};
constexpr Color kText{15, 15, 15};

Rect inset(Rect r, int by) { return {r.x + by, r.y + by, r.w - 2 * by, r.h - 2 * by}; }

void draw_widget(Image& img, const DesktopState& state, const WidgetSpec& w) {
    const WidgetState& ws = state.widgets.at(w.id);
    const Rect& b = w.bounds;
    const int text_y = b.y + std::max(1, (b.h - kGlyphHeight) / 2);

    switch (w.role) {
        case WidgetRole::kButton:
            img.fill_rect(b, kButtonFill);
            img.draw_text(b.x + 4, text_y, w.name, kText, inset(b, 1));
            break;
        case WidgetRole::kTextField:
            img.fill_rect(b, kFieldFill);
            img.draw_text(b.x + 4, text_y, ws.value, kText, inset(b, 2));
            break;
        case WidgetRole::kCheckbox:
            img.fill_rect(b, kCheckboxFill);
            if (ws.checked) img.fill_rect(inset(b, 3), kCheckMark);
            break;
        case WidgetRole::kLabel:
            img.draw_text(b.x + 1, text_y, ws.value.empty() ? w.name : ws.value, kText,
                          inset(b, 0));
            break;
        case WidgetRole::kScrollbar: {
            img.fill_rect(b, kTrackFill);
            const ScrollSpec& sc = *w.scroll;
            const double ratio =
                sc.max > sc.min
                    ? (ws.scroll_offset - sc.min) / static_cast<double>(sc.max - sc.min)
                    : 0.0;
            if (sc.horizontal) {
                const int thumb = std::max(6, b.w / 5);
                const int travel = std::max(0, b.w - 2 - thumb);
                const int tx = b.x + 1 + static_cast<int>(std::llround(ratio * travel));
                img.fill_rect({tx, b.y + 1, thumb, b.h - 2}, kThumbFill);
            } else {
                const int thumb = std::max(6, b.h / 5);
                const int travel = std::max(0, b.h - 2 - thumb);
                const int ty = b.y + 1 + static_cast<int>(std::llround(ratio * travel));
                img.fill_rect({b.x + 1, ty, b.w - 2, thumb}, kThumbFill);
            }
            break;
        }
        case WidgetRole::kListItem:
            img.fill_rect(b, ws.selected ? kListSelected : kListFill);
            img.draw_text(b.x + 4, text_y, w.name, kText, inset(b, 1));
            break;
        case WidgetRole::kMenuItem:
            img.fill_rect(b, kMenuFill);
            img.draw_text(b.x + 4, text_y, w.name, kText, inset(b, 1));
            break;
    }
    img.outline_rect(b, state.focus == w.id ? kFocusRing : kWidgetBorder);
}

}  // namespace

Image::Image(int w, int h, Color fill) : width(w), height(h) {
    rgb.resize(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) set(x, y, fill);
    }
}

Color Image::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
}

void Image::fill_rect(Rect r, Color c) {
    for (int y = r.y; y < r.y + r.h; ++y) {
        for (int x = r.x; x < r.x + r.w; ++x) set(x, y, c);
    }
}

void Image::outline_rect(Rect r, Color c) {
    if (r.w <= 0 || r.h <= 0) return;
    for (int x = r.x; x < r.x + r.w; ++x) {
        set(x, r.y, c);
        set(x, r.y + r.h - 1, c);
    }
    for (int y = r.y; y < r.y + r.h; ++y) {
        set(r.x, y, c);
        set(r.x + r.w - 1, y, c);
    }
}

void Image::draw_text(int x, int y, const std::string& text, Color c, Rect clip) {
    int pen = x;
    for (char ch : text) {
        const std::uint8_t* glyph = glyph5x7(ch);
        if (glyph != nullptr) {
            for (int col = 0; col < kGlyphWidth; ++col) {
                for (int row = 0; row < kGlyphHeight; ++row) {
                    if ((glyph[col] >> row & 1) == 0) continue;
                    const Point p{pen + col, y + row};
                    if (clip.contains(p)) set(p.x, p.y, c);
                }
            }
        }
        pen += kGlyphAdvance;
        if (pen >= clip.x + clip.w) break;
    }
}

Image render_rgb(const DesktopState& state) {
    Image img(state.scene.screen.width, state.scene.screen.height, kDesktop);
    for (const WindowSpec& win : state.scene.windows) {
        auto it = state.window_visible.find(win.title);
        if (it == state.window_visible.end() || !it->second) continue;
        img.fill_rect(win.bounds, kWindowFill);
        img.outline_rect(win.bounds, kWindowBorder);
        img.draw_text(win.bounds.x + 4, win.bounds.y + 3, win.title, kText, inset(win.bounds, 1));
        for (const WidgetSpec& w : win.widgets) draw_widget(img, state, w);
    }
    return img;
}

std::vector<std::uint8_t> emit_screenshot(const DesktopState& state) {
    const Image img = render_rgb(state);
    return encode_png(img.width, img.height, img.rgb.data());
}

}  // namespace litecua::sim
