#pragma once

#include <algorithm>

namespace litecua {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

struct Size {
    int width = 0;
    int height = 0;
    bool operator==(const Size&) const = default;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool operator==(const Rect&) const = default;

    Point center() const { return {x + w / 2, y + h / 2}; }

    bool contains(Point p) const {
        return p.x >= x && p.x < x + w && p.y >= y && p.y < y + h;
    }

    // Positive-area overlap; zero-area rects never intersect anything.
    bool intersects(const Rect& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }

    bool intersects_screen(Size screen) const {
        return intersects(Rect{0, 0, screen.width, screen.height});
    }
};

inline int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

inline Point clamp_to_screen(Point p, Size screen) {
    return {clamp_int(p.x, 0, screen.width - 1), clamp_int(p.y, 0, screen.height - 1)};
}

inline bool in_screen(Point p, Size screen) {
    return p.x >= 0 && p.x < screen.width && p.y >= 0 && p.y < screen.height;
}

}  // namespace litecua
