#pragma once

#include <algorithm>
#include <cstdint>

namespace hwd {

/// Integer pixel rectangle with top-left origin; covers columns [x, x+w)
/// and rows [y, y+h).
struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend bool operator==(const Box&, const Box&) = default;

    std::int64_t area() const { return std::int64_t(w) * h; }
    bool empty() const { return w <= 0 || h <= 0; }
    int x2() const { return x + w; }
    int y2() const { return y + h; }

    bool contains(const Box& o) const {
        return o.x >= x && o.y >= y && o.x2() <= x2() && o.y2() <= y2();
    }
};

inline Box intersect(const Box& a, const Box& b) {
    const int x1 = std::max(a.x, b.x);
    const int y1 = std::max(a.y, b.y);
    const int x2 = std::min(a.x2(), b.x2());
    const int y2 = std::min(a.y2(), b.y2());
    if (x2 <= x1 || y2 <= y1) return {};
    return {x1, y1, x2 - x1, y2 - y1};
}

/// Intersection over union; 0 when the boxes are disjoint or degenerate.
inline double iou(const Box& a, const Box& b) {
    const std::int64_t inter = intersect(a, b).area();
    if (inter <= 0) return 0.0;
    const std::int64_t uni = a.area() + b.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace hwd
