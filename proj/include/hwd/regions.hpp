#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hwd/geometry.hpp"
#include "hwd/vibe.hpp"

namespace hwd {

/// Connected foreground component: tight bounding box and pixel count.
struct MotionRegion {
    Box bbox;
    std::int64_t area = 0;
};

namespace detail {

// Separable square-window min/max over a binary mask; pixels outside the
// frame count as background (0).
inline void morph_pass(std::vector<std::uint8_t>& m, int w, int h, int radius, bool dilate) {
    if (radius <= 0) return;
    std::vector<std::uint8_t> tmp(m.size());
    // horizontal
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = m.data() + static_cast<std::size_t>(y) * w;
        std::uint8_t* out = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = dilate ? 0 : 1;
            for (int dx = -radius; dx <= radius; ++dx) {
                const int xx = x + dx;
                const std::uint8_t s = (xx >= 0 && xx < w) ? row[xx] : 0;
                v = dilate ? std::max(v, s) : std::min(v, s);
            }
            out[x] = v;
        }
    }
    // vertical
    for (int y = 0; y < h; ++y) {
        std::uint8_t* out = m.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = dilate ? 0 : 1;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = y + dy;
                const std::uint8_t s = (yy >= 0 && yy < h) ? tmp[static_cast<std::size_t>(yy) * w + x] : 0;
                v = dilate ? std::max(v, s) : std::min(v, s);
            }
            out[x] = v;
        }
    }
}

struct UnionFind {
    std::vector<int> parent;
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace detail

inline void erode(MotionMask& mask, int radius) {
    detail::morph_pass(mask.fg, mask.width, mask.height, radius, /*dilate=*/false);
}

inline void dilate(MotionMask& mask, int radius) {
    detail::morph_pass(mask.fg, mask.width, mask.height, radius, /*dilate=*/true);
}

inline void morph_open(MotionMask& mask, int radius) {
    erode(mask, radius);
    dilate(mask, radius);
}

inline void morph_close(MotionMask& mask, int radius) {
    dilate(mask, radius);
    erode(mask, radius);
}

/// 8-connected component labels via two-pass union-find. Returns one label
/// per pixel, 0 for background, components numbered from 1 in scan order.
inline std::vector<int> label_components(const MotionMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
    detail::UnionFind uf;
    uf.parent.push_back(0);
    int next = 1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            if (!mask.fg[p]) continue;
            int lab = 0;
            // previously visited 8-neighbors: left, and the three above
            const int nbx[4] = {x - 1, x - 1, x, x + 1};
            const int nby[4] = {y, y - 1, y - 1, y - 1};
            for (int k = 0; k < 4; ++k) {
                if (nbx[k] < 0 || nbx[k] >= w || nby[k] < 0) continue;
                const int nl = labels[static_cast<std::size_t>(nby[k]) * w + nbx[k]];
                if (nl == 0) continue;
                if (lab == 0)
                    lab = nl;
                else
                    uf.unite(lab, nl);
            }
            if (lab == 0) {
                lab = next++;
                uf.parent.push_back(lab);
            }
            labels[p] = lab;
        }
    }
    // flatten to consecutive ids in first-appearance order
    std::vector<int> remap(static_cast<std::size_t>(next), 0);
    int compact = 0;
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] == 0) continue;
        const int root = uf.find(labels[p]);
        if (remap[root] == 0) remap[root] = ++compact;
        labels[p] = remap[root];
    }
    return labels;
}

/// Cleans the mask with a morphological open then close (square structuring
/// element of the given radius), labels 8-connected components, and returns
/// those with at least min_area pixels as tight bounding boxes, largest
/// first. Equal areas order by bbox top, then left.
inline std::vector<MotionRegion> extract_regions(const MotionMask& mask, std::int64_t min_area,
                                                 int morph_radius) {
    MotionMask cleaned = mask;
    morph_open(cleaned, morph_radius);
    morph_close(cleaned, morph_radius);

    const std::vector<int> labels = label_components(cleaned);
    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);

    struct Acc {
        int min_x = INT32_MAX, min_y = INT32_MAX, max_x = -1, max_y = -1;
        std::int64_t area = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(max_label) + 1);
    for (int y = 0; y < cleaned.height; ++y) {
        for (int x = 0; x < cleaned.width; ++x) {
            const int l = labels[static_cast<std::size_t>(y) * cleaned.width + x];
            if (l == 0) continue;
            Acc& a = acc[l];
            a.min_x = std::min(a.min_x, x);
            a.min_y = std::min(a.min_y, y);
            a.max_x = std::max(a.max_x, x);
            a.max_y = std::max(a.max_y, y);
            ++a.area;
        }
    }

    std::vector<MotionRegion> regions;
    for (int l = 1; l <= max_label; ++l) {
        const Acc& a = acc[l];
        if (a.area < min_area) continue;
        regions.push_back({Box{a.min_x, a.min_y, a.max_x - a.min_x + 1, a.max_y - a.min_y + 1}, a.area});
    }
    std::sort(regions.begin(), regions.end(), [](const MotionRegion& a, const MotionRegion& b) {
        if (a.area != b.area) return a.area > b.area;
        if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
        return a.bbox.x < b.bbox.x;
    });
    return regions;
}

}  // namespace hwd
