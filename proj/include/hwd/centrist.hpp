#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hwd/errors.hpp"
#include "hwd/image.hpp"

namespace hwd {

/// Census transform codes, one per interior pixel; border values are 0 and
/// excluded from all histograms downstream.
struct CtFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> codes;

    std::uint8_t at(int x, int y) const { return codes[static_cast<std::size_t>(y) * width + x]; }
};

/// Detection window geometry: a 36x108 window tiled by a 9x4 grid of 9x12
/// pixel blocks; every 2x2 group of adjacent blocks forms a super-block,
/// 8x3 = 24 in total, each contributing one 256-bin census histogram.
struct BlockLayout {
    int window_w = 36;
    int window_h = 108;
    int grid_rows = 9;
    int grid_cols = 4;

    int block_w() const { return window_w / grid_cols; }
    int block_h() const { return window_h / grid_rows; }
    int super_rows() const { return grid_rows - 1; }
    int super_cols() const { return grid_cols - 1; }
    int super_count() const { return super_rows() * super_cols(); }
    int feature_dim() const { return super_count() * 256; }

    void validate() const {
        if (window_w < 3 || window_h < 3) throw ValidationError("window must be at least 3x3");
        if (grid_rows < 2 || grid_cols < 2) throw ValidationError("grid must be at least 2x2");
        if (window_w % grid_cols != 0 || window_h % grid_rows != 0)
            throw ValidationError("grid must tile the window exactly");
        if (window_h % window_w != 0) throw ValidationError("window height must be a multiple of width");
    }

    friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

/// Concatenated super-block census histograms; 6144 counts for the default
/// layout. Counts fit 16 bits: a super-block holds at most
/// 2*block_h x 2*block_w interior positions.
using CentristFeature = std::vector<std::uint16_t>;

/// 8-bit census transform: bit k is 1 iff the center is >= the k-th of its
/// 8 neighbors, taken row-major from the top-left, most significant first.
/// Border pixels get code 0.
inline void census_transform_into(const GrayFrame& frame, CtFrame& out) {
    if (frame.width < 3 || frame.height < 3)
        throw DimensionError("census_transform: frame smaller than 3x3");
    out.width = frame.width;
    out.height = frame.height;
    out.codes.assign(frame.pixel_count(), 0);
    const int w = frame.width;
    const std::uint8_t* src = frame.data.data();
    for (int y = 1; y + 1 < frame.height; ++y) {
        const std::uint8_t* r0 = src + static_cast<std::size_t>(y - 1) * w;
        const std::uint8_t* r1 = r0 + w;
        const std::uint8_t* r2 = r1 + w;
        std::uint8_t* dst = out.codes.data() + static_cast<std::size_t>(y) * w;
        for (int x = 1; x + 1 < w; ++x) {
            const std::uint8_t c = r1[x];
            std::uint8_t code = 0;
            code |= (c >= r0[x - 1]) << 7;
            code |= (c >= r0[x]) << 6;
            code |= (c >= r0[x + 1]) << 5;
            code |= (c >= r1[x - 1]) << 4;
            code |= (c >= r1[x + 1]) << 3;
            code |= (c >= r2[x - 1]) << 2;
            code |= (c >= r2[x]) << 1;
            code |= (c >= r2[x + 1]) << 0;
            dst[x] = code;
        }
    }
}

inline CtFrame census_transform(const GrayFrame& frame) {
    CtFrame out;
    census_transform_into(frame, out);
    return out;
}

namespace detail {

struct CentristScratch {
    GrayFrame sobel;
    CtFrame ct;
};

}  // namespace detail

/// Sobel gradient -> census transform -> per-super-block histograms over the
/// census-valid (interior) positions, concatenated super-block row-major with
/// bins 0..255 inside each segment. Each segment's total mass is a constant
/// of the layout: the number of interior positions its super-block covers.
inline void extract_feature_into(const GrayFrame& patch, const BlockLayout& layout,
                                 CentristFeature& out, detail::CentristScratch& scratch) {
    if (patch.width != layout.window_w || patch.height != layout.window_h)
        throw DimensionError("extract_feature: patch does not match window size");
    sobel_magnitude_into(patch, scratch.sobel);
    census_transform_into(scratch.sobel, scratch.ct);
    out.assign(static_cast<std::size_t>(layout.feature_dim()), 0);

    const int bw = layout.block_w(), bh = layout.block_h();
    for (int sr = 0; sr < layout.super_rows(); ++sr) {
        for (int sc = 0; sc < layout.super_cols(); ++sc) {
            const int seg = (sr * layout.super_cols() + sc) * 256;
            const int x0 = std::max(sc * bw, 1);
            const int y0 = std::max(sr * bh, 1);
            const int x1 = std::min((sc + 2) * bw, layout.window_w - 1);
            const int y1 = std::min((sr + 2) * bh, layout.window_h - 1);
            for (int y = y0; y < y1; ++y) {
                const std::uint8_t* row = scratch.ct.codes.data() + static_cast<std::size_t>(y) * layout.window_w;
                for (int x = x0; x < x1; ++x) ++out[seg + row[x]];
            }
        }
    }
}

inline CentristFeature extract_feature(const GrayFrame& patch, const BlockLayout& layout = {}) {
    CentristFeature out;
    detail::CentristScratch scratch;
    extract_feature_into(patch, layout, out, scratch);
    return out;
}

/// Bilinear resample of the bbox content to the layout's window size.
/// Sample positions are pixel-center aligned, so a bbox that already has the
/// window size copies exactly.
inline void resample_patch_into(const GrayFrame& frame, const Box& bbox, int out_w, int out_h,
                                GrayFrame& out) {
    if (bbox.w < 2 || bbox.h < 2) throw DimensionError("resample_patch: degenerate bbox");
    if (!Box{0, 0, frame.width, frame.height}.contains(bbox))
        throw DimensionError("resample_patch: bbox outside frame");
    if (out.width != out_w || out.height != out_h) out = GrayFrame(out_w, out_h);
    const double sx = static_cast<double>(bbox.w) / out_w;
    const double sy = static_cast<double>(bbox.h) / out_h;
    for (int v = 0; v < out_h; ++v) {
        double fy = (v + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(bbox.h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, bbox.h - 1);
        const double wy = fy - y0;
        const std::uint8_t* row0 = frame.data.data() + static_cast<std::size_t>(bbox.y + y0) * frame.width + bbox.x;
        const std::uint8_t* row1 = frame.data.data() + static_cast<std::size_t>(bbox.y + y1) * frame.width + bbox.x;
        std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(v) * out_w;
        for (int u = 0; u < out_w; ++u) {
            double fx = (u + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(bbox.w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, bbox.w - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * row0[x0] + wx * row0[x1];
            const double bot = (1.0 - wx) * row1[x0] + wx * row1[x1];
            const double val = (1.0 - wy) * top + wy * bot;
            dst[u] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(val), 0, 255));
        }
    }
}

inline GrayFrame resample_patch(const GrayFrame& frame, const Box& bbox, int out_w = 36,
                                int out_h = 108) {
    GrayFrame out;
    resample_patch_into(frame, bbox, out_w, out_h, out);
    return out;
}

}  // namespace hwd
