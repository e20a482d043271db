#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hwd/errors.hpp"
#include "hwd/geometry.hpp"

namespace hwd {

/// Dense row-major 8-bit grayscale raster.
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width * height intensities

    GrayFrame() = default;
    GrayFrame(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw DimensionError("GrayFrame: non-positive dimensions");
    }

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

/// Dense row-major 8-bit RGB raster; three bytes per pixel, R first.
struct RgbFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height

    RgbFrame() = default;
    RgbFrame(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {
        if (w <= 0 || h <= 0) throw DimensionError("RgbFrame: non-positive dimensions");
    }

    const std::uint8_t* at(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* at(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::uint8_t* p = at(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    friend bool operator==(const RgbFrame&, const RgbFrame&) = default;
};

/// Hue in degrees [0, 360), saturation and value in [0, 1].
/// Achromatic pixels (s == 0) carry h == 0 by convention.
struct HsvPixel {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

using Histogram256 = std::array<std::uint32_t, 256>;

inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // ITU-R BT.601 weights.
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    const long rounded = std::lround(y);
    return static_cast<std::uint8_t>(std::clamp(rounded, 0l, 255l));
}

inline GrayFrame to_gray(const RgbFrame& frame) {
    GrayFrame out(frame.width, frame.height);
    const std::uint8_t* src = frame.data.data();
    for (std::size_t i = 0; i < out.pixel_count(); ++i, src += 3)
        out.data[i] = luma(src[0], src[1], src[2]);
    return out;
}

inline RgbFrame gray_to_rgb(const GrayFrame& frame) {
    RgbFrame out(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
        out.data[3 * i] = frame.data[i];
        out.data[3 * i + 1] = frame.data[i];
        out.data[3 * i + 2] = frame.data[i];
    }
    return out;
}

/// Standard hexcone RGB -> HSV conversion.
inline HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int maxc = std::max({r, g, b});
    const int minc = std::min({r, g, b});
    HsvPixel out;
    out.v = maxc / 255.0;
    if (maxc == 0 || maxc == minc) return out;  // achromatic: h = s = 0
    const double d = maxc - minc;
    out.s = d / maxc;
    double h;
    if (maxc == r)
        h = 60.0 * (g - b) / d;
    else if (maxc == g)
        h = 60.0 * ((b - r) / d + 2.0);
    else
        h = 60.0 * ((r - g) / d + 4.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

inline GrayFrame crop(const GrayFrame& frame, const Box& box) {
    if (box.empty() || !Box{0, 0, frame.width, frame.height}.contains(box))
        throw DimensionError("crop: box outside frame");
    GrayFrame out(box.w, box.h);
    for (int y = 0; y < box.h; ++y)
        for (int x = 0; x < box.w; ++x) out.at(x, y) = frame.at(box.x + x, box.y + y);
    return out;
}

inline RgbFrame crop(const RgbFrame& frame, const Box& box) {
    if (box.empty() || !Box{0, 0, frame.width, frame.height}.contains(box))
        throw DimensionError("crop: box outside frame");
    RgbFrame out(box.w, box.h);
    for (int y = 0; y < box.h; ++y)
        for (int x = 0; x < box.w; ++x) {
            const std::uint8_t* p = frame.at(box.x + x, box.y + y);
            out.set(x, y, p[0], p[1], p[2]);
        }
    return out;
}

/// Gradient magnitude with the standard 3x3 Sobel kernels, Euclidean norm
/// clamped to 255. Border pixels are 0.
inline void sobel_magnitude_into(const GrayFrame& frame, GrayFrame& out) {
    if (frame.width < 3 || frame.height < 3)
        throw DimensionError("sobel_magnitude: frame smaller than 3x3");
    if (out.width != frame.width || out.height != frame.height) out = GrayFrame(frame.width, frame.height);
    std::fill(out.data.begin(), out.data.end(), std::uint8_t(0));
    const int w = frame.width;
    const std::uint8_t* src = frame.data.data();
    for (int y = 1; y + 1 < frame.height; ++y) {
        const std::uint8_t* r0 = src + static_cast<std::size_t>(y - 1) * w;
        const std::uint8_t* r1 = r0 + w;
        const std::uint8_t* r2 = r1 + w;
        std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(y) * w;
        for (int x = 1; x + 1 < w; ++x) {
            const int gx = (r0[x + 1] + 2 * r1[x + 1] + r2[x + 1]) -
                           (r0[x - 1] + 2 * r1[x - 1] + r2[x - 1]);
            const int gy = (r2[x - 1] + 2 * r2[x] + r2[x + 1]) -
                           (r0[x - 1] + 2 * r0[x] + r0[x + 1]);
            const long m = std::lround(std::sqrt(double(gx) * gx + double(gy) * gy));
            dst[x] = static_cast<std::uint8_t>(std::min(m, 255l));
        }
    }
}

inline GrayFrame sobel_magnitude(const GrayFrame& frame) {
    GrayFrame out;
    sobel_magnitude_into(frame, out);
    return out;
}

namespace detail {

// 192-bit product for exact comparison of between-class variance fractions;
// the first factor stays below 2^112 and the second below 2^48.
struct U192 {
    unsigned __int128 hi;
    std::uint64_t lo;
};

inline U192 mul192(unsigned __int128 a, std::uint64_t b) {
    const auto lo64 = static_cast<std::uint64_t>(a);
    const auto hi64 = static_cast<std::uint64_t>(a >> 64);
    const unsigned __int128 p0 = static_cast<unsigned __int128>(lo64) * b;
    const unsigned __int128 p1 = static_cast<unsigned __int128>(hi64) * b;
    return {p1 + (p0 >> 64), static_cast<std::uint64_t>(p0)};
}

inline bool less192(const U192& a, const U192& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
}

}  // namespace detail

/// Otsu's threshold: the split t maximizing between-class variance over
/// (bins <= t | bins > t), compared in exact integer arithmetic so ties are
/// broken reproducibly by the smallest maximizing t. If all mass sits in one
/// bin, returns that bin's index. Total mass must be in [1, 2^24].
inline int otsu_threshold(const Histogram256& hist) {
    std::uint64_t mass = 0, total = 0;
    int nonzero_bin = 0, nonzero_count = 0;
    for (int i = 0; i < 256; ++i) {
        if (hist[i]) {
            mass += hist[i];
            total += static_cast<std::uint64_t>(i) * hist[i];
            nonzero_bin = i;
            ++nonzero_count;
        }
    }
    if (mass == 0) throw ValidationError("otsu_threshold: empty histogram");
    if (mass > (1ull << 24)) throw ValidationError("otsu_threshold: total mass exceeds 2^24");
    if (nonzero_count == 1) return nonzero_bin;

    // Between-class variance at split t is proportional to
    //   (S0*W - S*w0)^2 / (w0*(W - w0))
    // with W = mass, S = total, and w0/S0 the zeroth/first moments of the
    // low class. One-sided splits contribute zero.
    int best_t = 0;
    unsigned __int128 best_num2 = 0;
    std::uint64_t best_den = 1;
    std::uint64_t w0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        s0 += static_cast<std::uint64_t>(t) * hist[t];
        if (w0 == 0 || w0 == mass) continue;
        const __int128 diff = static_cast<__int128>(s0) * mass - static_cast<__int128>(total) * w0;
        const std::uint64_t num = static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
        const unsigned __int128 num2 = static_cast<unsigned __int128>(num) * num;
        const std::uint64_t den = w0 * (mass - w0);
        if (detail::less192(detail::mul192(best_num2, den), detail::mul192(num2, best_den))) {
            best_num2 = num2;
            best_den = den;
            best_t = t;
        }
    }
    return best_t;
}

}  // namespace hwd
