#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hwd/errors.hpp"
#include "hwd/image.hpp"
#include "hwd/rng.hpp"

namespace hwd {

struct SyntheticPedestrian {
    double x0 = 0.0, y0 = 0.0;    // top-left at the entry frame
    int w = 36, h = 108;          // 1:3 body rectangle
    double vx = 1.0, vy = 0.0;    // pixels per frame
    std::string helmet = "none";  // palette color label, or "none"
    int enter_frame = 0;          // first frame the pedestrian is rendered
};

struct SyntheticConfig {
    int width = 640;
    int height = 480;
    int frame_count = 300;
    double noise_sigma = 2.0;
    std::uint64_t seed = 42;
    std::vector<SyntheticPedestrian> pedestrians;

    void validate() const {
        if (width < 16 || height < 16) throw ValidationError("frame dims must be >= 16");
        if (frame_count < 1) throw ValidationError("frame_count must be >= 1");
        if (noise_sigma < 0) throw ValidationError("noise_sigma must be >= 0");
        for (const SyntheticPedestrian& p : pedestrians) {
            if (p.w < 4 || p.h < 12) throw ValidationError("pedestrian too small");
            if (p.w > width || p.h > height) throw ValidationError("pedestrian larger than frame");
            if (p.enter_frame < 0 || p.enter_frame >= frame_count)
                throw ValidationError("enter_frame outside the sequence");
            // linear motion: checking both ends of the track suffices
            for (const int t : {p.enter_frame, frame_count - 1}) {
                if (t < p.enter_frame) continue;
                const int x = static_cast<int>(std::lround(p.x0 + (t - p.enter_frame) * p.vx));
                const int y = static_cast<int>(std::lround(p.y0 + (t - p.enter_frame) * p.vy));
                if (x < 0 || y < 0 || x + p.w > width || y + p.h > height)
                    throw ValidationError("pedestrian track leaves the frame");
            }
        }
    }
};

struct TruthEntry {
    int frame_id = 0;
    Box box;
    bool worn = false;
    std::string color;  // palette label, empty when no helmet
};

struct SyntheticScene {
    std::vector<RgbFrame> frames;
    std::vector<TruthEntry> truth;
};

namespace detail {

struct PaletteColor {
    const char* label;
    std::uint8_t r, g, b;
};

inline const std::vector<PaletteColor>& helmet_palette() {
    static const std::vector<PaletteColor> palette = {
        {"red", 200, 40, 40}, {"yellow", 210, 195, 40}, {"blue", 40, 70, 200}};
    return palette;
}

inline PaletteColor palette_color(const std::string& label) {
    for (const PaletteColor& c : helmet_palette())
        if (label == c.label) return c;
    throw ValidationError("unknown helmet color '" + label + "'");
}

// Near-gray value-noise texture: a coarse random lattice interpolated
// bilinearly plus fine per-pixel jitter.
inline void fill_background(RgbFrame& frame, SplitMix64 rng, int lo = 90, int hi = 180) {
    const int cell = 16;
    const int gw = frame.width / cell + 2, gh = frame.height / cell + 2;
    std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
    for (double& v : lattice) v = lo + rng.unit() * (hi - lo);
    for (int y = 0; y < frame.height; ++y) {
        const int cy = y / cell;
        const double fy = static_cast<double>(y % cell) / cell;
        for (int x = 0; x < frame.width; ++x) {
            const int cx = x / cell;
            const double fx = static_cast<double>(x % cell) / cell;
            const double v00 = lattice[static_cast<std::size_t>(cy) * gw + cx];
            const double v10 = lattice[static_cast<std::size_t>(cy) * gw + cx + 1];
            const double v01 = lattice[static_cast<std::size_t>(cy + 1) * gw + cx];
            const double v11 = lattice[static_cast<std::size_t>(cy + 1) * gw + cx + 1];
            const double base = (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
            const double fine = (rng.unit() - 0.5) * 12.0;
            const int tint = static_cast<int>(rng.bounded(7)) - 3;
            const auto ch = [&](int offset) {
                return static_cast<std::uint8_t>(std::clamp<long>(std::lround(base + fine + offset), 0, 255));
            };
            frame.set(x, y, ch(tint), ch(0), ch(-tint));
        }
    }
}

// Striped, noisy body texture plus the cap band (top fifth): helmet color
// with pixel noise, or a background-like texture for "none".
inline void render_pedestrian(RgbFrame& frame, int px, int py, int w, int h,
                              const std::string& helmet, SplitMix64 rng) {
    const bool dark = rng.bounded(2) == 0;
    const int base = dark ? 50 + static_cast<int>(rng.bounded(40))
                          : 180 + static_cast<int>(rng.bounded(40));
    const int stripe_period = 3 + static_cast<int>(rng.bounded(4));
    const int cap_h = std::max(1, h / 5);

    RgbFrame cap_texture(w, std::max(1, cap_h));
    const bool has_helmet = helmet != "none";
    PaletteColor color{"", 0, 0, 0};
    if (has_helmet)
        color = palette_color(helmet);
    else
        fill_background(cap_texture, rng.split());

    for (int y = 0; y < h; ++y) {
        const int fy = py + y;
        if (fy < 0 || fy >= frame.height) continue;
        for (int x = 0; x < w; ++x) {
            const int fx = px + x;
            if (fx < 0 || fx >= frame.width) continue;
            if (y < cap_h) {
                if (has_helmet) {
                    const auto jitter = [&](std::uint8_t c) {
                        const double n = (rng.unit() - 0.5) * 20.0;
                        return static_cast<std::uint8_t>(std::clamp<long>(std::lround(c + n), 0, 255));
                    };
                    frame.set(fx, fy, jitter(color.r), jitter(color.g), jitter(color.b));
                } else {
                    const std::uint8_t* p = cap_texture.at(x, y);
                    frame.set(fx, fy, p[0], p[1], p[2]);
                }
            } else {
                const int stripe = (x / stripe_period) % 2 ? 25 : -25;
                const double n = (rng.unit() - 0.5) * 16.0;
                const std::uint8_t v =
                    static_cast<std::uint8_t>(std::clamp<long>(std::lround(base + stripe + n), 0, 255));
                frame.set(fx, fy, v, v, v);
            }
        }
    }
}

inline void add_noise(RgbFrame& frame, double sigma, SplitMix64 rng) {
    if (sigma <= 0) return;
    for (std::uint8_t& b : frame.data) {
        const double n = normal_deviate(rng) * sigma;
        b = static_cast<std::uint8_t>(std::clamp<long>(std::lround(b + n), 0, 255));
    }
}

}  // namespace detail

/// Deterministic scene: a static textured background, pedestrians as
/// translating textured rectangles whose top fifth carries the helmet color
/// (or background-like texture for "none"), and additive Gaussian noise.
/// Ground truth records every rendered bbox with its helmet label.
inline SyntheticScene generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    SyntheticScene scene;
    SplitMix64 master(cfg.seed);
    const SplitMix64 background_rng = master.split();
    const SplitMix64 noise_master = master.split();
    std::vector<SplitMix64> ped_rngs;
    for (std::size_t i = 0; i < cfg.pedestrians.size(); ++i) ped_rngs.push_back(master.split());

    RgbFrame background(cfg.width, cfg.height);
    detail::fill_background(background, background_rng);

    SplitMix64 noise_seq = noise_master;
    for (int t = 0; t < cfg.frame_count; ++t) {
        RgbFrame frame = background;
        for (std::size_t i = 0; i < cfg.pedestrians.size(); ++i) {
            const SyntheticPedestrian& p = cfg.pedestrians[i];
            if (t < p.enter_frame) continue;
            const int x = static_cast<int>(std::lround(p.x0 + (t - p.enter_frame) * p.vx));
            const int y = static_cast<int>(std::lround(p.y0 + (t - p.enter_frame) * p.vy));
            // texture is a function of the pedestrian, not of time, so the
            // pedestrian translates rigidly
            detail::render_pedestrian(frame, x, y, p.w, p.h, p.helmet, ped_rngs[i]);
            scene.truth.push_back({t, Box{x, y, p.w, p.h}, p.helmet != "none",
                                   p.helmet != "none" ? p.helmet : std::string()});
        }
        detail::add_noise(frame, cfg.noise_sigma, noise_seq.split());
        scene.frames.push_back(std::move(frame));
    }
    return scene;
}

/// Training positive: one pedestrian filling a canonical window over a
/// background texture, with a small seeded inset jitter.
inline RgbFrame render_pedestrian_patch(std::uint64_t seed, const std::string& helmet, int w = 36,
                                        int h = 108) {
    RgbFrame patch(w, h);
    SplitMix64 rng(seed);
    detail::fill_background(patch, rng.split());
    const int inset_x = static_cast<int>(rng.bounded(3));
    const int inset_y = static_cast<int>(rng.bounded(3));
    detail::render_pedestrian(patch, inset_x, inset_y, w - 2 * inset_x, h - 2 * inset_y, helmet,
                              rng.split());
    detail::add_noise(patch, 2.0, rng.split());
    return patch;
}

/// Training negative: background texture only.
inline RgbFrame render_negative_image(std::uint64_t seed, int w = 320, int h = 240) {
    RgbFrame image(w, h);
    SplitMix64 rng(seed);
    detail::fill_background(image, rng.split());
    detail::add_noise(image, 2.0, rng.split());
    return image;
}

}  // namespace hwd
