#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "hwd/errors.hpp"
#include "hwd/image.hpp"
#include "hwd/rng.hpp"

namespace hwd {

/// ViBe parameters. Defaults follow the common convention for the
/// algorithm: 20 samples, matching radius 20, 2 required matches,
/// subsampling factor 16.
struct ViBeParams {
    int n_samples = 20;    // samples kept per pixel (N)
    int radius = 20;       // intensity matching radius (R)
    int min_matches = 2;   // matches required to call a pixel background (#min)
    int subsample = 16;    // stochastic update factor (beta); update probability is 1/beta
    std::uint64_t seed = 0x5eedb06;

    void validate() const {
        if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
        if (min_matches < 1) throw ValidationError("min_matches must be >= 1");
        if (n_samples < min_matches) throw ValidationError("n_samples must be >= min_matches");
        if (radius < 1) throw ValidationError("radius must be >= 1");
        if (subsample < 1) throw ValidationError("subsample must be >= 1");
    }
};

/// One foreground/background flag per pixel; nonzero means foreground.
struct MotionMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> fg;

    MotionMask() = default;
    MotionMask(int w, int h) : width(w), height(h), fg(static_cast<std::size_t>(w) * h, 0) {}

    bool is_foreground(int x, int y) const { return fg[static_cast<std::size_t>(y) * width + x] != 0; }
    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (std::uint8_t v : fg) n += (v != 0);
        return n;
    }
};

struct UpdateStats {
    std::uint64_t own_updates = 0;       // pixels that refreshed one of their own samples
    std::uint64_t neighbor_updates = 0;  // samples written into a neighboring pixel's model
};

/// Per-pixel sample-set background model.
///
/// Initialization draws every sample from the 3x3 neighborhood of the pixel
/// in the first frame (coordinates clamped at the borders). Segmentation
/// calls a pixel background when at least min_matches samples lie within
/// radius of its current value. The update is conservative: only pixels the
/// mask marks background refresh the model, each with probability
/// 1/subsample for its own sample set and independently 1/subsample for one
/// randomly chosen 8-neighbor; writes into foreground-marked pixels are
/// suppressed so their samples never change.
class BackgroundModel {
public:
    BackgroundModel(const GrayFrame& first, const ViBeParams& params)
        : params_(params), width_(first.width), height_(first.height), rng_(params.seed) {
        params_.validate();
        if (width_ < 3 || height_ < 3) throw DimensionError("init_model: frame smaller than 3x3");
        const int n = params_.n_samples;
        samples_.resize(first.pixel_count() * static_cast<std::size_t>(n));
        std::size_t base = 0;
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x, base += n) {
                for (int i = 0; i < n; ++i) {
                    const int k = static_cast<int>(rng_.bounded(9));
                    const int nx = std::clamp(x + k % 3 - 1, 0, width_ - 1);
                    const int ny = std::clamp(y + k / 3 - 1, 0, height_ - 1);
                    samples_[base + i] = first.at(nx, ny);
                }
            }
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    const ViBeParams& params() const { return params_; }
    const std::vector<std::uint8_t>& samples() const { return samples_; }

    const std::uint8_t* pixel_samples(int x, int y) const {
        return samples_.data() + (static_cast<std::size_t>(y) * width_ + x) * params_.n_samples;
    }

    MotionMask segment(const GrayFrame& frame) const {
        require_same_size(frame);
        MotionMask mask(width_, height_);
        const int n = params_.n_samples;
        const int radius = params_.radius;
        const int need = params_.min_matches;
        const std::uint8_t* s = samples_.data();
        for (std::size_t p = 0; p < frame.pixel_count(); ++p, s += n) {
            const int v = frame.data[p];
            int matches = 0;
            for (int i = 0; i < n; ++i) {
                if (std::abs(v - s[i]) <= radius && ++matches >= need) break;
            }
            mask.fg[p] = matches < need;
        }
        return mask;
    }

    UpdateStats update(const GrayFrame& frame, const MotionMask& mask) {
        require_same_size(frame);
        if (mask.width != width_ || mask.height != height_)
            throw DimensionError("update: mask dimensions do not match model");
        UpdateStats stats;
        const int n = params_.n_samples;
        const std::uint64_t beta = static_cast<std::uint64_t>(params_.subsample);
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * width_ + x;
                if (mask.fg[p]) continue;  // conservative: foreground never updates
                const std::uint8_t v = frame.data[p];
                if (rng_.bounded(beta) == 0) {
                    samples_[p * n + rng_.bounded(n)] = v;
                    ++stats.own_updates;
                }
                if (rng_.bounded(beta) == 0) {
                    const int k = static_cast<int>(rng_.bounded(8));
                    const int nx = std::clamp(x + kNeighborX[k], 0, width_ - 1);
                    const int ny = std::clamp(y + kNeighborY[k], 0, height_ - 1);
                    const std::size_t q = static_cast<std::size_t>(ny) * width_ + nx;
                    const std::uint64_t slot = rng_.bounded(n);
                    // Diffusion may not touch foreground-marked pixels; the
                    // draws above are consumed either way to keep the stream
                    // position independent of mask content.
                    if (!mask.fg[q]) {
                        samples_[q * n + slot] = v;
                        ++stats.neighbor_updates;
                    }
                }
            }
        }
        return stats;
    }

private:
    static constexpr int kNeighborX[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int kNeighborY[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

    void require_same_size(const GrayFrame& frame) const {
        if (frame.width != width_ || frame.height != height_)
            throw DimensionError("frame dimensions do not match background model");
    }

    ViBeParams params_;
    int width_;
    int height_;
    std::vector<std::uint8_t> samples_;  // pixel-major: (y*width + x) * n_samples + i
    SplitMix64 rng_;
};

}  // namespace hwd
