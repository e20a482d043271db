#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include "hwd/cascade.hpp"
#include "hwd/centrist.hpp"
#include "hwd/geometry.hpp"
#include "hwd/regions.hpp"

namespace hwd {

struct ScanParams {
    double pad = 0.25;             // region inflation, fraction of each dimension per side
    double scale_min = 0.5;        // relative to the canonical window
    double scale_max = 2.0;
    double scale_step = 1.2;       // multiplicative pyramid step
    double stride_fraction = 0.125;  // of the window width
    double nms_iou = 0.45;

    void validate() const {
        if (pad < 0) throw ValidationError("pad must be >= 0");
        if (!(scale_min > 0)) throw ValidationError("scale_min must be > 0");
        if (scale_max < scale_min) throw ValidationError("scale_max must be >= scale_min");
        if (!(scale_step > 1)) throw ValidationError("scale_step must be > 1");
        if (!(stride_fraction > 0)) throw ValidationError("stride_fraction must be > 0");
        if (!(nms_iou > 0 && nms_iou < 1)) throw ValidationError("nms_iou must be in (0, 1)");
    }
};

struct PlannedWindow {
    int scale_index = 0;
    Box box;

    friend bool operator==(const PlannedWindow&, const PlannedWindow&) = default;
};

struct SearchPlan {
    std::vector<PlannedWindow> windows;  // ordered by (scale_index, y, x)
};

struct Detection {
    Box box;
    double score = 0.0;
};

inline std::vector<double> plan_scales(const ScanParams& params) {
    params.validate();
    std::vector<double> scales;
    for (double s = params.scale_min; s <= params.scale_max * (1.0 + 1e-9); s *= params.scale_step)
        scales.push_back(s);
    return scales;
}

/// Window size at a pyramid scale; the aspect ratio of the canonical window
/// is preserved exactly (height is the integral multiple of the width).
inline Box scaled_window(double scale, const BlockLayout& layout) {
    const int w = std::max<int>(2, static_cast<int>(std::lround(layout.window_w * scale)));
    return {0, 0, w, w * (layout.window_h / layout.window_w)};
}

/// Enumerates candidate windows around motion regions. Every region bbox is
/// inflated by pad on all sides (clamped to the frame); windows are taken
/// from a frame-anchored stride grid per scale and kept when they fit inside
/// some inflated region, so region scanning is always a subset of a
/// full-frame scan. Duplicates across overlapping regions are removed.
inline SearchPlan plan_search(const std::vector<MotionRegion>& regions, int frame_w, int frame_h,
                              const ScanParams& params, const BlockLayout& layout = {}) {
    params.validate();
    layout.validate();
    const Box frame{0, 0, frame_w, frame_h};
    std::vector<Box> inflated;
    inflated.reserve(regions.size());
    for (const MotionRegion& r : regions) {
        const int dx = static_cast<int>(std::lround(params.pad * r.bbox.w));
        const int dy = static_cast<int>(std::lround(params.pad * r.bbox.h));
        const Box grown{r.bbox.x - dx, r.bbox.y - dy, r.bbox.w + 2 * dx, r.bbox.h + 2 * dy};
        const Box clipped = intersect(grown, frame);
        if (!clipped.empty()) inflated.push_back(clipped);
    }

    SearchPlan plan;
    const std::vector<double> scales = plan_scales(params);
    for (std::size_t si = 0; si < scales.size(); ++si) {
        const Box win = scaled_window(scales[si], layout);
        if (win.w > frame_w || win.h > frame_h) continue;
        const int stride = std::max<int>(1, static_cast<int>(std::lround(params.stride_fraction * win.w)));
        // per-scale extent of the grid that can contain a window of any region
        for (const Box& reg : inflated) {
            if (win.w > reg.w || win.h > reg.h) continue;
            const int x_first = (reg.x + stride - 1) / stride * stride;
            const int y_first = (reg.y + stride - 1) / stride * stride;
            for (int y = y_first; y + win.h <= reg.y2(); y += stride)
                for (int x = x_first; x + win.w <= reg.x2(); x += stride)
                    plan.windows.push_back({static_cast<int>(si), Box{x, y, win.w, win.h}});
        }
    }
    // drop duplicates, including identical boxes reached from different scales
    auto box_key = [](const PlannedWindow& p) {
        return std::tuple(p.box.x, p.box.y, p.box.w, p.box.h, p.scale_index);
    };
    std::sort(plan.windows.begin(), plan.windows.end(),
              [&](const PlannedWindow& a, const PlannedWindow& b) { return box_key(a) < box_key(b); });
    plan.windows.erase(std::unique(plan.windows.begin(), plan.windows.end(),
                                   [](const PlannedWindow& a, const PlannedWindow& b) {
                                       return a.box == b.box;
                                   }),
                       plan.windows.end());
    std::sort(plan.windows.begin(), plan.windows.end(),
              [](const PlannedWindow& a, const PlannedWindow& b) {
                  if (a.scale_index != b.scale_index) return a.scale_index < b.scale_index;
                  if (a.box.y != b.box.y) return a.box.y < b.box.y;
                  return a.box.x < b.box.x;
              });
    return plan;
}

inline SearchPlan full_frame_plan(int frame_w, int frame_h, const ScanParams& params,
                                  const BlockLayout& layout = {}) {
    const std::vector<MotionRegion> whole{{Box{0, 0, frame_w, frame_h},
                                           static_cast<std::int64_t>(frame_w) * frame_h}};
    return plan_search(whole, frame_w, frame_h, params, layout);
}

/// Evaluates every planned window: resample to the canonical size, extract
/// the census feature, score through the cascade. Accepted windows become
/// detections sorted by score descending (ties keep plan order).
inline std::vector<Detection> scan(const GrayFrame& frame, const CascadeModel& model,
                                   const SearchPlan& plan) {
    std::vector<Detection> dets;
    detail::CentristScratch scratch;
    GrayFrame patch;
    CentristFeature feature;
    for (const PlannedWindow& pw : plan.windows) {
        resample_patch_into(frame, pw.box, model.layout.window_w, model.layout.window_h, patch);
        extract_feature_into(patch, model.layout, feature, scratch);
        const CascadeScore s = cascade_score(model, feature);
        if (s.accept) dets.push_back({pw.box, s.score});
    }
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Detection& a, const Detection& b) { return a.score > b.score; });
    return dets;
}

/// Greedy non-maximum suppression: repeatedly keep the highest-scoring
/// remaining detection and drop the rest with IoU above the threshold.
/// Score ties break toward smaller x, then smaller y.
inline std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold) {
    if (!(iou_threshold > 0 && iou_threshold < 1))
        throw ValidationError("nms: iou_threshold must be in (0, 1)");
    std::vector<const Detection*> order;
    order.reserve(dets.size());
    for (const Detection& d : dets) order.push_back(&d);
    std::sort(order.begin(), order.end(), [](const Detection* a, const Detection* b) {
        if (a->score != b->score) return a->score > b->score;
        if (a->box.x != b->box.x) return a->box.x < b->box.x;
        return a->box.y < b->box.y;
    });
    std::vector<Detection> kept;
    for (const Detection* d : order) {
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (iou(d->box, k.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(*d);
    }
    return kept;
}

}  // namespace hwd
