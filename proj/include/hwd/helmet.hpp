#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "hwd/detector.hpp"
#include "hwd/draw.hpp"
#include "hwd/errors.hpp"
#include "hwd/image.hpp"

namespace hwd {

/// Hue interval in degrees; lo > hi means the range crosses 0
/// (e.g. {350, 10} covers 350..360 and 0..10).
struct HueRange {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double h) const {
        if (lo < hi) return h >= lo && h <= hi;
        return h >= lo || h <= hi;
    }
};

struct HelmetParams {
    double head_fraction = 0.2;  // top fraction of the person box taken as head ROI
    double rho = 0.3;            // minimum winning-color pixel ratio to call a helmet worn
    double v_floor = 0.15;       // pixels darker than this carry no usable hue
    bool white_enabled = false;  // optional achromatic class for white helmets
    double white_v_min = 0.8;
    std::vector<HueRange> ranges{{"red", 350.0, 10.0}, {"yellow", 45.0, 70.0}, {"blue", 200.0, 260.0}};

    void validate() const {
        if (!(head_fraction > 0 && head_fraction <= 1))
            throw ValidationError("head_fraction must be in (0, 1]");
        if (!(rho >= 0 && rho <= 1)) throw ValidationError("rho must be in [0, 1]");
        if (!(v_floor >= 0 && v_floor < 1)) throw ValidationError("v_floor must be in [0, 1)");
        if (!(white_v_min >= 0 && white_v_min <= 1))
            throw ValidationError("white_v_min must be in [0, 1]");
        if (ranges.empty()) throw ValidationError("hue ranges must not be empty");
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            const HueRange& r = ranges[i];
            if (r.label.empty()) throw ValidationError("hue range label must not be empty");
            if (!(r.lo >= 0 && r.lo < 360) || !(r.hi >= 0 && r.hi < 360))
                throw ValidationError("hue range bounds must be in [0, 360)");
            if (r.lo == r.hi) throw ValidationError("hue range must not be degenerate");
            for (std::size_t j = i + 1; j < ranges.size(); ++j)
                if (ranges[j].label == r.label)
                    throw ValidationError("hue range labels must be unique");
        }
    }
};

struct HelmetVerdict {
    bool worn = false;
    std::string color;  // empty when no color wins
    double ratio = 0.0;  // winning-color pixels / total patch pixels
    Box head_roi;
    int s_threshold = 0;  // Otsu split used on the saturation histogram
};

/// Top fifth (head_fraction) of the person box; shares its top edge and width.
inline Box head_roi(const Box& person, double head_fraction = 0.2) {
    if (person.h < 5) throw DimensionError("head_roi: person bbox shorter than 5 pixels");
    const int h = std::max(1, static_cast<int>(std::floor(person.h * head_fraction)));
    return {person.x, person.y, person.w, h};
}

/// Helmet presence and color on a head patch. All pixels convert to HSV; an
/// Otsu threshold on the saturation histogram (over pixels bright enough to
/// carry hue) separates saturated helmet pixels from the unsaturated rest,
/// and the winning hue range decides the color. When the saturation
/// histogram collapses to a single bin the Otsu split is vacuous; the gate
/// then passes that bin iff it is at least 26 (10% saturation), so uniformly
/// pure patches are kept and uniformly gray ones rejected.
inline HelmetVerdict classify_head(const RgbFrame& patch, const HelmetParams& params) {
    params.validate();
    if (patch.pixel_count() == 0) throw DimensionError("classify_head: empty patch");

    const std::size_t total = patch.pixel_count();
    std::vector<HsvPixel> hsv(total);
    Histogram256 shist{};
    std::size_t gated = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const std::uint8_t* p = patch.data.data() + 3 * i;
        hsv[i] = rgb_to_hsv(p[0], p[1], p[2]);
        if (hsv[i].v >= params.v_floor) {
            ++shist[static_cast<std::size_t>(std::lround(hsv[i].s * 255.0))];
            ++gated;
        }
    }

    HelmetVerdict verdict;
    int s_thr = 0;
    bool single_bin = false;
    if (gated > 0) {
        int nonzero = 0;
        for (std::uint32_t b : shist) nonzero += (b != 0);
        single_bin = nonzero == 1;
        s_thr = otsu_threshold(shist);
    }
    verdict.s_threshold = s_thr;

    auto saturation_passes = [&](int s255) {
        return single_bin ? s255 >= 26 : s255 > s_thr;
    };

    const bool has_white = params.white_enabled;
    std::vector<std::size_t> matches(params.ranges.size() + (has_white ? 1 : 0), 0);
    for (std::size_t i = 0; i < total; ++i) {
        const HsvPixel& px = hsv[i];
        if (px.v < params.v_floor) continue;
        const int s255 = static_cast<int>(std::lround(px.s * 255.0));
        if (saturation_passes(s255)) {
            for (std::size_t r = 0; r < params.ranges.size(); ++r)
                if (params.ranges[r].contains(px.h)) ++matches[r];
        } else if (has_white && px.v >= params.white_v_min) {
            ++matches[params.ranges.size()];
        }
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < matches.size(); ++r)
        if (matches[r] > matches[best]) best = r;  // ties keep config order
    verdict.ratio = static_cast<double>(matches[best]) / static_cast<double>(total);
    if (matches[best] > 0)
        verdict.color = best < params.ranges.size() ? params.ranges[best].label : "white";
    verdict.worn = matches[best] > 0 && verdict.ratio >= params.rho;
    return verdict;
}

/// Draws the person boxes (green when a helmet is worn, red otherwise), the
/// head ROIs (yellow), and a text label with the verdict.
inline RgbFrame annotate(const RgbFrame& frame, const std::vector<Detection>& detections,
                         const std::vector<HelmetVerdict>& verdicts) {
    RgbFrame out = frame;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const Detection& det = detections[i];
        const bool worn = i < verdicts.size() && verdicts[i].worn;
        draw_rect(out, det.box, worn ? Rgb{0, 200, 0} : Rgb{220, 0, 0});
        if (i < verdicts.size()) {
            draw_rect(out, verdicts[i].head_roi, Rgb{240, 220, 0});
            std::string label = verdicts[i].color.empty() ? "NONE" : verdicts[i].color;
            char buf[16];
            std::snprintf(buf, sizeof(buf), " %.2f", verdicts[i].ratio);
            label += buf;
            const int ty = det.box.y >= 9 ? det.box.y - 9 : det.box.y2() + 2;
            draw_text(out, det.box.x + 1, ty, label, Rgb{255, 255, 255});
        }
    }
    return out;
}

}  // namespace hwd
