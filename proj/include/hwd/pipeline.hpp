#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hwd/cascade.hpp"
#include "hwd/config.hpp"
#include "hwd/csv.hpp"
#include "hwd/detector.hpp"
#include "hwd/eval.hpp"
#include "hwd/helmet.hpp"
#include "hwd/image.hpp"
#include "hwd/regions.hpp"
#include "hwd/synthetic.hpp"
#include "hwd/vibe.hpp"

namespace hwd {

struct FrameResult {
    int frame_id = 0;
    MotionMask mask;
    std::vector<MotionRegion> regions;
    std::vector<Detection> detections;    // after non-maximum suppression
    std::vector<HelmetVerdict> verdicts;  // parallel to detections when helmets are classified
};

/// The stateful per-video pass: the first processed frame initializes the
/// background model, every frame then runs
///   segment -> update -> extract_regions -> plan_search -> scan -> nms
/// and, when requested, the helmet stage on each detection. Frames must be
/// fed in order; the background model carries state across them.
class Pipeline {
public:
    Pipeline(CascadeModel model, const PipelineConfig& config)
        : model_(std::move(model)), cfg_(config) {
        cfg_.validate();
        if (cfg_.theta1) model_.linear.stage_threshold = *cfg_.theta1;
        if (cfg_.theta2) model_.hik.stage_threshold = *cfg_.theta2;
    }

    const CascadeModel& model() const { return model_; }

    FrameResult process(const RgbFrame& frame, int frame_id, bool classify_helmets) {
        const GrayFrame gray = to_gray(frame);
        if (!bg_) bg_.emplace(gray, cfg_.vibe);

        FrameResult result;
        result.frame_id = frame_id;
        result.mask = bg_->segment(gray);
        bg_->update(gray, result.mask);
        result.regions = extract_regions(result.mask, cfg_.regions.min_area, cfg_.regions.morph_radius);

        const SearchPlan plan =
            plan_search(result.regions, gray.width, gray.height, cfg_.scan, model_.layout);
        result.detections = nms(scan(gray, model_, plan), cfg_.scan.nms_iou);

        if (classify_helmets) {
            result.verdicts.reserve(result.detections.size());
            for (const Detection& det : result.detections) {
                HelmetVerdict verdict;
                if (det.box.h >= 5) {
                    const Box roi = head_roi(det.box, cfg_.helmet.head_fraction);
                    verdict = classify_head(crop(frame, roi), cfg_.helmet);
                    verdict.head_roi = roi;
                }
                result.verdicts.push_back(std::move(verdict));
            }
        }
        return result;
    }

private:
    CascadeModel model_;
    PipelineConfig cfg_;
    std::optional<BackgroundModel> bg_;
};

// ---------------------------------------------------------------------------
// CSV records

inline constexpr const char* kDetectionsHeader = "frame_id,x,y,w,h,score";
inline constexpr const char* kRunHeader = "frame_id,x,y,w,h,score,worn,color,ratio,s_threshold";
inline constexpr const char* kRegionsHeader = "frame_id,x,y,w,h,area";
inline constexpr const char* kTruthHeader = "frame_id,x,y,w,h,worn,color";

struct DetectionRecord {
    int frame_id = 0;
    Detection det;
    bool has_verdict = false;
    HelmetVerdict verdict;
};

inline void append_detection_rows(std::string& out, const FrameResult& r) {
    for (std::size_t i = 0; i < r.detections.size(); ++i) {
        const Detection& d = r.detections[i];
        out += format_number(r.frame_id);
        out += ',';
        out += format_number(d.box.x);
        out += ',';
        out += format_number(d.box.y);
        out += ',';
        out += format_number(d.box.w);
        out += ',';
        out += format_number(d.box.h);
        out += ',';
        out += format_number(d.score);
        if (i < r.verdicts.size()) {
            const HelmetVerdict& v = r.verdicts[i];
            out += ',';
            out += v.worn ? '1' : '0';
            out += ',';
            out += v.color.empty() ? "none" : v.color;
            out += ',';
            out += format_number(v.ratio);
            out += ',';
            out += format_number(v.s_threshold);
        }
        out += '\n';
    }
}

inline void append_region_rows(std::string& out, const FrameResult& r) {
    for (const MotionRegion& reg : r.regions) {
        out += format_number(r.frame_id);
        out += ',';
        out += format_number(reg.bbox.x);
        out += ',';
        out += format_number(reg.bbox.y);
        out += ',';
        out += format_number(reg.bbox.w);
        out += ',';
        out += format_number(reg.bbox.h);
        out += ',';
        out += format_number(reg.area);
        out += '\n';
    }
}

inline std::string truth_to_csv(const std::vector<TruthEntry>& truth) {
    std::string out = std::string(kTruthHeader) + "\n";
    for (const TruthEntry& t : truth) {
        out += format_number(t.frame_id);
        out += ',';
        out += format_number(t.box.x);
        out += ',';
        out += format_number(t.box.y);
        out += ',';
        out += format_number(t.box.w);
        out += ',';
        out += format_number(t.box.h);
        out += ',';
        out += t.worn ? '1' : '0';
        out += ',';
        out += t.color.empty() ? "none" : t.color;
        out += '\n';
    }
    return out;
}

inline std::vector<TruthEntry> truth_from_csv(const std::filesystem::path& path) {
    std::vector<TruthEntry> truth;
    for (const auto& row : read_csv(path, kTruthHeader)) {
        if (row.size() != 7) throw FormatError("truth csv: expected 7 fields");
        TruthEntry t;
        t.frame_id = static_cast<int>(parse_long(row[0], "frame_id"));
        t.box = {static_cast<int>(parse_long(row[1], "x")), static_cast<int>(parse_long(row[2], "y")),
                 static_cast<int>(parse_long(row[3], "w")), static_cast<int>(parse_long(row[4], "h"))};
        const long worn = parse_long(row[5], "worn");
        if (worn != 0 && worn != 1) throw FormatError("truth csv: worn must be 0 or 1");
        t.worn = worn == 1;
        t.color = row[6] == "none" ? std::string() : row[6];
        truth.push_back(std::move(t));
    }
    return truth;
}

/// Reads either a detection CSV (6 columns) or a full run CSV (10 columns).
inline std::vector<DetectionRecord> detections_from_csv(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("cannot open " + path.string());
    std::ifstream probe(path);
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();

    bool with_verdicts;
    if (header == kRunHeader)
        with_verdicts = true;
    else if (header == kDetectionsHeader)
        with_verdicts = false;
    else
        throw FormatError("detections csv: unexpected header in " + path.string());

    std::vector<DetectionRecord> records;
    for (const auto& row : read_csv(path, with_verdicts ? kRunHeader : kDetectionsHeader)) {
        if (row.size() != (with_verdicts ? 10u : 6u))
            throw FormatError("detections csv: wrong field count");
        DetectionRecord r;
        r.frame_id = static_cast<int>(parse_long(row[0], "frame_id"));
        r.det.box = {static_cast<int>(parse_long(row[1], "x")),
                     static_cast<int>(parse_long(row[2], "y")),
                     static_cast<int>(parse_long(row[3], "w")),
                     static_cast<int>(parse_long(row[4], "h"))};
        r.det.score = parse_double(row[5], "score");
        if (with_verdicts) {
            r.has_verdict = true;
            r.verdict.worn = parse_long(row[6], "worn") == 1;
            r.verdict.color = row[7] == "none" ? std::string() : row[7];
            r.verdict.ratio = parse_double(row[8], "ratio");
            r.verdict.s_threshold = static_cast<int>(parse_long(row[9], "s_threshold"));
        }
        records.push_back(std::move(r));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Evaluation over detection records and ground truth

struct EvalSummary {
    std::int64_t matched = 0;
    std::int64_t false_detections = 0;
    std::int64_t missed = 0;
    double acc_pd = 0.0;
    std::optional<RocResult> pedestrian_roc;      // cascade scores vs matched/unmatched
    std::optional<RocResult> helmet_roc;          // verdict ratios vs truth worn flag
    std::vector<PrPoint> helmet_pr;
};

/// Greedy per-frame matching at eval.iou_min; Acc_pd counts matched
/// detections as T and unmatched detections as F, per ground-truth instance.
inline EvalSummary evaluate_detections(const std::vector<DetectionRecord>& records,
                                       const std::vector<TruthEntry>& truth, double iou_min) {
    std::vector<int> frame_ids;
    for (const DetectionRecord& r : records) frame_ids.push_back(r.frame_id);
    for (const TruthEntry& t : truth) frame_ids.push_back(t.frame_id);
    std::sort(frame_ids.begin(), frame_ids.end());
    frame_ids.erase(std::unique(frame_ids.begin(), frame_ids.end()), frame_ids.end());

    EvalSummary summary;
    std::vector<ScoredOutcome> ped_outcomes;
    std::vector<ScoredOutcome> helmet_outcomes;
    for (const int fid : frame_ids) {
        std::vector<Detection> dets;
        std::vector<const DetectionRecord*> recs;
        for (const DetectionRecord& r : records)
            if (r.frame_id == fid) {
                dets.push_back(r.det);
                recs.push_back(&r);
            }
        std::vector<Box> boxes;
        std::vector<const TruthEntry*> truths;
        for (const TruthEntry& t : truth)
            if (t.frame_id == fid) {
                boxes.push_back(t.box);
                truths.push_back(&t);
            }

        const MatchResult match = match_detections(dets, boxes, iou_min);
        summary.matched += match.matched;
        summary.false_detections += match.false_detections;
        summary.missed += match.missed;

        std::vector<bool> det_matched(dets.size(), false);
        for (const auto& [di, ti] : match.pairs) {
            det_matched[di] = true;
            if (recs[di]->has_verdict)
                helmet_outcomes.push_back({recs[di]->verdict.ratio, truths[ti]->worn});
        }
        for (std::size_t di = 0; di < dets.size(); ++di)
            ped_outcomes.push_back({dets[di].score, det_matched[di]});
    }

    summary.acc_pd = accuracy(summary.matched, summary.false_detections);

    const auto has_both = [](const std::vector<ScoredOutcome>& v) {
        bool pos = false, neg = false;
        for (const ScoredOutcome& o : v) (o.positive ? pos : neg) = true;
        return pos && neg;
    };
    if (has_both(ped_outcomes)) summary.pedestrian_roc = roc_auc(ped_outcomes);
    if (has_both(helmet_outcomes)) {
        summary.helmet_roc = roc_auc(helmet_outcomes);
        summary.helmet_pr = pr_curve(helmet_outcomes);
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Curve serialization: CSV points and a minimal SVG polyline plot

inline std::string roc_points_csv(const RocResult& roc) {
    std::string out = "fpr,tpr\n";
    for (const RocPoint& p : roc.points)
        out += format_number(p.fpr) + "," + format_number(p.tpr) + "\n";
    return out;
}

inline std::string pr_points_csv(const std::vector<PrPoint>& pr) {
    std::string out = "recall,precision\n";
    for (const PrPoint& p : pr)
        out += format_number(p.recall) + "," + format_number(p.precision) + "\n";
    return out;
}

/// Axis-aligned line plot of a unit-square curve.
inline std::string curve_svg(const std::vector<std::pair<double, double>>& points,
                             const std::string& x_label, const std::string& y_label,
                             const std::string& title) {
    const int width = 480, height = 400, margin = 48;
    const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
    auto px = [&](double x) { return margin + x * plot_w; };
    auto py = [&](double y) { return height - margin - y * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_number(width / 2.0) + "\" y=\"20\" text-anchor=\"middle\">" + title +
           "</text>\n";
    // axes
    svg += "<line x1=\"" + format_number(px(0)) + "\" y1=\"" + format_number(py(0)) + "\" x2=\"" +
           format_number(px(1)) + "\" y2=\"" + format_number(py(0)) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_number(px(0)) + "\" y1=\"" + format_number(py(0)) + "\" x2=\"" +
           format_number(px(0)) + "\" y2=\"" + format_number(py(1)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_number(width / 2.0) + "\" y=\"" + format_number(height - 8.0) +
           "\" text-anchor=\"middle\">" + x_label + "</text>\n";
    svg += "<text x=\"14\" y=\"" + format_number(height / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " + format_number(height / 2.0) +
           ")\">" + y_label + "</text>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double t = tick / 4.0;
        svg += "<text x=\"" + format_number(px(t)) + "\" y=\"" + format_number(py(0) + 16) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + format_number(t) + "</text>\n";
        svg += "<text x=\"" + format_number(px(0) - 6) + "\" y=\"" + format_number(py(t) + 4) +
               "\" text-anchor=\"end\" font-size=\"10\">" + format_number(t) + "</text>\n";
    }
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points) svg += format_number(px(x)) + "," + format_number(py(y)) + " ";
    svg += "\"/>\n</svg>\n";
    return svg;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    if (!out) throw InputError("short write to " + path.string());
}

}  // namespace hwd
