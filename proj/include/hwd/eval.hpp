#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hwd/detector.hpp"
#include "hwd/errors.hpp"
#include "hwd/geometry.hpp"

namespace hwd {

struct ScoredOutcome {
    double score = 0.0;
    bool positive = false;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

/// Classification accuracy T / (T + F).
inline double accuracy(std::int64_t correct, std::int64_t wrong) {
    if (correct < 0 || wrong < 0) throw ValidationError("accuracy: counts must be non-negative");
    if (correct + wrong == 0) throw ValidationError("accuracy: no outcomes");
    return static_cast<double>(correct) / static_cast<double>(correct + wrong);
}

namespace detail {

// outcomes sorted by score descending, grouped by distinct score
template <typename Visit>
void sweep_thresholds(std::vector<ScoredOutcome> outcomes, Visit&& visit) {
    std::sort(outcomes.begin(), outcomes.end(),
              [](const ScoredOutcome& a, const ScoredOutcome& b) { return a.score > b.score; });
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < outcomes.size()) {
        const double s = outcomes[i].score;
        for (; i < outcomes.size() && outcomes[i].score == s; ++i)
            outcomes[i].positive ? ++tp : ++fp;
        visit(s, tp, fp);
    }
}

}  // namespace detail

/// ROC curve over all distinct score thresholds plus trapezoidal AUC, which
/// equals the pair-counting statistic P(s+ > s-) + P(s+ = s-)/2.
inline RocResult roc_auc(const std::vector<ScoredOutcome>& outcomes) {
    std::int64_t pos = 0, neg = 0;
    for (const ScoredOutcome& o : outcomes) o.positive ? ++pos : ++neg;
    if (pos == 0 || neg == 0)
        throw ValidationError("roc_auc: need at least one positive and one negative");

    RocResult out;
    out.points.push_back({0.0, 0.0});
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    detail::sweep_thresholds(outcomes, [&](double, std::int64_t tp, std::int64_t fp) {
        const double tpr = static_cast<double>(tp) / pos;
        const double fpr = static_cast<double>(fp) / neg;
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        out.points.push_back({fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    });
    out.auc = auc;
    return out;
}

/// Precision/recall at every distinct score threshold, swept from high to
/// low scores; recall is non-decreasing along the sweep.
inline std::vector<PrPoint> pr_curve(const std::vector<ScoredOutcome>& outcomes) {
    std::int64_t pos = 0;
    for (const ScoredOutcome& o : outcomes) pos += o.positive;
    if (pos == 0) throw ValidationError("pr_curve: need at least one positive");

    std::vector<PrPoint> points;
    detail::sweep_thresholds(outcomes, [&](double, std::int64_t tp, std::int64_t fp) {
        points.push_back({static_cast<double>(tp) / pos,
                          static_cast<double>(tp) / static_cast<double>(tp + fp)});
    });
    return points;
}

struct MatchResult {
    std::int64_t matched = 0;           // T: detections paired with a truth box
    std::int64_t false_detections = 0;  // F: detections without a truth box
    std::int64_t missed = 0;            // truth boxes no detection claimed
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (detection idx, truth idx)
};

/// Greedy one-to-one matching: detections claim truth boxes in descending
/// score order (ties keep input order); a claim needs IoU >= iou_min and
/// takes the highest-IoU unmatched truth (ties toward the lower truth index).
inline MatchResult match_detections(const std::vector<Detection>& detections,
                                    const std::vector<Box>& truth, double iou_min) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].score > detections[b].score;
    });

    MatchResult out;
    std::vector<bool> taken(truth.size(), false);
    for (const std::size_t di : order) {
        double best_iou = 0.0;
        std::size_t best_t = truth.size();
        for (std::size_t ti = 0; ti < truth.size(); ++ti) {
            if (taken[ti]) continue;
            const double v = iou(detections[di].box, truth[ti]);
            if (v >= iou_min && v > best_iou) {
                best_iou = v;
                best_t = ti;
            }
        }
        if (best_t < truth.size()) {
            taken[best_t] = true;
            ++out.matched;
            out.pairs.emplace_back(di, best_t);
        } else {
            ++out.false_detections;
        }
    }
    for (bool t : taken) out.missed += !t;
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

}  // namespace hwd
