#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hwd/centrist.hpp"
#include "hwd/geometry.hpp"
#include "hwd/svm.hpp"

namespace hwd {

inline std::vector<double> feature_to_double(const CentristFeature& f) {
    return std::vector<double>(f.begin(), f.end());
}

/// Two-stage pedestrian classifier: a linear stage rejects most windows
/// cheaply, the HIK stage confirms the survivors.
struct CascadeModel {
    BlockLayout layout;
    LinearModel linear;
    HikModel hik;
    HikTable table;  // derived from hik; rebuilt on load

    void build_table() { table = hik_fast_table(hik); }

    double hik_score(const CentristFeature& f) const {
        if (table.empty() && !hik.support_vectors.empty())
            return hik.score_direct(feature_to_double(f));
        if (!table.empty()) return table.lookup(f) + hik.bias;
        return hik.bias;  // no support vectors
    }
};

struct CascadeScore {
    bool accept = false;
    double score = 0.0;
    bool hik_evaluated = false;
};

/// Stage 1: s1 = w.f + bias; below theta1 rejects immediately with score s1.
/// Stage 2: HIK expansion; accepts iff s2 >= theta2, score s2.
inline CascadeScore cascade_score(const CascadeModel& model, const CentristFeature& f) {
    if (f.size() != model.linear.weights.size())
        throw DimensionError("cascade_score: feature length mismatch");
    CascadeScore out;
    const double s1 = model.linear.score(f);
    if (s1 < model.linear.stage_threshold) {
        out.score = s1;
        return out;
    }
    out.hik_evaluated = true;
    out.score = model.hik_score(f);
    out.accept = out.score >= model.hik.stage_threshold;
    return out;
}

/// Enumerates candidate windows over a negative image for mining; window
/// order must be deterministic.
using WindowEnumerator = std::function<std::vector<Box>(const GrayFrame&)>;

struct MiningRound {
    int round = 0;
    std::size_t negatives_total = 0;  // negative set size after this round
    std::size_t hard_found = 0;       // false positives harvested this round
    double linear_kkt = 0.0;
    double hik_kkt = 0.0;
};

/// Bootstrap training: round 1 trains on positives plus negatives_per_round
/// windows sampled uniformly (seeded) from the pool; every later round scans
/// the pool with the previous cascade, appends the highest-scoring false
/// positives (capped at 2x negatives_per_round), and retrains both stages on
/// the grown set. Runs exactly cfg.rounds rounds.
inline CascadeModel bootstrap_train(const std::vector<CentristFeature>& pos,
                                    const std::vector<GrayFrame>& neg_pool,
                                    const TrainConfig& cfg, const WindowEnumerator& scanner,
                                    std::vector<MiningRound>* stats = nullptr,
                                    const BlockLayout& layout = {},
                                    std::vector<CentristFeature>* final_negatives = nullptr) {
    cfg.validate();
    layout.validate();
    if (pos.empty()) throw ValidationError("bootstrap_train: no positive samples");
    if (neg_pool.empty()) throw ValidationError("bootstrap_train: empty negative pool");
    for (const auto& f : pos)
        if (static_cast<int>(f.size()) != layout.feature_dim())
            throw DimensionError("bootstrap_train: positive feature length mismatch");

    std::vector<std::vector<Box>> windows(neg_pool.size());
    for (std::size_t i = 0; i < neg_pool.size(); ++i) windows[i] = scanner(neg_pool[i]);

    detail::CentristScratch scratch;
    GrayFrame patch;
    CentristFeature feature;
    auto extract_window = [&](std::size_t img, const Box& box) {
        resample_patch_into(neg_pool[img], box, layout.window_w, layout.window_h, patch);
        extract_feature_into(patch, layout, feature, scratch);
        return feature;
    };

    // round 1: uniform window sample
    SplitMix64 rng(cfg.seed);
    std::vector<CentristFeature> negatives;
    for (int k = 0; k < cfg.negatives_per_round; ++k) {
        bool drawn = false;
        for (int attempt = 0; attempt < 64 && !drawn; ++attempt) {
            const std::size_t img = rng.bounded(neg_pool.size());
            if (windows[img].empty()) continue;
            const Box box = windows[img][rng.bounded(windows[img].size())];
            negatives.push_back(extract_window(img, box));
            drawn = true;
        }
    }
    if (negatives.empty())
        throw ValidationError("bootstrap_train: negative pool yields no windows");

    FeatureMatrix pos_d(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos_d[i] = feature_to_double(pos[i]);

    CascadeModel model;
    model.layout = layout;
    auto retrain = [&](int round) {
        FeatureMatrix neg_d(negatives.size());
        for (std::size_t i = 0; i < negatives.size(); ++i) neg_d[i] = feature_to_double(negatives[i]);
        SolverInfo lin_info, hik_info;
        model.linear = train_linear(pos_d, neg_d, cfg, &lin_info);
        model.hik = train_hik(pos_d, neg_d, cfg, &hik_info);
        model.build_table();
        if (stats)
            stats->push_back({round, negatives.size(), 0, lin_info.kkt_residual, hik_info.kkt_residual});
    };
    retrain(1);

    for (int round = 2; round <= cfg.rounds; ++round) {
        // harvest false positives of the previous model, highest score first
        struct Hard {
            double score;
            std::size_t img;
            std::size_t win;
        };
        std::vector<Hard> hards;
        for (std::size_t img = 0; img < neg_pool.size(); ++img) {
            for (std::size_t wi = 0; wi < windows[img].size(); ++wi) {
                const CascadeScore s = cascade_score(model, extract_window(img, windows[img][wi]));
                if (s.accept) hards.push_back({s.score, img, wi});
            }
        }
        std::sort(hards.begin(), hards.end(), [](const Hard& a, const Hard& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.img != b.img) return a.img < b.img;
            return a.win < b.win;
        });
        const std::size_t cap = 2 * static_cast<std::size_t>(cfg.negatives_per_round);
        if (hards.size() > cap) hards.resize(cap);

        if (hards.empty()) {
            // nothing new to learn from; identical inputs would reproduce the
            // same model, so skip the redundant retrain
            if (stats) stats->push_back({round, negatives.size(), 0,
                                         stats->back().linear_kkt, stats->back().hik_kkt});
            continue;
        }
        for (const Hard& h : hards) negatives.push_back(extract_window(h.img, windows[h.img][h.win]));
        retrain(round);
        if (stats) stats->back().hard_found = hards.size();
    }
    if (final_negatives) *final_negatives = std::move(negatives);
    return model;
}

}  // namespace hwd
