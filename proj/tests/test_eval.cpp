#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hwd/eval.hpp"
#include "hwd/synthetic.hpp"
#include "oracles.hpp"

using namespace hwd;

namespace {

std::vector<ScoredOutcome> random_outcomes(SplitMix64& rng, int n, int score_levels) {
    std::vector<ScoredOutcome> out;
    for (int i = 0; i < n; ++i)
        out.push_back({double(rng.bounded(score_levels)) / score_levels, rng.bounded(2) == 0});
    return out;
}

}  // namespace

TEST_CASE("accuracy is t over t plus f", "[eval]") {
    CHECK(accuracy(10, 0) == 1.0);
    CHECK(accuracy(0, 10) == 0.0);
    CHECK(accuracy(842, 158) == Catch::Approx(0.842));
    CHECK_THROWS_AS(accuracy(0, 0), ValidationError);

    SplitMix64 rng(111);
    for (int i = 0; i < 100; ++i) {
        const std::int64_t t = rng.bounded(50), f = 1 + rng.bounded(50);
        const std::int64_t k = 1 + rng.bounded(5);
        REQUIRE(accuracy(k * t, k * f) == accuracy(t, f));
    }
}

TEST_CASE("roc auc separates the degenerate cases", "[eval]") {
    std::vector<ScoredOutcome> separated;
    for (int i = 0; i < 10; ++i) separated.push_back({1.0 + i, true});
    for (int i = 0; i < 10; ++i) separated.push_back({-1.0 - i, false});
    CHECK(roc_auc(separated).auc == 1.0);

    std::vector<ScoredOutcome> identical;
    for (int i = 0; i < 10; ++i) identical.push_back({0.5, i % 2 == 0});
    CHECK(roc_auc(identical).auc == 0.5);

    CHECK_THROWS_AS(roc_auc({{1.0, true}}), ValidationError);
    CHECK_THROWS_AS(roc_auc({{1.0, true}, {0.5, true}}), ValidationError);
}

TEST_CASE("trapezoidal auc equals pair counting", "[eval]") {
    SplitMix64 rng(112);
    for (int trial = 0; trial < 200; ++trial) {
        auto outcomes = random_outcomes(rng, 5 + static_cast<int>(rng.bounded(200)),
                                        2 + static_cast<int>(rng.bounded(20)));
        bool pos = false, neg = false;
        for (const auto& o : outcomes) (o.positive ? pos : neg) = true;
        if (!pos) outcomes.push_back({0.3, true});
        if (!neg) outcomes.push_back({0.4, false});
        const double got = roc_auc(outcomes).auc;
        const double want = oracle::auc_pair_reference(outcomes);
        REQUIRE(std::abs(got - want) <= 1e-9);
    }
}

TEST_CASE("roc curve starts at the origin and ends at (1,1)", "[eval]") {
    SplitMix64 rng(113);
    auto outcomes = random_outcomes(rng, 60, 10);
    outcomes.push_back({0.1, true});
    outcomes.push_back({0.2, false});
    const RocResult roc = roc_auc(outcomes);
    REQUIRE(roc.points.size() >= 2);
    CHECK(roc.points.front().fpr == 0.0);
    CHECK(roc.points.front().tpr == 0.0);
    CHECK(roc.points.back().fpr == 1.0);
    CHECK(roc.points.back().tpr == 1.0);
}

TEST_CASE("pr curve of perfectly ranked outcomes keeps precision one", "[eval]") {
    std::vector<ScoredOutcome> outcomes;
    for (int i = 0; i < 5; ++i) outcomes.push_back({10.0 + i, true});
    for (int i = 0; i < 5; ++i) outcomes.push_back({1.0 + i, false});
    const auto points = pr_curve(outcomes);
    bool seen_full_recall = false;
    for (const auto& p : points) {
        if (p.recall == 1.0 && p.precision == 1.0) seen_full_recall = true;
        if (p.recall < 1.0) REQUIRE(p.precision == 1.0);
    }
    CHECK(seen_full_recall);
}

TEST_CASE("pr curve of one positive and one lower negative", "[eval]") {
    const auto points = pr_curve({{0.9, true}, {0.4, false}});
    REQUIRE(points.size() == 2);
    CHECK(points[0].recall == 1.0);
    CHECK(points[0].precision == 1.0);
    CHECK(points[1].recall == 1.0);
    CHECK(points[1].precision == 0.5);
    CHECK_THROWS_AS(pr_curve({{0.9, false}}), ValidationError);
}

TEST_CASE("pr points match the recount oracle exactly", "[eval]") {
    SplitMix64 rng(114);
    for (int trial = 0; trial < 200; ++trial) {
        auto outcomes = random_outcomes(rng, 4 + static_cast<int>(rng.bounded(80)),
                                        2 + static_cast<int>(rng.bounded(10)));
        outcomes.push_back({0.5, true});
        const auto got = pr_curve(outcomes);
        const auto want = oracle::pr_reference(outcomes);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].recall == want[i].recall);
            REQUIRE(got[i].precision == want[i].precision);
        }
        for (std::size_t i = 1; i < got.size(); ++i) REQUIRE(got[i].recall >= got[i - 1].recall);
    }
}

TEST_CASE("exact detections match every truth box", "[eval]") {
    std::vector<Box> truth = {{10, 10, 30, 90}, {100, 50, 36, 108}};
    std::vector<Detection> dets = {{truth[0], 0.9}, {truth[1], 0.8}};
    const MatchResult r = match_detections(dets, truth, 0.5);
    CHECK(r.matched == 2);
    CHECK(r.false_detections == 0);
    CHECK(r.missed == 0);
}

TEST_CASE("no detections means everything is missed", "[eval]") {
    const MatchResult r = match_detections({}, {{0, 0, 10, 30}, {50, 50, 10, 30}}, 0.5);
    CHECK(r.matched == 0);
    CHECK(r.false_detections == 0);
    CHECK(r.missed == 2);
}

TEST_CASE("greedy matching agrees with the reference on random sets", "[eval]") {
    SplitMix64 rng(115);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Detection> dets;
        std::vector<Box> truth;
        const int nd = static_cast<int>(rng.bounded(12));
        const int nt = static_cast<int>(rng.bounded(8));
        for (int i = 0; i < nd; ++i)
            dets.push_back({Box{static_cast<int>(rng.bounded(50)), static_cast<int>(rng.bounded(50)),
                                4 + static_cast<int>(rng.bounded(30)),
                                4 + static_cast<int>(rng.bounded(30))},
                            double(rng.bounded(10)) / 10.0});
        for (int i = 0; i < nt; ++i)
            truth.push_back({static_cast<int>(rng.bounded(50)), static_cast<int>(rng.bounded(50)),
                             4 + static_cast<int>(rng.bounded(30)), 4 + static_cast<int>(rng.bounded(30))});
        const MatchResult got = match_detections(dets, truth, 0.45);
        const auto [t, f, missed] = oracle::match_reference(dets, truth, 0.45);
        REQUIRE(got.matched == t);
        REQUIRE(got.false_detections == f);
        REQUIRE(got.missed == missed);
    }
}

// --- synthetic generator -----------------------------------------------------

namespace {

SyntheticConfig small_scene() {
    SyntheticConfig cfg;
    cfg.width = 160;
    cfg.height = 140;
    cfg.frame_count = 12;
    cfg.seed = 901;
    SyntheticPedestrian ped;
    ped.x0 = 10;
    ped.y0 = 16;
    ped.w = 36;
    ped.h = 108;
    ped.vx = 2.0;
    ped.vy = 0.25;
    ped.helmet = "red";
    cfg.pedestrians.push_back(ped);
    return cfg;
}

}  // namespace

TEST_CASE("identical seeds reproduce bit-identical scenes", "[eval][synthetic]") {
    const SyntheticConfig cfg = small_scene();
    const SyntheticScene a = generate_synthetic(cfg);
    const SyntheticScene b = generate_synthetic(cfg);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) REQUIRE(a.frames[i] == b.frames[i]);
    REQUIRE(a.truth.size() == b.truth.size());
}

TEST_CASE("a pedestrian-free scene is static except for noise", "[eval][synthetic]") {
    SyntheticConfig cfg = small_scene();
    cfg.pedestrians.clear();
    cfg.noise_sigma = 0.0;
    const SyntheticScene still = generate_synthetic(cfg);
    CHECK(still.truth.empty());
    for (std::size_t i = 1; i < still.frames.size(); ++i) REQUIRE(still.frames[i] == still.frames[0]);

    cfg.noise_sigma = 2.0;
    const SyntheticScene noisy = generate_synthetic(cfg);
    CHECK(noisy.frames[0] != noisy.frames[1]);
    double diff = 0;
    for (std::size_t i = 0; i < noisy.frames[0].data.size(); ++i)
        diff += std::abs(int(noisy.frames[0].data[i]) - int(noisy.frames[1].data[i]));
    CHECK(diff / double(noisy.frames[0].data.size()) < 6 * cfg.noise_sigma);
}

TEST_CASE("truth boxes stay inside the frame and follow the velocity", "[eval][synthetic]") {
    const SyntheticConfig cfg = small_scene();
    const SyntheticScene scene = generate_synthetic(cfg);
    REQUIRE(scene.truth.size() == static_cast<std::size_t>(cfg.frame_count));
    const Box frame{0, 0, cfg.width, cfg.height};
    for (const TruthEntry& t : scene.truth) {
        REQUIRE(frame.contains(t.box));
        const auto& p = cfg.pedestrians[0];
        REQUIRE(t.box.x == std::lround(p.x0 + t.frame_id * p.vx));
        REQUIRE(t.box.y == std::lround(p.y0 + t.frame_id * p.vy));
        REQUIRE(t.worn);
        REQUIRE(t.color == "red");
    }
}

TEST_CASE("the cap region of a red helmet averages near hue zero", "[eval][synthetic]") {
    const SyntheticConfig cfg = small_scene();
    const SyntheticScene scene = generate_synthetic(cfg);
    const TruthEntry& t = scene.truth[4];
    const RgbFrame& frame = scene.frames[static_cast<std::size_t>(t.frame_id)];

    double sx = 0, sy = 0;
    int count = 0;
    const int cap_h = std::max(1, t.box.h / 5);
    for (int y = t.box.y; y < t.box.y + cap_h; ++y)
        for (int x = t.box.x; x < t.box.x2(); ++x) {
            const std::uint8_t* p = frame.at(x, y);
            const HsvPixel hsv = rgb_to_hsv(p[0], p[1], p[2]);
            const double rad = hsv.h * 3.14159265358979 / 180.0;
            sx += std::cos(rad);
            sy += std::sin(rad);
            ++count;
        }
    REQUIRE(count > 0);
    const double mean_deg = std::atan2(sy / count, sx / count) * 180.0 / 3.14159265358979;
    CHECK(std::abs(mean_deg) <= 10.0);  // circular mean, red sits at 0
}

TEST_CASE("config validation rejects escaping tracks and oversized pedestrians", "[eval][synthetic]") {
    SyntheticConfig cfg = small_scene();
    cfg.pedestrians[0].vx = 50.0;  // leaves the frame
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
    cfg = small_scene();
    cfg.pedestrians[0].w = 500;
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
}
