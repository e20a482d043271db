#include <catch2/catch_amalgamated.hpp>

#include "hwd/vibe.hpp"
#include "oracles.hpp"

using namespace hwd;

namespace {

ViBeParams params(std::uint64_t seed) {
    ViBeParams p;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_CASE("init on a constant frame copies the constant everywhere", "[vibe]") {
    const GrayFrame first(12, 10, 100);
    const BackgroundModel model(first, params(31));
    for (std::uint8_t s : model.samples()) REQUIRE(s == 100);
}

TEST_CASE("init draws every sample from the 3x3 neighborhood", "[vibe]") {
    SplitMix64 rng(32);
    const GrayFrame first = oracle::random_frame(rng, 17, 13);
    const BackgroundModel model(first, params(33));
    REQUIRE(model.params().n_samples == 20);
    for (int y = 0; y < first.height; ++y) {
        for (int x = 0; x < first.width; ++x) {
            const std::uint8_t* s = model.pixel_samples(x, y);
            for (int i = 0; i < 20; ++i) {
                bool in_neighborhood = false;
                for (int dy = -1; dy <= 1 && !in_neighborhood; ++dy)
                    for (int dx = -1; dx <= 1 && !in_neighborhood; ++dx) {
                        const int nx = std::clamp(x + dx, 0, first.width - 1);
                        const int ny = std::clamp(y + dy, 0, first.height - 1);
                        if (first.at(nx, ny) == s[i]) in_neighborhood = true;
                    }
                REQUIRE(in_neighborhood);
            }
        }
    }
}

TEST_CASE("init rejects tiny frames and bad params", "[vibe]") {
    CHECK_THROWS_AS(BackgroundModel(GrayFrame(2, 8, 0), params(1)), DimensionError);
    ViBeParams bad = params(1);
    bad.subsample = 0;
    CHECK_THROWS_WITH(BackgroundModel(GrayFrame(8, 8, 0), bad),
                      Catch::Matchers::ContainsSubstring("subsample"));
}

TEST_CASE("segmenting the init frame of a constant scene yields no foreground", "[vibe]") {
    const GrayFrame first(16, 12, 80);
    const BackgroundModel model(first, params(34));
    CHECK(model.segment(first).foreground_count() == 0);
}

TEST_CASE("values far from all samples are foreground", "[vibe]") {
    const GrayFrame first(8, 8, 10);
    const BackgroundModel model(first, params(35));
    const GrayFrame far(8, 8, 200);  // |200 - 10| > radius
    CHECK(model.segment(far).foreground_count() == far.pixel_count());
}

TEST_CASE("segment matches the naive double-loop reference", "[vibe]") {
    SplitMix64 rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        const GrayFrame first = oracle::random_frame(rng, 9, 7);
        ViBeParams p = params(rng.next());
        p.n_samples = 4 + static_cast<int>(rng.bounded(12));
        p.min_matches = 1 + static_cast<int>(rng.bounded(3));
        p.radius = 5 + static_cast<int>(rng.bounded(30));
        BackgroundModel model(first, p);
        // age the model so samples decorrelate from the init frame
        const GrayFrame drift = oracle::random_frame(rng, 9, 7);
        model.update(drift, MotionMask(9, 7));
        const GrayFrame probe = oracle::random_frame(rng, 9, 7);
        const MotionMask got = model.segment(probe);
        const MotionMask want = oracle::segment_reference(model, probe);
        REQUIRE(got.fg == want.fg);
    }
}

TEST_CASE("segment and update reject mismatched dimensions", "[vibe]") {
    const GrayFrame first(8, 8, 10);
    BackgroundModel model(first, params(37));
    CHECK_THROWS_AS(model.segment(GrayFrame(9, 8, 0)), DimensionError);
    CHECK_THROWS_AS(model.update(GrayFrame(8, 8, 0), MotionMask(7, 8)), DimensionError);
}

TEST_CASE("an all-foreground mask leaves the model bit-identical", "[vibe]") {
    SplitMix64 rng(38);
    const GrayFrame first = oracle::random_frame(rng, 14, 11);
    BackgroundModel model(first, params(39));
    MotionMask all_fg(14, 11);
    std::fill(all_fg.fg.begin(), all_fg.fg.end(), std::uint8_t(1));
    const std::vector<std::uint8_t> before = model.samples();
    const UpdateStats stats = model.update(oracle::random_frame(rng, 14, 11), all_fg);
    CHECK(model.samples() == before);
    CHECK(stats.own_updates == 0);
    CHECK(stats.neighbor_updates == 0);
}

TEST_CASE("foreground samples never change under any mask", "[vibe]") {
    SplitMix64 rng(40);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayFrame first = oracle::random_frame(rng, 10, 10);
        BackgroundModel model(first, params(rng.next()));
        MotionMask mask(10, 10);
        for (auto& b : mask.fg) b = static_cast<std::uint8_t>(rng.bounded(2));
        const std::vector<std::uint8_t> before = model.samples();
        model.update(oracle::random_frame(rng, 10, 10), mask);
        const int n = model.params().n_samples;
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 10; ++x) {
                if (!mask.is_foreground(x, y)) continue;
                const std::size_t base = (static_cast<std::size_t>(y) * 10 + x) * n;
                for (int i = 0; i < n; ++i) REQUIRE(model.samples()[base + i] == before[base + i]);
            }
    }
}

TEST_CASE("subsample 1 updates one own sample of every background pixel", "[vibe]") {
    const GrayFrame first(9, 9, 50);
    ViBeParams p = params(41);
    p.subsample = 1;
    BackgroundModel model(first, p);
    const UpdateStats stats = model.update(GrayFrame(9, 9, 60), MotionMask(9, 9));
    CHECK(stats.own_updates == 81);
}

TEST_CASE("measured update rate approaches 1/beta", "[vibe]") {
    const GrayFrame first(16, 16, 90);
    ViBeParams p = params(42);
    p.subsample = 16;
    BackgroundModel model(first, p);
    const MotionMask none(16, 16);
    std::uint64_t own = 0;
    const int frames = 10000;
    for (int t = 0; t < frames; ++t) own += model.update(first, none).own_updates;
    const double rate = double(own) / (double(frames) * first.pixel_count());
    CHECK(rate > (1.0 / 16) * 0.9);
    CHECK(rate < (1.0 / 16) * 1.1);
}

TEST_CASE("a static constant scene stays fully background through 100 updates", "[vibe]") {
    const GrayFrame frame(20, 15, 123);
    BackgroundModel model(frame, params(43));
    for (int t = 0; t < 100; ++t) {
        const MotionMask mask = model.segment(frame);
        REQUIRE(mask.foreground_count() == 0);
        model.update(frame, mask);
    }
    CHECK(model.segment(frame).foreground_count() == 0);
}

TEST_CASE("update is deterministic given the seed", "[vibe]") {
    SplitMix64 rng(44);
    const GrayFrame first = oracle::random_frame(rng, 12, 12);
    const GrayFrame next = oracle::random_frame(rng, 12, 12);
    BackgroundModel a(first, params(7));
    BackgroundModel b(first, params(7));
    REQUIRE(a.samples() == b.samples());
    const MotionMask mask_a = a.segment(next);
    const MotionMask mask_b = b.segment(next);
    REQUIRE(mask_a.fg == mask_b.fg);
    a.update(next, mask_a);
    b.update(next, mask_b);
    CHECK(a.samples() == b.samples());
}
