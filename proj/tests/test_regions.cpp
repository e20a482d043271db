#include <catch2/catch_amalgamated.hpp>

#include "hwd/regions.hpp"
#include "oracles.hpp"

using namespace hwd;

namespace {

MotionMask random_blob_mask(SplitMix64& rng, int w, int h, int blobs) {
    MotionMask mask(w, h);
    for (int b = 0; b < blobs; ++b) {
        const int bw = 1 + static_cast<int>(rng.bounded(6));
        const int bh = 1 + static_cast<int>(rng.bounded(6));
        const int x0 = static_cast<int>(rng.bounded(std::max(1, w - bw)));
        const int y0 = static_cast<int>(rng.bounded(std::max(1, h - bh)));
        for (int y = y0; y < y0 + bh; ++y)
            for (int x = x0; x < x0 + bw; ++x) mask.fg[static_cast<std::size_t>(y) * w + x] = 1;
    }
    return mask;
}

}  // namespace

TEST_CASE("dilate and erode match the naive window reference", "[regions]") {
    SplitMix64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        MotionMask mask(15, 11);
        for (auto& b : mask.fg) b = rng.bounded(3) == 0;
        for (const int radius : {1, 2}) {
            MotionMask d = mask;
            dilate(d, radius);
            CHECK(d.fg == oracle::morph_reference(mask, radius, true).fg);
            MotionMask e = mask;
            erode(e, radius);
            CHECK(e.fg == oracle::morph_reference(mask, radius, false).fg);
        }
    }
}

TEST_CASE("empty mask yields no regions", "[regions]") {
    const MotionMask mask(20, 20);
    CHECK(extract_regions(mask, 1, 1).empty());
}

TEST_CASE("a solid rectangle survives morphology with its exact bbox", "[regions]") {
    MotionMask mask(64, 64);
    for (int y = 10; y < 50; ++y)
        for (int x = 20; x < 40; ++x) mask.fg[static_cast<std::size_t>(y) * 64 + x] = 1;
    const auto regions = extract_regions(mask, 50, 1);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].bbox == Box{20, 10, 20, 40});
    CHECK(regions[0].area == 20 * 40);
}

TEST_CASE("labeling matches the flood-fill reference on random masks", "[regions]") {
    SplitMix64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        const MotionMask mask = random_blob_mask(rng, 24, 18, 1 + static_cast<int>(rng.bounded(8)));
        // morph_radius 0 isolates the labeling stage
        auto regions = extract_regions(mask, 1, 0);
        auto expected = oracle::flood_fill_reference(mask);
        REQUIRE(regions.size() == expected.size());
        auto key = [](const Box& b) { return std::tuple(b.x, b.y, b.w, b.h); };
        std::sort(regions.begin(), regions.end(),
                  [&](const MotionRegion& a, const MotionRegion& b) { return key(a.bbox) < key(b.bbox); });
        std::sort(expected.begin(), expected.end(),
                  [&](const oracle::FloodRegion& a, const oracle::FloodRegion& b) {
                      return key(a.bbox) < key(b.bbox);
                  });
        for (std::size_t i = 0; i < regions.size(); ++i) {
            REQUIRE(regions[i].bbox == expected[i].bbox);
            REQUIRE(regions[i].area == expected[i].area);
        }
    }
}

TEST_CASE("min_area filters small components and order is by area", "[regions]") {
    MotionMask mask(32, 32);
    auto fill = [&](int x0, int y0, int w, int h) {
        for (int y = y0; y < y0 + h; ++y)
            for (int x = x0; x < x0 + w; ++x) mask.fg[static_cast<std::size_t>(y) * 32 + x] = 1;
    };
    fill(2, 2, 3, 3);    // area 9
    fill(10, 10, 6, 6);  // area 36
    fill(20, 20, 4, 4);  // area 16
    const auto regions = extract_regions(mask, 10, 0);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].area == 36);
    CHECK(regions[1].area == 16);
}

TEST_CASE("returned bboxes are tight", "[regions]") {
    SplitMix64 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const MotionMask mask = random_blob_mask(rng, 20, 20, 4);
        for (const MotionRegion& r : extract_regions(mask, 1, 0)) {
            bool top = false, bottom = false, left = false, right = false;
            for (int x = r.bbox.x; x < r.bbox.x2(); ++x) {
                top |= mask.fg[static_cast<std::size_t>(r.bbox.y) * 20 + x] != 0;
                bottom |= mask.fg[static_cast<std::size_t>(r.bbox.y2() - 1) * 20 + x] != 0;
            }
            for (int y = r.bbox.y; y < r.bbox.y2(); ++y) {
                left |= mask.fg[static_cast<std::size_t>(y) * 20 + r.bbox.x] != 0;
                right |= mask.fg[static_cast<std::size_t>(y) * 20 + r.bbox.x2() - 1] != 0;
            }
            REQUIRE(top);
            REQUIRE(bottom);
            REQUIRE(left);
            REQUIRE(right);
        }
    }
}

TEST_CASE("morphological open removes speckles, close fills pinholes", "[regions]") {
    MotionMask mask(20, 20);
    mask.fg[1 * 20 + 1] = 1;  // isolated pixel
    for (int y = 5; y < 15; ++y)
        for (int x = 5; x < 15; ++x) mask.fg[static_cast<std::size_t>(y) * 20 + x] = 1;
    mask.fg[9 * 20 + 9] = 0;  // pinhole deep inside the square
    MotionMask cleaned = mask;
    morph_open(cleaned, 1);
    morph_close(cleaned, 1);
    CHECK(cleaned.fg[1 * 20 + 1] == 0);
    CHECK(cleaned.fg[9 * 20 + 9] == 1);
}
