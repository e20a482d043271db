#include <catch2/catch_amalgamated.hpp>

#include "hwd/centrist.hpp"
#include "oracles.hpp"

using namespace hwd;

namespace {

// interior positions a super-block covers, straight from the layout geometry
int super_block_interior(const BlockLayout& layout, int sr, int sc) {
    const int x0 = std::max(sc * layout.block_w(), 1);
    const int y0 = std::max(sr * layout.block_h(), 1);
    const int x1 = std::min((sc + 2) * layout.block_w(), layout.window_w - 1);
    const int y1 = std::min((sr + 2) * layout.block_h(), layout.window_h - 1);
    return (x1 - x0) * (y1 - y0);
}

}  // namespace

TEST_CASE("census transform reproduces the worked 3x3 example", "[centrist]") {
    GrayFrame patch(3, 3);
    const std::uint8_t rows[3][3] = {{32, 64, 96}, {32, 64, 96}, {32, 32, 96}};
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) patch.at(x, y) = rows[y][x];
    const CtFrame ct = census_transform(patch);
    CHECK(int(ct.at(1, 1)) == 214);
    // borders stay zero
    CHECK(int(ct.at(0, 0)) == 0);
    CHECK(int(ct.at(2, 2)) == 0);
}

TEST_CASE("census of a constant frame is 255 on the interior", "[centrist]") {
    for (const std::uint8_t c : {0, 13, 255}) {
        const GrayFrame f(9, 7, c);
        const CtFrame ct = census_transform(f);
        for (int y = 1; y < 6; ++y)
            for (int x = 1; x < 8; ++x) REQUIRE(int(ct.at(x, y)) == 255);
    }
}

TEST_CASE("census matches the bit-by-bit definition on random frames", "[centrist]") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const GrayFrame f = oracle::random_frame(rng, 8, 8);
        const CtFrame ct = census_transform(f);
        for (int y = 1; y < 7; ++y)
            for (int x = 1; x < 7; ++x)
                REQUIRE(int(ct.at(x, y)) == oracle::census_code_reference(f, x, y));
    }
    CHECK_THROWS_AS(census_transform(GrayFrame(2, 2, 0)), DimensionError);
}

TEST_CASE("feature has 6144 components with layout-fixed segment masses", "[centrist]") {
    const BlockLayout layout;
    REQUIRE(layout.super_count() == 24);
    REQUIRE(layout.feature_dim() == 6144);

    SplitMix64 rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayFrame patch = oracle::random_frame(rng, 36, 108);
        const CentristFeature f = extract_feature(patch);
        REQUIRE(f.size() == 6144);
        for (int sr = 0; sr < layout.super_rows(); ++sr)
            for (int sc = 0; sc < layout.super_cols(); ++sc) {
                const int seg = (sr * layout.super_cols() + sc) * 256;
                long mass = 0;
                for (int b = 0; b < 256; ++b) mass += f[seg + b];
                REQUIRE(mass == super_block_interior(layout, sr, sc));
            }
    }
}

TEST_CASE("extract_feature is deterministic and size-checked", "[centrist]") {
    SplitMix64 rng(63);
    const GrayFrame patch = oracle::random_frame(rng, 36, 108);
    CHECK(extract_feature(patch) == extract_feature(patch));
    CHECK_THROWS_AS(extract_feature(oracle::random_frame(rng, 36, 100)), DimensionError);
}

TEST_CASE("changing one pixel only disturbs super-blocks within reach", "[centrist]") {
    SplitMix64 rng(64);
    const BlockLayout layout;
    const GrayFrame patch = oracle::random_frame(rng, 36, 108);
    const CentristFeature base = extract_feature(patch);

    GrayFrame poked = patch;
    const int px = 18, py = 54;  // center of the window
    poked.at(px, py) = static_cast<std::uint8_t>(poked.at(px, py) ^ 0x80);
    const CentristFeature changed = extract_feature(poked);

    // census codes move only within a Chebyshev distance of 2 around the poke
    for (int sr = 0; sr < layout.super_rows(); ++sr)
        for (int sc = 0; sc < layout.super_cols(); ++sc) {
            const int x0 = sc * layout.block_w(), x1 = x0 + 2 * layout.block_w();
            const int y0 = sr * layout.block_h(), y1 = y0 + 2 * layout.block_h();
            const bool reachable =
                px >= x0 - 2 && px < x1 + 2 && py >= y0 - 2 && py < y1 + 2;
            if (reachable) continue;
            const int seg = (sr * layout.super_cols() + sc) * 256;
            for (int b = 0; b < 256; ++b) REQUIRE(base[seg + b] == changed[seg + b]);
        }
}

TEST_CASE("vertical translation by one block height shifts super-block rows", "[centrist]") {
    SplitMix64 rng(65);
    const BlockLayout layout;
    const GrayFrame patch = oracle::random_frame(rng, 36, 108);
    GrayFrame shifted(36, 108);
    for (int y = 0; y < 108; ++y)
        for (int x = 0; x < 36; ++x)
            shifted.at(x, y) = patch.at(x, std::min(107, y + layout.block_h()));

    const CentristFeature base = extract_feature(patch);
    const CentristFeature moved = extract_feature(shifted);
    // rows 1..5 of the shifted feature see exactly what rows 2..6 of the
    // original saw; both ranges avoid the window border
    for (int sr = 1; sr <= 5; ++sr)
        for (int sc = 0; sc < layout.super_cols(); ++sc) {
            const int seg_moved = (sr * layout.super_cols() + sc) * 256;
            const int seg_base = ((sr + 1) * layout.super_cols() + sc) * 256;
            for (int b = 0; b < 256; ++b) REQUIRE(moved[seg_moved + b] == base[seg_base + b]);
        }
}

TEST_CASE("resample of an exact-size bbox is the identity", "[centrist]") {
    SplitMix64 rng(66);
    const GrayFrame frame = oracle::random_frame(rng, 80, 160);
    const Box bbox{11, 23, 36, 108};
    const GrayFrame patch = resample_patch(frame, bbox);
    CHECK(patch == crop(frame, bbox));
}

TEST_CASE("resample of a constant region is constant", "[centrist]") {
    const GrayFrame frame(50, 60, 77);
    const GrayFrame patch = resample_patch(frame, Box{5, 5, 17, 41});
    for (auto v : patch.data) REQUIRE(v == 77);
}

TEST_CASE("resample matches the naive bilinear oracle within one step", "[centrist]") {
    SplitMix64 rng(67);
    // checkerboard downscaled 2x plus random content
    GrayFrame checker(72, 216);
    for (int y = 0; y < 216; ++y)
        for (int x = 0; x < 72; ++x) checker.at(x, y) = ((x + y) % 2) ? 255 : 0;
    const GrayFrame frames[2] = {checker, oracle::random_frame(rng, 72, 216)};
    for (const GrayFrame& frame : frames) {
        const Box bbox{0, 0, 72, 216};
        const GrayFrame patch = resample_patch(frame, bbox);
        for (int v = 0; v < 108; ++v)
            for (int u = 0; u < 36; ++u) {
                const double want = oracle::bilinear_reference(frame, bbox, u, v, 36, 108);
                REQUIRE(std::abs(double(patch.at(u, v)) - want) <= 1.0);
            }
    }
    CHECK_THROWS_AS(resample_patch(frames[0], Box{0, 0, 1, 50}), DimensionError);
}
