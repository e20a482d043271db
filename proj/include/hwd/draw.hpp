#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "hwd/geometry.hpp"
#include "hwd/image.hpp"

namespace hwd {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

/// One-pixel rectangle outline, clipped to the frame.
inline void draw_rect(RgbFrame& frame, const Box& box, Rgb color) {
    if (box.empty()) return;
    auto put = [&](int x, int y) {
        if (x >= 0 && x < frame.width && y >= 0 && y < frame.height)
            frame.set(x, y, color.r, color.g, color.b);
    };
    for (int x = box.x; x < box.x2(); ++x) {
        put(x, box.y);
        put(x, box.y2() - 1);
    }
    for (int y = box.y; y < box.y2(); ++y) {
        put(box.x, y);
        put(box.x2() - 1, y);
    }
}

namespace detail {

// 5x7 glyphs for A-Z, 0-9, '.', '-', ' '; one byte per row, low 5 bits used.
inline const std::uint8_t* glyph5x7(char c) {
    static constexpr std::array<std::array<std::uint8_t, 7>, 26> letters = {{
        {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},  // A
        {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},  // B
        {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E},  // C
        {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E},  // D
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F},  // E
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},  // F
        {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F},  // G
        {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},  // H
        {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E},  // I
        {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},  // J
        {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11},  // K
        {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},  // L
        {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11},  // M
        {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11},  // N
        {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // O
        {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},  // P
        {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D},  // Q
        {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},  // R
        {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E},  // S
        {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},  // T
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // U
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},  // V
        {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11},  // W
        {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},  // X
        {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04},  // Y
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},  // Z
    }};
    static constexpr std::array<std::array<std::uint8_t, 7>, 10> digits = {{
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
        {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
        {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
        {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
        {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
    }};
    static constexpr std::array<std::uint8_t, 7> dot = {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C};
    static constexpr std::array<std::uint8_t, 7> dash = {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00};
    static constexpr std::array<std::uint8_t, 7> blank = {0, 0, 0, 0, 0, 0, 0};
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (c >= 'A' && c <= 'Z') return letters[static_cast<std::size_t>(c - 'A')].data();
    if (c >= '0' && c <= '9') return digits[static_cast<std::size_t>(c - '0')].data();
    if (c == '.') return dot.data();
    if (c == '-') return dash.data();
    return blank.data();
}

}  // namespace detail

/// 5x7 bitmap text with a 1-pixel advance gap; clipped to the frame.
inline void draw_text(RgbFrame& frame, int x, int y, const std::string& text, Rgb color) {
    for (char c : text) {
        const std::uint8_t* glyph = detail::glyph5x7(c);
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (glyph[row] & (1 << (4 - col))) {
                    const int px = x + col, py = y + row;
                    if (px >= 0 && px < frame.width && py >= 0 && py < frame.height)
                        frame.set(px, py, color.r, color.g, color.b);
                }
        x += 6;
    }
}

}  // namespace hwd
