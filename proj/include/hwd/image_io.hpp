#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "hwd/errors.hpp"
#include "hwd/image.hpp"

namespace hwd {

namespace detail {

inline int next_pnm_token(std::istream& in) {
    // skips whitespace and '#' comments, returns the next unsigned integer
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw FormatError("pnm: malformed header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) throw FormatError("pnm: header value out of range");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

inline void read_pnm_header(std::istream& in, const char* magic, int& w, int& h) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != magic[0] || m1 != magic[1]) throw FormatError("pnm: bad magic");
    w = next_pnm_token(in);
    h = next_pnm_token(in);
    const int maxval = next_pnm_token(in);
    if (w <= 0 || h <= 0) throw FormatError("pnm: bad dimensions");
    if (maxval != 255) throw FormatError("pnm: only maxval 255 is supported");
    in.get();  // single whitespace before raster
    if (!in) throw FormatError("pnm: truncated header");
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("cannot open " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

}  // namespace detail

inline GrayFrame read_pgm(const std::filesystem::path& path) {
    std::ifstream in = detail::open_input(path);
    int w = 0, h = 0;
    detail::read_pnm_header(in, "P5", w, h);
    GrayFrame frame(w, h);
    in.read(reinterpret_cast<char*>(frame.data.data()), static_cast<std::streamsize>(frame.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.data.size()))
        throw FormatError("pgm: truncated raster in " + path.string());
    return frame;
}

inline RgbFrame read_ppm(const std::filesystem::path& path) {
    std::ifstream in = detail::open_input(path);
    int w = 0, h = 0;
    detail::read_pnm_header(in, "P6", w, h);
    RgbFrame frame(w, h);
    in.read(reinterpret_cast<char*>(frame.data.data()), static_cast<std::streamsize>(frame.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.data.size()))
        throw FormatError("ppm: truncated raster in " + path.string());
    return frame;
}

inline void write_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.data.size()));
    if (!out) throw InputError("short write to " + path.string());
}

inline void write_ppm(const std::filesystem::path& path, const RgbFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.data.size()));
    if (!out) throw InputError("short write to " + path.string());
}

inline RgbFrame read_png_rgb(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("cannot open " + path.string());
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str()))
        throw FormatError("png: " + std::string(image.message) + " in " + path.string());
    image.format = PNG_FORMAT_RGB;
    RgbFrame frame(static_cast<int>(image.width), static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, frame.data.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw FormatError("png: " + message + " in " + path.string());
    }
    return frame;
}

inline void write_png(const std::filesystem::path& path, const RgbFrame& frame) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(frame.width);
    image.height = static_cast<png_uint_32>(frame.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, frame.data.data(), 0, nullptr))
        throw InputError("png write failed: " + std::string(image.message) + " for " + path.string());
}

inline void write_png(const std::filesystem::path& path, const GrayFrame& frame) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(frame.width);
    image.height = static_cast<png_uint_32>(frame.height);
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, frame.data.data(), 0, nullptr))
        throw InputError("png write failed: " + std::string(image.message) + " for " + path.string());
}

/// Reads a frame as RGB regardless of the container; PGM and grayscale PNG
/// replicate into three channels.
inline RgbFrame read_frame_rgb(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") return gray_to_rgb(read_pgm(path));
    if (ext == ".ppm") return read_ppm(path);
    if (ext == ".png") return read_png_rgb(path);
    throw InputError("unsupported frame format: " + path.string());
}

/// Reads a frame as grayscale; color inputs convert with the BT.601 luma
/// weights so every container yields the same intensities.
inline GrayFrame read_frame_gray(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") return read_pgm(path);
    return to_gray(read_frame_rgb(path));
}

struct FrameFile {
    int id = 0;
    std::filesystem::path path;
};

/// Frames in a directory (frame_000001.png, ...), sorted by filename. The
/// frame id comes from the trailing digits of the stem, or the position when
/// a name carries none.
inline std::vector<FrameFile> list_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".pgm" || ext == ".ppm") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<FrameFile> frames;
    frames.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const std::string stem = paths[i].stem().string();
        std::size_t d = stem.size();
        while (d > 0 && std::isdigit(static_cast<unsigned char>(stem[d - 1]))) --d;
        int id = static_cast<int>(i);
        if (d < stem.size()) {
            try {
                id = std::stoi(stem.substr(d));
            } catch (const std::exception&) {
                id = static_cast<int>(i);
            }
        }
        frames.push_back({id, paths[i]});
    }
    return frames;
}

}  // namespace hwd
