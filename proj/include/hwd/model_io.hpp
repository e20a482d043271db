#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hwd/cascade.hpp"
#include "hwd/errors.hpp"

namespace hwd {

// Cascade model file, magic "HWC1", all fields little-endian:
//   char[4]  magic
//   u32      version (1)
//   u32      window_w, window_h, grid_rows, grid_cols
//   u32      feature_dim
//   f64      linear bias, theta1
//   f64[dim] linear weights
//   f64      hik bias, theta2
//   u32      support vector count
//   f64[n]   label-folded alphas
//   u16[n*dim] support vectors (integer census counts)
// The HIK lookup table is derived data and rebuilt on load.

namespace detail {

inline void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void get_bytes(std::istream& in, void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n)) throw FormatError("model file truncated");
}

template <typename T>
void put_le(std::ostream& out, T v) {
    static_assert(std::endian::native == std::endian::little,
                  "serialization assumes a little-endian host");
    put_bytes(out, &v, sizeof(v));
}

template <typename T>
T get_le(std::istream& in) {
    static_assert(std::endian::native == std::endian::little,
                  "serialization assumes a little-endian host");
    T v;
    get_bytes(in, &v, sizeof(v));
    return v;
}

}  // namespace detail

inline void save_model(const std::filesystem::path& path, const CascadeModel& model) {
    const std::size_t dim = model.linear.weights.size();
    if (static_cast<int>(dim) != model.layout.feature_dim())
        throw DimensionError("save_model: weight length does not match layout");
    for (const auto& sv : model.hik.support_vectors) {
        if (sv.size() != dim) throw DimensionError("save_model: support vector length mismatch");
        for (double v : sv)
            if (v < 0 || v > 65535 || v != std::floor(v))
                throw ValidationError("save_model: support vectors must hold integers in [0, 65535]");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write model " + path.string());
    detail::put_bytes(out, "HWC1", 4);
    detail::put_le<std::uint32_t>(out, 1);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layout.window_w));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layout.window_h));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layout.grid_rows));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layout.grid_cols));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
    detail::put_le<double>(out, model.linear.bias);
    detail::put_le<double>(out, model.linear.stage_threshold);
    for (double w : model.linear.weights) detail::put_le<double>(out, w);
    detail::put_le<double>(out, model.hik.bias);
    detail::put_le<double>(out, model.hik.stage_threshold);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.hik.support_vectors.size()));
    for (double a : model.hik.alphas) detail::put_le<double>(out, a);
    for (const auto& sv : model.hik.support_vectors)
        for (double v : sv) detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(v));
    if (!out) throw InputError("short write to " + path.string());
}

inline CascadeModel load_model(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("cannot open model " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model " + path.string());

    char magic[4];
    detail::get_bytes(in, magic, 4);
    if (std::memcmp(magic, "HWC1", 4) != 0) throw FormatError("not a cascade model file (bad magic)");
    const auto version = detail::get_le<std::uint32_t>(in);
    if (version != 1) throw FormatError("unsupported model version " + std::to_string(version));

    CascadeModel model;
    model.layout.window_w = static_cast<int>(detail::get_le<std::uint32_t>(in));
    model.layout.window_h = static_cast<int>(detail::get_le<std::uint32_t>(in));
    model.layout.grid_rows = static_cast<int>(detail::get_le<std::uint32_t>(in));
    model.layout.grid_cols = static_cast<int>(detail::get_le<std::uint32_t>(in));
    const auto dim = detail::get_le<std::uint32_t>(in);
    try {
        model.layout.validate();
    } catch (const ValidationError& e) {
        throw FormatError(std::string("model layout invalid: ") + e.what());
    }
    if (dim != static_cast<std::uint32_t>(model.layout.feature_dim()))
        throw FormatError("model feature dimension does not match layout");

    model.linear.bias = detail::get_le<double>(in);
    model.linear.stage_threshold = detail::get_le<double>(in);
    model.linear.weights.resize(dim);
    for (double& w : model.linear.weights) w = detail::get_le<double>(in);
    model.hik.bias = detail::get_le<double>(in);
    model.hik.stage_threshold = detail::get_le<double>(in);
    const auto sv_count = detail::get_le<std::uint32_t>(in);
    if (sv_count > (1u << 24)) throw FormatError("implausible support vector count");
    model.hik.alphas.resize(sv_count);
    for (double& a : model.hik.alphas) a = detail::get_le<double>(in);
    model.hik.support_vectors.assign(sv_count, std::vector<double>(dim));
    for (auto& sv : model.hik.support_vectors)
        for (double& v : sv) v = static_cast<double>(detail::get_le<std::uint16_t>(in));

    char extra;
    if (in.read(&extra, 1), in.gcount() != 0) throw FormatError("trailing bytes in model file");
    model.build_table();
    return model;
}

}  // namespace hwd
