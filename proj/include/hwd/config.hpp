#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hwd/detector.hpp"
#include "hwd/errors.hpp"
#include "hwd/helmet.hpp"
#include "hwd/svm.hpp"
#include "hwd/synthetic.hpp"
#include "hwd/vibe.hpp"

namespace hwd {

struct RegionParams {
    std::int64_t min_area = 200;
    int morph_radius = 1;

    void validate() const {
        if (min_area < 0) throw ValidationError("min_area must be >= 0");
        if (morph_radius < 0) throw ValidationError("morph_radius must be >= 0");
    }
};

struct EvalParams {
    double iou_min = 0.5;

    void validate() const {
        if (!(iou_min > 0 && iou_min <= 1)) throw ValidationError("iou_min must be in (0, 1]");
    }
};

/// Every tunable of the pipeline, grouped per stage. load_config overlays a
/// flat `key = value` file with [section] headers onto these defaults and
/// validates each value against its stage's requirements.
struct PipelineConfig {
    ViBeParams vibe;
    RegionParams regions;
    ScanParams scan;
    std::optional<double> theta1;  // cascade stage threshold overrides; absent keeps the model's
    std::optional<double> theta2;
    TrainConfig train;
    HelmetParams helmet;
    EvalParams eval;
    SyntheticConfig synth;

    void validate() const {
        vibe.validate();
        regions.validate();
        scan.validate();
        train.validate();
        helmet.validate();
        eval.validate();
        synth.validate();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double config_double(const std::string& value, const std::string& key) {
    double v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw ValidationError("config: '" + key + "' is not a number: '" + value + "'");
    return v;
}

inline long long config_int(const std::string& value, const std::string& key) {
    long long v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw ValidationError("config: '" + key + "' is not an integer: '" + value + "'");
    return v;
}

inline std::uint64_t config_seed(const std::string& value, const std::string& key) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw ValidationError("config: '" + key + "' is not a seed: '" + value + "'");
    return v;
}

inline bool config_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ValidationError("config: '" + key + "' is not a boolean: '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace detail

/// Parses the configuration file format:
///   # comment
///   [section]
///   key = value
/// Unknown sections or keys are validation errors so typos cannot pass
/// silently. See the README for the full key reference.
inline PipelineConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("cannot open config " + path.string());
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path.string());

    PipelineConfig cfg;
    bool custom_hues = false;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ValidationError("config: malformed section at line " + std::to_string(line_no));
            section = t.substr(1, t.size() - 2);
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected 'key = value' at line " + std::to_string(line_no));
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        const std::string full = section + "." + key;

        auto unknown = [&]() -> void {
            throw ValidationError("config: unknown key '" + full + "'");
        };

        if (section == "vibe") {
            if (key == "n_samples") cfg.vibe.n_samples = static_cast<int>(detail::config_int(value, full));
            else if (key == "radius") cfg.vibe.radius = static_cast<int>(detail::config_int(value, full));
            else if (key == "min_matches") cfg.vibe.min_matches = static_cast<int>(detail::config_int(value, full));
            else if (key == "subsample") cfg.vibe.subsample = static_cast<int>(detail::config_int(value, full));
            else if (key == "seed") cfg.vibe.seed = detail::config_seed(value, full);
            else unknown();
        } else if (section == "regions") {
            if (key == "min_area") cfg.regions.min_area = detail::config_int(value, full);
            else if (key == "morph_radius") cfg.regions.morph_radius = static_cast<int>(detail::config_int(value, full));
            else unknown();
        } else if (section == "scan") {
            if (key == "pad") cfg.scan.pad = detail::config_double(value, full);
            else if (key == "scale_min") cfg.scan.scale_min = detail::config_double(value, full);
            else if (key == "scale_max") cfg.scan.scale_max = detail::config_double(value, full);
            else if (key == "scale_step") cfg.scan.scale_step = detail::config_double(value, full);
            else if (key == "stride_fraction") cfg.scan.stride_fraction = detail::config_double(value, full);
            else if (key == "nms_iou") cfg.scan.nms_iou = detail::config_double(value, full);
            else unknown();
        } else if (section == "cascade") {
            if (key == "theta1") cfg.theta1 = detail::config_double(value, full);
            else if (key == "theta2") cfg.theta2 = detail::config_double(value, full);
            else unknown();
        } else if (section == "train") {
            if (key == "c") cfg.train.c = detail::config_double(value, full);
            else if (key == "rounds") cfg.train.rounds = static_cast<int>(detail::config_int(value, full));
            else if (key == "negatives_per_round") cfg.train.negatives_per_round = static_cast<int>(detail::config_int(value, full));
            else if (key == "kkt_tol") cfg.train.kkt_tol = detail::config_double(value, full);
            else if (key == "max_solver_iters") cfg.train.max_solver_iters = static_cast<long>(detail::config_int(value, full));
            else if (key == "seed") cfg.train.seed = detail::config_seed(value, full);
            else unknown();
        } else if (section == "helmet") {
            if (key == "head_fraction") cfg.helmet.head_fraction = detail::config_double(value, full);
            else if (key == "rho") cfg.helmet.rho = detail::config_double(value, full);
            else if (key == "v_floor") cfg.helmet.v_floor = detail::config_double(value, full);
            else if (key == "white_enabled") cfg.helmet.white_enabled = detail::config_bool(value, full);
            else if (key == "white_v_min") cfg.helmet.white_v_min = detail::config_double(value, full);
            else if (key.rfind("hue_", 0) == 0) {
                const std::string label = key.substr(4);
                const auto parts = detail::split_list(value);
                if (label.empty() || parts.size() != 2)
                    throw ValidationError("config: '" + full + "' must be 'hue_<label> = lo,hi'");
                if (!custom_hues) {
                    cfg.helmet.ranges.clear();  // any hue key replaces the default palette
                    custom_hues = true;
                }
                cfg.helmet.ranges.push_back({label, detail::config_double(parts[0], full),
                                             detail::config_double(parts[1], full)});
            } else {
                unknown();
            }
        } else if (section == "eval") {
            if (key == "iou_min") cfg.eval.iou_min = detail::config_double(value, full);
            else unknown();
        } else if (section == "synth") {
            if (key == "width") cfg.synth.width = static_cast<int>(detail::config_int(value, full));
            else if (key == "height") cfg.synth.height = static_cast<int>(detail::config_int(value, full));
            else if (key == "frames") cfg.synth.frame_count = static_cast<int>(detail::config_int(value, full));
            else if (key == "noise_sigma") cfg.synth.noise_sigma = detail::config_double(value, full);
            else if (key == "seed") cfg.synth.seed = detail::config_seed(value, full);
            else if (key.rfind("ped", 0) == 0) {
                // pedN = x, y, w, h, vx, vy, color[, enter_frame]
                const auto parts = detail::split_list(value);
                if (parts.size() != 7 && parts.size() != 8)
                    throw ValidationError("config: '" + full +
                                          "' must be 'x,y,w,h,vx,vy,color[,enter_frame]'");
                SyntheticPedestrian p;
                p.x0 = detail::config_double(parts[0], full);
                p.y0 = detail::config_double(parts[1], full);
                p.w = static_cast<int>(detail::config_int(parts[2], full));
                p.h = static_cast<int>(detail::config_int(parts[3], full));
                p.vx = detail::config_double(parts[4], full);
                p.vy = detail::config_double(parts[5], full);
                p.helmet = parts[6];
                if (parts.size() == 8) p.enter_frame = static_cast<int>(detail::config_int(parts[7], full));
                cfg.synth.pedestrians.push_back(p);
            } else {
                unknown();
            }
        } else {
            throw ValidationError("config: unknown section '" + section + "'");
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace hwd
