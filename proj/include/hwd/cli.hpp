#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hwd/cascade.hpp"
#include "hwd/config.hpp"
#include "hwd/image_io.hpp"
#include "hwd/model_io.hpp"
#include "hwd/pipeline.hpp"
#include "hwd/synthetic.hpp"

namespace hwd::cli {

namespace fs = std::filesystem;

inline std::string frame_name(const char* prefix, int id, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%06d.%s", prefix, id, ext);
    return buf;
}

inline PipelineConfig load_config_or_default(const std::string& path) {
    if (path.empty()) {
        PipelineConfig cfg;
        cfg.validate();
        return cfg;
    }
    return load_config(path);
}

// ---------------------------------------------------------------------------

inline int cmd_synth(const std::string& config_path, const std::string& out_dir, int patches,
                     int negatives, int neg_w, int neg_h) {
    const PipelineConfig cfg = load_config_or_default(config_path);
    const fs::path out(out_dir);
    fs::create_directories(out / "pos");
    fs::create_directories(out / "neg");
    fs::create_directories(out / "seq");

    // patch and negative streams are decoupled from the scene stream
    SplitMix64 patch_seeds(cfg.synth.seed ^ 0x706f736974697665ull);
    SplitMix64 neg_seeds(cfg.synth.seed ^ 0x6e65676174697665ull);
    const std::vector<std::string> cap_cycle = {"red", "yellow", "blue", "none"};
    for (int i = 0; i < patches; ++i) {
        const RgbFrame patch = render_pedestrian_patch(patch_seeds.next(), cap_cycle[i % cap_cycle.size()]);
        write_png(out / "pos" / frame_name("patch", i + 1, "png"), patch);
    }
    for (int i = 0; i < negatives; ++i) {
        const RgbFrame image = render_negative_image(neg_seeds.next(), neg_w, neg_h);
        write_png(out / "neg" / frame_name("neg", i + 1, "png"), image);
    }

    const SyntheticScene scene = generate_synthetic(cfg.synth);
    for (std::size_t t = 0; t < scene.frames.size(); ++t)
        write_png(out / "seq" / frame_name("frame", static_cast<int>(t) + 1, "png"), scene.frames[t]);
    // truth frame ids follow the 1-based file numbering
    std::vector<TruthEntry> truth = scene.truth;
    for (TruthEntry& t : truth) ++t.frame_id;
    write_text_file(out / "truth.csv", truth_to_csv(truth));

    std::cout << "synth: wrote " << patches << " patches, " << negatives << " negatives, "
              << scene.frames.size() << " frames to " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_train(const std::string& config_path, const std::string& pos_dir,
                     const std::string& neg_dir, const std::string& model_path,
                     const std::string& stats_path) {
    const PipelineConfig cfg = load_config_or_default(config_path);
    const BlockLayout layout;

    const std::vector<FrameFile> pos_files = list_frames(pos_dir);
    if (pos_files.empty()) throw InputError("no positive patches in " + pos_dir);
    std::vector<CentristFeature> pos;
    pos.reserve(pos_files.size());
    detail::CentristScratch scratch;
    for (const FrameFile& f : pos_files) {
        GrayFrame patch = read_frame_gray(f.path);
        if (patch.width != layout.window_w || patch.height != layout.window_h)
            patch = resample_patch(patch, {0, 0, patch.width, patch.height}, layout.window_w,
                                   layout.window_h);
        CentristFeature feature;
        extract_feature_into(patch, layout, feature, scratch);
        pos.push_back(std::move(feature));
    }

    const std::vector<FrameFile> neg_files = list_frames(neg_dir);
    if (neg_files.empty()) throw InputError("no negative images in " + neg_dir);
    std::vector<GrayFrame> neg_pool;
    neg_pool.reserve(neg_files.size());
    for (const FrameFile& f : neg_files) neg_pool.push_back(read_frame_gray(f.path));

    const ScanParams scan_params = cfg.scan;
    const WindowEnumerator scanner = [&](const GrayFrame& image) {
        std::vector<Box> boxes;
        for (const PlannedWindow& w : full_frame_plan(image.width, image.height, scan_params, layout).windows)
            boxes.push_back(w.box);
        return boxes;
    };

    std::vector<MiningRound> stats;
    CascadeModel model = bootstrap_train(pos, neg_pool, cfg.train, scanner, &stats, layout);
    if (cfg.theta1) model.linear.stage_threshold = *cfg.theta1;
    if (cfg.theta2) model.hik.stage_threshold = *cfg.theta2;
    save_model(model_path, model);

    std::string stats_csv = "round,negatives_total,hard_found,linear_kkt,hik_kkt\n";
    for (const MiningRound& r : stats) {
        stats_csv += format_number(r.round) + "," + format_number(static_cast<std::int64_t>(r.negatives_total)) +
                     "," + format_number(static_cast<std::int64_t>(r.hard_found)) + "," +
                     format_number(r.linear_kkt) + "," + format_number(r.hik_kkt) + "\n";
    }
    if (!stats_path.empty()) write_text_file(stats_path, stats_csv);

    std::cout << "train: " << pos.size() << " positives, " << neg_pool.size()
              << " negative images, " << stats.back().negatives_total
              << " negatives after mining; model written to " << model_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_bgseg(const std::string& config_path, const std::string& frames_dir,
                     const std::string& out_dir) {
    const PipelineConfig cfg = load_config_or_default(config_path);
    const std::vector<FrameFile> frames = list_frames(frames_dir);
    if (frames.empty()) throw InputError("no frames in " + frames_dir);

    fs::create_directories(out_dir);
    std::optional<BackgroundModel> bg;
    std::string regions_csv = std::string(kRegionsHeader) + "\n";
    for (const FrameFile& f : frames) {
        const GrayFrame gray = read_frame_gray(f.path);
        if (!bg) bg.emplace(gray, cfg.vibe);
        const MotionMask mask = bg->segment(gray);
        bg->update(gray, mask);

        GrayFrame mask_img(mask.width, mask.height);
        for (std::size_t i = 0; i < mask.fg.size(); ++i) mask_img.data[i] = mask.fg[i] ? 255 : 0;
        write_pgm(fs::path(out_dir) / frame_name("mask", f.id, "pgm"), mask_img);

        FrameResult r;
        r.frame_id = f.id;
        r.regions = extract_regions(mask, cfg.regions.min_area, cfg.regions.morph_radius);
        append_region_rows(regions_csv, r);
    }
    write_text_file(fs::path(out_dir) / "regions.csv", regions_csv);
    std::cout << "bgseg: processed " << frames.size() << " frames into " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_detect_or_run(const std::string& config_path, const std::string& frames_dir,
                             const std::string& model_path, const std::string& out_csv,
                             const std::string& annotate_dir, bool with_helmets) {
    const PipelineConfig cfg = load_config_or_default(config_path);
    const std::vector<FrameFile> frames = list_frames(frames_dir);
    if (frames.empty()) throw InputError("no frames in " + frames_dir);

    Pipeline pipeline(load_model(model_path), cfg);
    if (!annotate_dir.empty()) fs::create_directories(annotate_dir);

    std::string csv = std::string(with_helmets ? kRunHeader : kDetectionsHeader) + "\n";
    std::size_t total = 0;
    for (const FrameFile& f : frames) {
        const RgbFrame frame = read_frame_rgb(f.path);
        const FrameResult result = pipeline.process(frame, f.id, with_helmets);
        append_detection_rows(csv, result);
        total += result.detections.size();
        if (!annotate_dir.empty()) {
            const RgbFrame drawn = annotate(frame, result.detections, result.verdicts);
            write_png(fs::path(annotate_dir) / frame_name("frame", f.id, "png"), drawn);
        }
    }
    write_text_file(out_csv, csv);
    std::cout << (with_helmets ? "run" : "detect") << ": " << frames.size() << " frames, " << total
              << " detections -> " << out_csv << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_eval(const std::string& config_path, const std::string& detections_path,
                    const std::string& truth_path, const std::string& out_dir) {
    const PipelineConfig cfg = load_config_or_default(config_path);
    const std::vector<DetectionRecord> records = detections_from_csv(detections_path);
    const std::vector<TruthEntry> truth = truth_from_csv(truth_path);
    const EvalSummary summary = evaluate_detections(records, truth, cfg.eval.iou_min);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    std::string metrics;
    metrics += "matched " + format_number(summary.matched) + "\n";
    metrics += "false_detections " + format_number(summary.false_detections) + "\n";
    metrics += "missed " + format_number(summary.missed) + "\n";
    metrics += "acc_pd " + format_number(summary.acc_pd) + "\n";
    if (summary.pedestrian_roc)
        metrics += "pedestrian_auc " + format_number(summary.pedestrian_roc->auc) + "\n";
    if (summary.helmet_roc) metrics += "helmet_auc " + format_number(summary.helmet_roc->auc) + "\n";
    write_text_file(out / "metrics.txt", metrics);
    std::cout << metrics;

    if (summary.helmet_roc) {
        write_text_file(out / "helmet_roc.csv", roc_points_csv(*summary.helmet_roc));
        std::vector<std::pair<double, double>> pts;
        for (const RocPoint& p : summary.helmet_roc->points) pts.emplace_back(p.fpr, p.tpr);
        write_text_file(out / "helmet_roc.svg",
                        curve_svg(pts, "false positive rate", "true positive rate",
                                  "helmet verdicts: ROC (AUC " + format_number(summary.helmet_roc->auc) + ")"));
    }
    if (!summary.helmet_pr.empty()) {
        write_text_file(out / "helmet_pr.csv", pr_points_csv(summary.helmet_pr));
        std::vector<std::pair<double, double>> pts;
        for (const PrPoint& p : summary.helmet_pr) pts.emplace_back(p.recall, p.precision);
        write_text_file(out / "helmet_pr.svg",
                        curve_svg(pts, "recall", "precision", "helmet verdicts: PR"));
    }
    if (summary.pedestrian_roc) {
        write_text_file(out / "pedestrian_roc.csv", roc_points_csv(*summary.pedestrian_roc));
        std::vector<std::pair<double, double>> pts;
        for (const RocPoint& p : summary.pedestrian_roc->points) pts.emplace_back(p.fpr, p.tpr);
        write_text_file(out / "pedestrian_roc.svg",
                        curve_svg(pts, "false positive rate", "true positive rate",
                                  "pedestrian detections: ROC (AUC " +
                                      format_number(summary.pedestrian_roc->auc) + ")"));
    }
    return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
    CLI::App app{"Moving-pedestrian and safety-helmet detection for fixed-camera footage"};
    app.require_subcommand(1);

    std::string config, out_dir, frames_dir, model_path, out_csv, annotate_dir;
    std::string pos_dir, neg_dir, stats_path, detections_path, truth_path;
    int patches = 200, negatives = 50, neg_w = 320, neg_h = 240;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus: training patches, "
                                              "negative images, a test sequence and its ground truth");
    synth->add_option("--config", config, "configuration file");
    synth->add_option("--out", out_dir, "output directory (pos/, neg/, seq/, truth.csv)")->required();
    synth->add_option("--patches", patches, "number of positive patches");
    synth->add_option("--negatives", negatives, "number of negative images");
    synth->add_option("--neg-width", neg_w, "negative image width");
    synth->add_option("--neg-height", neg_h, "negative image height");

    auto* train = app.add_subcommand("train", "Bootstrap-train the pedestrian cascade");
    train->add_option("--config", config, "configuration file");
    train->add_option("--pos", pos_dir, "positive patch directory")->required();
    train->add_option("--neg", neg_dir, "negative image directory")->required();
    train->add_option("--out", model_path, "output model file")->required();
    train->add_option("--stats", stats_path, "per-round mining statistics CSV");

    auto* bgseg = app.add_subcommand("bgseg", "Background segmentation: per-frame masks and regions");
    bgseg->add_option("--config", config, "configuration file");
    bgseg->add_option("--frames", frames_dir, "input frame directory")->required();
    bgseg->add_option("--out", out_dir, "output directory (mask_*.pgm, regions.csv)")->required();

    auto* detect = app.add_subcommand("detect", "Pedestrian detection only");
    detect->add_option("--config", config, "configuration file");
    detect->add_option("--frames", frames_dir, "input frame directory")->required();
    detect->add_option("--model", model_path, "cascade model file")->required();
    detect->add_option("--out", out_csv, "detections CSV")->required();
    detect->add_option("--annotate", annotate_dir, "write annotated PNG frames here");

    auto* run_cmd = app.add_subcommand("run", "Full pipeline including helmet verdicts");
    run_cmd->add_option("--config", config, "configuration file");
    run_cmd->add_option("--frames", frames_dir, "input frame directory")->required();
    run_cmd->add_option("--model", model_path, "cascade model file")->required();
    run_cmd->add_option("--out", out_csv, "detections+verdicts CSV")->required();
    run_cmd->add_option("--annotate", annotate_dir, "write annotated PNG frames here");

    auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
    eval->add_option("--config", config, "configuration file");
    eval->add_option("--detections", detections_path, "detections CSV (from detect or run)")->required();
    eval->add_option("--truth", truth_path, "ground truth CSV")->required();
    eval->add_option("--out", out_dir, "output directory for metrics and curves")->required();

    try {
        app.parse(argc, argv);
        if (synth->parsed()) return cmd_synth(config, out_dir, patches, negatives, neg_w, neg_h);
        if (train->parsed()) return cmd_train(config, pos_dir, neg_dir, model_path, stats_path);
        if (bgseg->parsed()) return cmd_bgseg(config, frames_dir, out_dir);
        if (detect->parsed())
            return cmd_detect_or_run(config, frames_dir, model_path, out_csv, annotate_dir, false);
        if (run_cmd->parsed())
            return cmd_detect_or_run(config, frames_dir, model_path, out_csv, annotate_dir, true);
        if (eval->parsed()) return cmd_eval(config, detections_path, truth_path, out_dir);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hwd::cli
