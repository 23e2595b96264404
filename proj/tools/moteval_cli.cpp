// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Command-line front end: evaluation, format validation, detection PR
// curves, sequence statistics, tracker ranking, synthetic data generation
// and random parameter search for external trackers.
//
// Exit codes: 0 success, 1 internal error, 2 input validation failure,
// 3 incomplete submission.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moteval/moteval.hpp"

namespace fs = std::filesystem;
using namespace moteval;

namespace {

struct SequenceData {
    std::string name;
    ParsedFile gt;
    ParsedFile res;
    int frame_count = 0;
    std::optional<SequenceMeta> meta;
};

// Loads ground truth, metadata (inferring the frame count when the seqinfo
// file is absent) and results, either from a result directory or from a ZIP
// submission.
std::vector<SequenceData> load_benchmark(const fs::path& gt_root, const fs::path& res_path,
                                         const fs::path& seqmap_path,
                                         std::vector<std::string>& warnings) {
    const std::vector<std::string> seqmap = load_seqmap(seqmap_path);

    std::map<std::string, ParsedFile> zipped;
    const bool is_zip = fs::is_regular_file(res_path);
    if (is_zip) {
        Submission sub = ingest_submission(res_path, seqmap);
        warnings.insert(warnings.end(), sub.warnings.begin(), sub.warnings.end());
        zipped = std::move(sub.results);
    }

    std::vector<SequenceData> out;
    for (const auto& name : seqmap) {
        SequenceData seq;
        seq.name = name;
        seq.gt = parse_csv(gt_file_path(gt_root, name), FileKind::GroundTruth);
        try {
            seq.meta = load_seqinfo(seqinfo_path(gt_root, name));
            seq.frame_count = seq.meta->frame_count;
        } catch (const InputError&) {
            warnings.push_back("no seqinfo for " + name +
                               "; inferring frame count from the data");
        }
        if (is_zip)
            seq.res = std::move(zipped.at(name));
        else
            seq.res = parse_csv(result_file_path(res_path, name), FileKind::Result);
        out.push_back(std::move(seq));
    }
    return out;
}

std::vector<EventLog> match_all(std::vector<SequenceData>& seqs, const EvalConfig& cfg,
                                int workers) {
    std::vector<EventLog> logs(seqs.size());
    std::vector<std::exception_ptr> errors(seqs.size());
    parallel_for(seqs.size(), workers, [&](std::size_t i) {
        try {
            logs[i] = match_sequence(seqs[i].gt, seqs[i].res, cfg, seqs[i].frame_count,
                                     seqs[i].name);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return logs;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write output file: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

int cmd_evaluate(const fs::path& gt_root, const fs::path& res_path, const fs::path& seqmap,
                 const EvalConfig& cfg, const std::string& format, const fs::path& out_path,
                 int workers) {
    std::vector<std::string> warnings;
    std::vector<SequenceData> seqs = load_benchmark(gt_root, res_path, seqmap, warnings);
    print_warnings(warnings);
    const std::vector<EventLog> logs = match_all(seqs, cfg, workers);
    const BenchmarkReport report = accumulate(logs);
    std::cout << (format == "csv" ? format_benchmark_csv(report)
                                  : format_benchmark_text(report));
    if (!out_path.empty()) write_text_file(out_path, format_benchmark_csv(report));
    return 0;
}

int cmd_validate(const fs::path& gt_root, const fs::path& res_path, const fs::path& seqmap_path) {
    const std::vector<std::string> seqmap = load_seqmap(seqmap_path);
    const bool is_zip = fs::is_regular_file(res_path);

    std::map<std::string, ParsedFile> zipped;
    if (is_zip) {
        Submission sub = ingest_submission(res_path, seqmap);  // throws SubmissionError
        print_warnings(sub.warnings);
        zipped = std::move(sub.results);
    }

    int bad = 0;
    for (const auto& name : seqmap) {
        try {
            ParsedFile res = is_zip
                                 ? std::move(zipped.at(name))
                                 : parse_csv(result_file_path(res_path, name), FileKind::Result);
            int frame_count = 0;
            if (!gt_root.empty()) {
                try {
                    frame_count = load_seqinfo(seqinfo_path(gt_root, name)).frame_count;
                } catch (const InputError&) {
                }
            }
            if (frame_count > 0) {
                for (const auto& e : res.results)
                    if (e.frame > frame_count)
                        throw InputError(res.origin + ": validation error: result frame index " +
                                         std::to_string(e.frame) + " outside [1, " +
                                         std::to_string(frame_count) + "]");
            }
            std::cout << "OK   " << name << "  (" << res.results.size() << " entries)\n";
        } catch (const InputError& e) {
            std::cout << "FAIL " << name << "  " << e.what() << "\n";
            ++bad;
        }
    }
    if (bad > 0) {
        std::cerr << bad << " sequence(s) failed validation\n";
        return 2;
    }
    std::cout << "submission is valid\n";
    return 0;
}

int cmd_det_pr(const fs::path& gt_root, const fs::path& seqmap_path, const EvalConfig& cfg,
               double op_threshold, const std::string& mode_name, const fs::path& out_path) {
    const std::vector<std::string> seqmap = load_seqmap(seqmap_path);
    const DetMatchMode mode =
        mode_name == "hungarian" ? DetMatchMode::Hungarian : DetMatchMode::Greedy;

    // Concatenate all sequences with per-sequence frame offsets so one
    // confidence sweep covers the whole set.
    ParsedFile all_gt;
    all_gt.kind = FileKind::GroundTruth;
    all_gt.origin = "<concatenated>";
    ParsedFile all_det;
    all_det.kind = FileKind::Detection;
    all_det.origin = "<concatenated>";
    int offset = 0;
    for (const auto& name : seqmap) {
        const ParsedFile gt = parse_csv(gt_file_path(gt_root, name), FileKind::GroundTruth);
        const ParsedFile det = parse_csv(det_file_path(gt_root, name), FileKind::Detection);
        int frame_count = 0;
        try {
            frame_count = load_seqinfo(seqinfo_path(gt_root, name)).frame_count;
        } catch (const InputError&) {
        }
        for (const auto& e : gt.gt) frame_count = std::max(frame_count, e.frame);
        for (const auto& e : det.dets) frame_count = std::max(frame_count, e.frame);

        PrCurve seq_curve = evaluate_detections(det, gt, cfg, op_threshold, mode);
        std::cout << name << ": operating point at threshold " << format_number(op_threshold)
                  << " -> precision " << detail::fmt_fixed(seq_curve.operating_point.precision, 4)
                  << ", recall " << detail::fmt_fixed(seq_curve.operating_point.recall, 4)
                  << "\n";

        for (auto e : gt.gt) {
            e.frame += offset;
            all_gt.gt.push_back(e);
        }
        for (auto e : det.dets) {
            e.frame += offset;
            all_det.dets.push_back(e);
        }
        offset += frame_count;
    }

    const PrCurve curve = evaluate_detections(all_det, all_gt, cfg, op_threshold, mode);
    std::cout << "combined: operating point at threshold " << format_number(op_threshold)
              << " -> precision " << detail::fmt_fixed(curve.operating_point.precision, 4)
              << ", recall " << detail::fmt_fixed(curve.operating_point.recall, 4) << "\n";
    const std::string csv = format_pr_curve_csv(curve);
    if (!out_path.empty())
        write_text_file(out_path, csv);
    else
        std::cout << csv;
    return 0;
}

int cmd_stats(const fs::path& gt_root, const fs::path& seqmap_path, const std::string& format) {
    const std::vector<std::string> seqmap = load_seqmap(seqmap_path);
    struct Row {
        std::string name;
        SeqStats gt;
        long long frames = 0;
        std::optional<DetStats> det;
    };
    std::vector<Row> rows;
    long long total_boxes = 0, total_frames = 0, total_tracks = 0;
    long long total_dets = 0;
    bool any_det = false;
    for (const auto& name : seqmap) {
        Row row;
        row.name = name;
        const ParsedFile gt = parse_csv(gt_file_path(gt_root, name), FileKind::GroundTruth);
        SequenceMeta meta;
        try {
            meta = load_seqinfo(seqinfo_path(gt_root, name));
        } catch (const InputError&) {
            meta.name = name;
            for (const auto& e : gt.gt) meta.frame_count = std::max(meta.frame_count, e.frame);
            meta.fps = 0;
            meta.image_width = meta.image_height = 0;
        }
        row.gt = sequence_stats(gt, meta);
        row.frames = meta.frame_count;
        fs::path det_path;
        bool has_det = true;
        try {
            det_path = det_file_path(gt_root, name);
        } catch (const InputError&) {
            has_det = false;  // detections are optional; parse errors are not
        }
        if (has_det) {
            row.det = detection_stats(parse_csv(det_path, FileKind::Detection), meta);
            any_det = true;
            total_dets += row.det->count;
        }
        total_boxes += row.gt.boxes;
        total_tracks += row.gt.tracks;
        total_frames += row.frames;
        rows.push_back(std::move(row));
    }

    if (format == "csv") {
        std::cout << "sequence,frames,tracks,boxes,density";
        if (any_det) std::cout << ",nDet,nDetPerFrame,minHeight,maxHeight";
        std::cout << "\n";
        for (const auto& r : rows) {
            std::cout << r.name << "," << r.frames << "," << r.gt.tracks << "," << r.gt.boxes
                      << "," << detail::fmt_fixed(r.gt.density, 2);
            if (any_det) {
                if (r.det)
                    std::cout << "," << r.det->count << ","
                              << detail::fmt_fixed(r.det->per_frame, 2) << ","
                              << detail::fmt_fixed(r.det->min_height, 2) << ","
                              << detail::fmt_fixed(r.det->max_height, 2);
                else
                    std::cout << ",,,,";
            }
            std::cout << "\n";
        }
        std::cout << "TOTAL," << total_frames << "," << total_tracks << "," << total_boxes << ","
                  << detail::fmt_fixed(
                         total_frames > 0 ? double(total_boxes) / double(total_frames) : 0.0, 2);
        if (any_det)
            std::cout << "," << total_dets << ","
                      << detail::fmt_fixed
                         (total_frames > 0 ? double(total_dets) / double(total_frames) : 0.0, 2)
                      << ",,";
        std::cout << "\n";
    } else {
        std::printf("%-12s %8s %8s %10s %9s", "Sequence", "Frames", "Tracks", "Boxes",
                    "Density");
        if (any_det) std::printf(" %10s %10s", "nDet", "nDet/fr");
        std::printf("\n");
        for (const auto& r : rows) {
            std::printf("%-12s %8lld %8lld %10lld %9.1f", r.name.c_str(), r.frames, r.gt.tracks,
                        r.gt.boxes, r.gt.density);
            if (r.det)
                std::printf(" %10lld %10.2f", r.det->count, r.det->per_frame);
            std::printf("\n");
        }
        std::printf("%-12s %8lld %8lld %10lld %9.1f", "TOTAL", total_frames, total_tracks,
                    total_boxes,
                    total_frames > 0 ? double(total_boxes) / double(total_frames) : 0.0);
        if (any_det)
            std::printf(" %10lld %10.2f", total_dets,
                        total_frames > 0 ? double(total_dets) / double(total_frames) : 0.0);
        std::printf("\n");
    }
    return 0;
}

int cmd_rank(const std::vector<std::string>& report_paths, const std::string& format) {
    std::vector<std::pair<std::string, MetricsReport>> table;
    for (const auto& p : report_paths) {
        const fs::path path(p);
        const auto rows = parse_benchmark_csv(path);
        const auto overall =
            std::find_if(rows.begin(), rows.end(),
                         [](const auto& row) { return row.first == "OVERALL"; });
        if (overall == rows.end())
            throw InputError(path.string() + ": report has no OVERALL row");
        table.emplace_back(path.stem().string(), overall->second);
    }
    const std::vector<RankedTracker> ranked = rank_trackers(table);
    if (format == "csv") {
        std::cout << "tracker,avg_rank\n";
        for (const auto& r : ranked)
            std::cout << r.name << "," << detail::fmt_fixed(r.avg_rank, 4) << "\n";
    } else {
        std::size_t width = 7;
        for (const auto& r : ranked) width = std::max(width, r.name.size());
        std::printf("%-*s  %8s\n", static_cast<int>(width), "Tracker", "AvgRank");
        for (const auto& r : ranked)
            std::printf("%-*s  %8.2f\n", static_cast<int>(width), r.name.c_str(), r.avg_rank);
    }
    return 0;
}

int cmd_synth(const SynthSpec& spec, const fs::path& out_root) {
    const SynthOutput out = generate_synthetic(spec);
    write_synth(out, out_root);
    std::cout << "generated " << spec.name << ": " << out.gt.gt.size() << " gt boxes, "
              << out.result.results.size() << " result boxes\n"
              << "injected: " << out.manifest.dropped << " dropped, " << out.manifest.spurious
              << " spurious, " << out.manifest.id_changes << " identity changes\n"
              << "evaluate with:\n  moteval evaluate --gt " << (out_root / "gt").string()
              << " --res " << (out_root / "res").string() << " --seqmap "
              << (out_root / "seqmap.txt").string() << "\n";
    return 0;
}

int cmd_param_search(const fs::path& config_path, ParamSearchConfig cfg,
                     const fs::path& out_path) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config: " + config_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(config_path.string() + ": " + e.what());
    }
    if (!j.contains("command") || !j.contains("params"))
        throw InputError(config_path.string() + ": config needs 'command' and 'params'");
    cfg.command_template = j["command"].get<std::string>();
    for (const auto& [name, value] : j["params"].items())
        cfg.defaults.emplace_back(name, value.get<double>());

    const ParamSearchResult result = run_param_search(cfg);
    print_warnings(result.warnings);

    std::printf("%-5s %-8s", "run", "MOTA");
    for (const auto& [name, v] : cfg.defaults) std::printf(" %12s", name.c_str());
    std::printf("\n");
    for (const auto& run : result.runs) {
        if (run.failed) {
            std::printf("%-5d %-8s", run.index, "failed");
        } else {
            std::printf("%-5d %-8.2f", run.index, run.mota);
        }
        for (const auto& [name, v] : run.params) std::printf(" %12.5f", v);
        std::printf("\n");
    }
    std::printf("best: run %d (MOTA %.2f)\n", result.best_index, result.best_mota);
    for (const auto& [name, v] : result.best_params) std::printf("  %s = %.6g\n", name.c_str(), v);

    if (!out_path.empty()) {
        nlohmann::json rep;
        rep["best_index"] = result.best_index;
        rep["best_mota"] = result.best_mota;
        auto& best = rep["best_params"] = nlohmann::json::object();
        for (const auto& [name, v] : result.best_params) best[name] = v;
        auto& runs = rep["runs"] = nlohmann::json::array();
        for (const auto& run : result.runs) {
            nlohmann::json r;
            r["index"] = run.index;
            r["failed"] = run.failed;
            if (run.failed)
                r["reason"] = run.failure_reason;
            else
                r["mota"] = run.mota;
            auto& params = r["params"] = nlohmann::json::object();
            for (const auto& [name, v] : run.params) params[name] = v;
            runs.push_back(std::move(r));
        }
        write_text_file(out_path, rep.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moteval - multi-object tracking evaluation toolkit"};
    app.require_subcommand(1);

    std::string gt_root, res_path, seqmap, out_path, format = "text";
    double iou_threshold = 0.5, min_height = 0.0;
    int workers = 1;
    std::uint64_t seed = 1;

    auto add_eval_flags = [&](CLI::App* cmd) {
        cmd->add_option("--iou", iou_threshold, "IoU match threshold")->capture_default_str();
        cmd->add_option("--min-height", min_height, "minimum evaluated pedestrian height")
            ->capture_default_str();
    };

    auto* evaluate = app.add_subcommand("evaluate", "evaluate tracker results against ground truth");
    evaluate->add_option("--gt", gt_root, "ground-truth root directory")->required();
    evaluate->add_option("--res", res_path, "result directory or ZIP submission")->required();
    evaluate->add_option("--seqmap", seqmap, "sequence map file")->required();
    add_eval_flags(evaluate);
    evaluate->add_option("--out", out_path, "write machine-readable report CSV here");
    evaluate->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    evaluate->add_option("--workers", workers, "parallel sequence workers");

    auto* validate = app.add_subcommand("validate", "check result files or a ZIP submission");
    validate->add_option("--res", res_path, "result directory or ZIP submission")->required();
    validate->add_option("--seqmap", seqmap, "sequence map file")->required();
    validate->add_option("--gt", gt_root, "optional ground-truth root for frame-range checks");

    std::string det_mode = "greedy";
    double op_threshold = 0.0;
    auto* det_pr = app.add_subcommand("det-pr", "detection precision-recall curve");
    det_pr->add_option("--gt", gt_root, "ground-truth root (detections live beside gt)")
        ->required();
    det_pr->add_option("--seqmap", seqmap, "sequence map file")->required();
    add_eval_flags(det_pr);
    det_pr->add_option("--op-threshold", op_threshold, "operating-point confidence threshold")
        ->capture_default_str();
    det_pr->add_option("--mode", det_mode, "greedy or hungarian")
        ->check(CLI::IsMember({"greedy", "hungarian"}));
    det_pr->add_option("--out", out_path, "write curve CSV here (default: stdout)");

    auto* stats = app.add_subcommand("stats", "sequence and detection statistics");
    stats->add_option("--gt", gt_root, "ground-truth root directory")->required();
    stats->add_option("--seqmap", seqmap, "sequence map file")->required();
    stats->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    std::vector<std::string> report_paths;
    auto* rank = app.add_subcommand("rank", "average-rank comparison of tracker reports");
    rank->add_option("reports", report_paths, "report CSV files from `evaluate --out`")
        ->required()
        ->expected(-1);
    rank->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    SynthSpec synth_spec;
    auto* synth = app.add_subcommand("synth", "generate a synthetic sequence with known errors");
    synth->add_option("--out", out_path, "output root directory")->required();
    synth->add_option("--name", synth_spec.name, "sequence name")->capture_default_str();
    synth->add_option("--frames", synth_spec.frames, "frame count")->capture_default_str();
    synth->add_option("--targets", synth_spec.targets, "number of targets")->capture_default_str();
    synth->add_option("--fps", synth_spec.fps, "frames per second")->capture_default_str();
    synth->add_option("--drop", synth_spec.drop_rate, "box drop rate")->capture_default_str();
    synth->add_option("--spurious", synth_spec.spurious_rate, "spurious box rate")
        ->capture_default_str();
    synth->add_option("--swap", synth_spec.id_swap_rate, "identity change rate")
        ->capture_default_str();
    synth->add_option("--seed", seed, "random seed")->capture_default_str();

    std::string config_path, work_dir;
    int runs = 20;
    auto* search = app.add_subcommand("param-search", "random parameter search for a tracker");
    search->add_option("--config", config_path, "JSON config with command template and params")
        ->required();
    search->add_option("--gt", gt_root, "ground-truth root directory")->required();
    search->add_option("--seqmap", seqmap, "training sequence map")->required();
    add_eval_flags(search);
    search->add_option("--runs", runs, "independent runs")->capture_default_str();
    search->add_option("--seed", seed, "random seed")->capture_default_str();
    search->add_option("--workers", workers, "parallel runs");
    search->add_option("--work-dir", work_dir, "directory for per-run tracker output");
    search->add_option("--out", out_path, "write JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        EvalConfig cfg;
        cfg.iou_threshold = iou_threshold;
        cfg.min_height = min_height;

        if (evaluate->parsed())
            return cmd_evaluate(gt_root, res_path, seqmap, cfg, format, out_path, workers);
        if (validate->parsed()) return cmd_validate(gt_root, res_path, seqmap);
        if (det_pr->parsed())
            return cmd_det_pr(gt_root, seqmap, cfg, op_threshold, det_mode, out_path);
        if (stats->parsed()) return cmd_stats(gt_root, seqmap, format);
        if (rank->parsed()) return cmd_rank(report_paths, format);
        if (synth->parsed()) {
            synth_spec.seed = seed;
            return cmd_synth(synth_spec, out_path);
        }
        if (search->parsed()) {
            ParamSearchConfig pcfg;
            pcfg.runs = runs;
            pcfg.seed = seed;
            pcfg.workers = workers;
            pcfg.gt_root = gt_root;
            pcfg.seqmap_path = seqmap;
            pcfg.work_dir = work_dir;
            pcfg.eval = cfg;
            return cmd_param_search(config_path, std::move(pcfg), out_path);
        }
    } catch (const SubmissionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
