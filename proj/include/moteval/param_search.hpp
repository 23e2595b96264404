// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Random parameter search for external trackers: a fixed budget of
// independent runs, each sampling every parameter uniformly in
// [default/2, 2*default], scored by overall MOTA on the training
// sequences. The best run's parameter set wins; ties go to the earliest
// run. Failed runs are excluded rather than retried.
#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "moteval/core.hpp"
#include "moteval/io.hpp"
#include "moteval/matching.hpp"
#include "moteval/metrics.hpp"
#include "moteval/util.hpp"

namespace moteval {

struct ParamSearchConfig {
    // Parameter names with their positive default values, in sampling order.
    std::vector<std::pair<std::string, double>> defaults;
    int runs = 20;
    std::uint64_t seed = 0;
    int workers = 1;
    // Shell command template; {param} placeholders are substituted per run,
    // plus {out_dir}, {gt_root}, {seqmap} and {run_index}.
    std::string command_template;
    std::filesystem::path gt_root;
    std::filesystem::path seqmap_path;
    std::filesystem::path work_dir;  // per-run output directories live here
    EvalConfig eval;

    void validate() const {
        if (defaults.empty()) throw InputError("parameter search needs at least one parameter");
        for (const auto& [name, value] : defaults)
            if (!(value > 0.0))
                throw InputError("parameter '" + name +
                                 "' must have a positive default (the sampling range is "
                                 "multiplicative)");
        if (runs < 1) throw InputError("parameter search needs at least one run");
        if (command_template.empty()) throw InputError("tracker command template is empty");
        eval.validate();
    }
};

struct ParamRun {
    int index = 0;
    std::vector<std::pair<std::string, double>> params;
    bool failed = false;
    std::string failure_reason;
    double mota = 0.0;
};

struct ParamSearchResult {
    std::vector<ParamRun> runs;
    int best_index = -1;
    std::vector<std::pair<std::string, double>> best_params;
    double best_mota = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string substitute_placeholders(std::string tmpl,
                                           const std::map<std::string, std::string>& subs) {
    for (const auto& [key, value] : subs) {
        const std::string token = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = tmpl.find(token, pos)) != std::string::npos) {
            tmpl.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return tmpl;
}

inline std::string format_param_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Draws every parameter for every run up front, so results are reproducible
// for a given seed regardless of execution order or worker count.
inline std::vector<std::vector<std::pair<std::string, double>>> sample_parameter_sets(
    const ParamSearchConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<std::pair<std::string, double>>> sets;
    sets.reserve(cfg.runs);
    for (int r = 0; r < cfg.runs; ++r) {
        std::vector<std::pair<std::string, double>> params;
        params.reserve(cfg.defaults.size());
        for (const auto& [name, def] : cfg.defaults)
            params.emplace_back(name, uniform_double(rng, def / 2.0, 2.0 * def));
        sets.push_back(std::move(params));
    }
    return sets;
}

inline ParamSearchResult run_param_search(const ParamSearchConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    const std::vector<std::string> seqmap = load_seqmap(cfg.seqmap_path);
    const fs::path work = cfg.work_dir.empty() ? fs::path("param_search_runs") : cfg.work_dir;
    fs::create_directories(work);

    const auto sets = sample_parameter_sets(cfg);
    ParamSearchResult result;
    result.runs.resize(cfg.runs);

    parallel_for(static_cast<std::size_t>(cfg.runs), cfg.workers, [&](std::size_t r) {
        ParamRun& run = result.runs[r];
        run.index = static_cast<int>(r);
        run.params = sets[r];

        char dir_name[32];
        std::snprintf(dir_name, sizeof(dir_name), "run_%03d", run.index);
        const fs::path out_dir = work / dir_name;
        std::error_code ec;
        fs::create_directories(out_dir, ec);

        std::map<std::string, std::string> subs = {
            {"out_dir", out_dir.string()},
            {"gt_root", cfg.gt_root.string()},
            {"seqmap", cfg.seqmap_path.string()},
            {"run_index", std::to_string(run.index)},
        };
        for (const auto& [name, value] : run.params)
            subs[name] = detail::format_param_value(value);

        const CommandResult cmd = run_command(detail::substitute_placeholders(
            cfg.command_template, subs));
        if (cmd.exit_code != 0) {
            run.failed = true;
            run.failure_reason = "tracker exited with code " + std::to_string(cmd.exit_code);
            return;
        }

        try {
            std::vector<EventLog> logs;
            for (const auto& seq : seqmap) {
                const ParsedFile gt = parse_csv(gt_file_path(cfg.gt_root, seq),
                                                FileKind::GroundTruth);
                int frame_count = 0;
                try {
                    frame_count = load_seqinfo(seqinfo_path(cfg.gt_root, seq)).frame_count;
                } catch (const InputError&) {
                    // fall back to inferring the frame count from the data
                }
                const ParsedFile res =
                    parse_csv(result_file_path(out_dir, seq), FileKind::Result);
                logs.push_back(match_sequence(gt, res, cfg.eval, frame_count, seq));
            }
            run.mota = accumulate(logs).overall.mota;
        } catch (const InputError& e) {
            run.failed = true;
            run.failure_reason = e.what();
        }
    });

    for (const auto& run : result.runs) {
        if (run.failed) {
            result.warnings.push_back("run " + std::to_string(run.index) +
                                      " excluded: " + run.failure_reason);
            continue;
        }
        if (result.best_index < 0 || run.mota > result.best_mota) {
            result.best_index = run.index;
            result.best_mota = run.mota;
            result.best_params = run.params;
        }
    }
    if (result.best_index < 0)
        throw InputError("all parameter-search runs failed");
    return result;
}

}  // namespace moteval
