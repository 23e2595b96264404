// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Synthetic sequence generator for oracle testing: constant-velocity
// targets in disjoint horizontal lanes, plus a degraded copy of the ground
// truth with controlled error injection (dropped boxes, spurious boxes,
// identity changes). Every injected error maps to exactly one FN / FP /
// IDSW when the degraded copy is evaluated against the pristine one.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "moteval/core.hpp"
#include "moteval/io.hpp"
#include "moteval/util.hpp"

namespace moteval {

struct SynthSpec {
    std::string name = "SYNTH-01";
    int frames = 100;
    int targets = 5;
    double fps = 30.0;
    double drop_rate = 0.0;      // probability of deleting a result box
    double spurious_rate = 0.0;  // expected spurious boxes per frame per target
    double id_swap_rate = 0.0;   // probability of an identity change per track per frame
    std::uint64_t seed = 1;

    void validate() const {
        if (frames < 1 || targets < 1)
            throw InputError("synthetic spec needs at least one frame and one target");
        for (double r : {drop_rate, spurious_rate, id_swap_rate})
            if (r < 0.0 || r > 1.0) throw InputError("error rates must lie in [0, 1]");
    }
};

struct SynthManifest {
    long long dropped = 0;
    long long spurious = 0;
    long long id_changes = 0;
    std::vector<std::pair<int, int>> dropped_boxes;   // (track, frame)
    std::vector<std::pair<int, int>> spurious_boxes;  // (frame, id)
    std::vector<std::tuple<int, int, int>> changes;   // (track, frame, new id)
};

struct SynthOutput {
    SequenceMeta meta;
    ParsedFile gt;
    ParsedFile result;
    SynthManifest manifest;
};

inline SynthOutput generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    // Lane geometry keeps every pair of targets (and the spurious lane)
    // strictly disjoint, so each surviving result box can only match its
    // own ground-truth box.
    constexpr double lane_pitch = 150.0;
    constexpr double jitter_cap = 2.0;

    SynthOutput out;
    out.meta.name = spec.name;
    out.meta.frame_count = spec.frames;
    out.meta.fps = spec.fps;
    out.meta.image_width = 1920.0;
    out.meta.image_height = std::max(1080.0, lane_pitch * (spec.targets + 2) + 100.0);
    out.gt.kind = FileKind::GroundTruth;
    out.gt.origin = spec.name + "/gt";
    out.result.kind = FileKind::Result;
    out.result.origin = spec.name + "/result";

    struct Track {
        double w, h, x0, vx, lane_y;
    };
    std::vector<Track> tracks;
    for (int k = 0; k < spec.targets; ++k) {
        Track t;
        t.w = uniform_double(rng, 30.0, 60.0);
        t.h = uniform_double(rng, 70.0, 110.0);
        t.x0 = uniform_double(rng, 50.0, out.meta.image_width - 200.0);
        t.vx = uniform_double(rng, -5.0, 5.0);
        t.lane_y = 30.0 + k * lane_pitch;
        tracks.push_back(t);
    }

    // Identity-change schedule first, so the frames that anchor each change
    // can be protected from box drops below.
    std::map<int, std::set<int>> change_frames;   // track -> frames
    std::map<int, std::set<int>> protected_frames;
    if (spec.id_swap_rate > 0.0) {
        for (int k = 0; k < spec.targets; ++k) {
            for (int t = 2; t <= spec.frames; ++t) {
                if (bernoulli(rng, spec.id_swap_rate)) {
                    change_frames[k + 1].insert(t);
                    protected_frames[k + 1].insert(t - 1);
                    protected_frames[k + 1].insert(t);
                }
            }
        }
    }

    int next_id = spec.targets + 1;
    std::vector<int> current_id(spec.targets + 1);
    for (int k = 1; k <= spec.targets; ++k) current_id[k] = k;

    for (int t = 1; t <= spec.frames; ++t) {
        for (int k = 0; k < spec.targets; ++k) {
            const int track_id = k + 1;
            const Track& tr = tracks[k];
            const double jx =
                std::clamp(uniform_double(rng, -1.0, 1.0) * 0.8, -jitter_cap, jitter_cap);
            const double jy =
                std::clamp(uniform_double(rng, -1.0, 1.0) * 0.8, -jitter_cap, jitter_cap);
            const BoundingBox box(tr.x0 + tr.vx * (t - 1) + jx, tr.lane_y + jy, tr.w, tr.h);
            out.gt.gt.push_back({t, track_id, box, 1, ObjectClass::Pedestrian, 1.0});

            const auto cf = change_frames.find(track_id);
            if (cf != change_frames.end() && cf->second.count(t)) {
                current_id[track_id] = next_id++;
                out.manifest.changes.emplace_back(track_id, t, current_id[track_id]);
                ++out.manifest.id_changes;
            }

            const bool guarded = protected_frames.count(track_id) &&
                                 protected_frames[track_id].count(t);
            if (!guarded && bernoulli(rng, spec.drop_rate)) {
                out.manifest.dropped_boxes.emplace_back(track_id, t);
                ++out.manifest.dropped;
                continue;
            }
            out.result.results.push_back({t, current_id[track_id], box, 1.0});
        }

        // Spurious boxes live in their own lane below all targets and can
        // never overlap ground truth.
        if (spec.spurious_rate > 0.0) {
            const double spur_y = 30.0 + spec.targets * lane_pitch + 20.0;
            for (int k = 0; k < spec.targets; ++k) {
                if (!bernoulli(rng, spec.spurious_rate)) continue;
                const int id = 100000 + static_cast<int>(out.manifest.spurious);
                const BoundingBox box(uniform_double(rng, 1.0, out.meta.image_width - 50.0),
                                      spur_y, 40.0, 80.0);
                out.result.results.push_back({t, id, box, 1.0});
                out.manifest.spurious_boxes.emplace_back(t, id);
                ++out.manifest.spurious;
            }
        }
    }

    auto by_frame_id = [](const auto& a, const auto& b) {
        return std::pair(a.frame, a.track_id) < std::pair(b.frame, b.track_id);
    };
    std::sort(out.gt.gt.begin(), out.gt.gt.end(), by_frame_id);
    std::sort(out.result.results.begin(), out.result.results.end(), by_frame_id);
    return out;
}

inline nlohmann::json manifest_to_json(const SynthManifest& m) {
    nlohmann::json j;
    j["dropped"] = m.dropped;
    j["spurious"] = m.spurious;
    j["id_changes"] = m.id_changes;
    j["dropped_boxes"] = m.dropped_boxes;
    j["spurious_boxes"] = m.spurious_boxes;
    auto& ch = j["changes"] = nlohmann::json::array();
    for (const auto& [track, frame, id] : m.changes) ch.push_back({track, frame, id});
    return j;
}

// Writes the generated sequence in the standard layout:
//   <root>/gt/<name>/gt/gt.txt     ground truth
//   <root>/gt/<name>/seqinfo.txt   metadata
//   <root>/res/<name>.txt          degraded result
//   <root>/manifest/<name>.json    injected-error manifest
//   <root>/seqmap.txt              single-sequence map
inline void write_synth(const SynthOutput& out, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "gt" / out.meta.name / "gt");
    fs::create_directories(root / "res");
    fs::create_directories(root / "manifest");
    write_csv_file(out.gt, root / "gt" / out.meta.name / "gt" / "gt.txt");
    save_seqinfo(out.meta, root / "gt" / out.meta.name / "seqinfo.txt");
    write_csv_file(out.result, root / "res" / (out.meta.name + ".txt"));
    {
        std::ofstream mf(root / "manifest" / (out.meta.name + ".json"));
        if (!mf) throw InputError("cannot write manifest under " + root.string());
        mf << manifest_to_json(out.manifest).dump(2) << "\n";
    }
    {
        std::ofstream sm(root / "seqmap.txt");
        if (!sm) throw InputError("cannot write seqmap under " + root.string());
        sm << out.meta.name << "\n";
    }
}

}  // namespace moteval
