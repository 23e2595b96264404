// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Shared fixtures and generators for the unit and acceptance suites.
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "moteval/core.hpp"
#include "moteval/io.hpp"
#include "moteval/matching.hpp"
#include "moteval/util.hpp"

namespace support {

using moteval::BoundingBox;
using moteval::FileKind;
using moteval::GtEntry;
using moteval::ObjectClass;
using moteval::ParsedFile;
using moteval::ResultEntry;

inline GtEntry ped(int frame, int id, double x, double y, double w, double h, int flag = 1) {
    return {frame, id, BoundingBox(x, y, w, h), flag, ObjectClass::Pedestrian, 1.0};
}

inline GtEntry ann(int frame, int id, ObjectClass cls, double x, double y, double w, double h) {
    return {frame, id, BoundingBox(x, y, w, h), 1, cls, 1.0};
}

inline ResultEntry hyp(int frame, int id, double x, double y, double w, double h) {
    return {frame, id, BoundingBox(x, y, w, h), 1.0};
}

inline void finalize(ParsedFile& f) {
    auto by_frame_id = [](const auto& a, const auto& b) {
        return std::pair(a.frame, a.track_id) < std::pair(b.frame, b.track_id);
    };
    std::sort(f.gt.begin(), f.gt.end(), by_frame_id);
    std::sort(f.results.begin(), f.results.end(), by_frame_id);
}

inline ParsedFile make_gt(std::vector<GtEntry> entries) {
    ParsedFile f;
    f.kind = FileKind::GroundTruth;
    f.origin = "<fixture gt>";
    f.gt = std::move(entries);
    finalize(f);
    return f;
}

inline ParsedFile make_res(std::vector<ResultEntry> entries) {
    ParsedFile f;
    f.kind = FileKind::Result;
    f.origin = "<fixture res>";
    f.results = std::move(entries);
    finalize(f);
    return f;
}

// ---------------------------------------------------------------------------
// The four canonical tracker-to-target assignment scenarios. All boxes are
// 10x10 on a line; IoU >= 0.5 needs |dx| <= 10/3.

// (a) One target, fully covered, but the covering hypothesis id changes
// mid-sequence: 1 identity switch, no misses, no false positives.
inline std::pair<ParsedFile, ParsedFile> scenario_id_switch() {
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> res;
    for (int t = 1; t <= 6; ++t) {
        gt.push_back(ped(t, 1, 10.0 * t, 50, 10, 10));
        res.push_back(hyp(t, t <= 3 ? 101 : 102, 10.0 * t, 50, 10, 10));
    }
    return {make_gt(std::move(gt)), make_res(std::move(res))};
}

// (b) Tracked frames 1-2, a gap at frame 3, re-acquired by a new id from
// frame 4: one fragmentation (counted at frame 3) and one identity switch.
inline std::pair<ParsedFile, ParsedFile> scenario_fragmentation() {
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> res;
    for (int t = 1; t <= 6; ++t) gt.push_back(ped(t, 1, 10.0 * t, 50, 10, 10));
    for (int t = 1; t <= 2; ++t) res.push_back(hyp(t, 201, 10.0 * t, 50, 10, 10));
    for (int t = 4; t <= 6; ++t) res.push_back(hyp(t, 202, 10.0 * t, 50, 10, 10));
    return {make_gt(std::move(gt)), make_res(std::move(res))};
}

// (c) Two crossing targets; the frame-1 assignment is propagated, one
// hypothesis drifts between both targets and the other ends early:
// 5 misses, 4 false positives, no fragmentations, no switches.
inline std::pair<ParsedFile, ParsedFile> scenario_crossing() {
    const double ax[] = {0, 8, 16, 24, 32, 40};
    const double bx[] = {40, 32, 24, 16, 8, 0};
    const double rx[] = {0, 8, 20, 20, 20, 20};
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> res;
    for (int t = 1; t <= 6; ++t) {
        gt.push_back(ped(t, 1, ax[t - 1], 0, 10, 10));
        gt.push_back(ped(t, 2, bx[t - 1], 0, 10, 10));
        res.push_back(hyp(t, 11, rx[t - 1], 0, 10, 10));
        if (t <= 5) res.push_back(hyp(t, 12, bx[t - 1], 0, 10, 10));
    }
    return {make_gt(std::move(gt)), make_res(std::move(res))};
}

// (d) An interrupted target re-acquired by the closest hypothesis that is
// not already claimed by a carried-over pairing: one fragmentation and one
// identity switch. At frame 5 hypothesis 12 overlaps target 1 best (IoU
// 2/3) but stays carried to target 2, so target 1 takes hypothesis 13
// (IoU 7/13).
inline std::pair<ParsedFile, ParsedFile> scenario_reacquire_non_conflicting() {
    const double yx[] = {30, 24, 18, 12, 4, 4};   // target 2 path
    const double cx[] = {30, 24, 18, 12, 2, 4};   // hypothesis 12 path
    const double rx[] = {0, 0, 8, 8};             // hypothesis 11, frames 1-4
    const double bx[] = {3, 0};                   // hypothesis 13, frames 5-6
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> res;
    for (int t = 1; t <= 6; ++t) {
        gt.push_back(ped(t, 1, 0, 0, 10, 10));
        gt.push_back(ped(t, 2, yx[t - 1], 40, 10, 10));
        res.push_back(hyp(t, 12, cx[t - 1], 40, 10, 10));
        if (t <= 4) res.push_back(hyp(t, 11, rx[t - 1], 0, 10, 10));
        if (t >= 5) res.push_back(hyp(t, 13, bx[t - 5], 0, 10, 10));
    }
    return {make_gt(std::move(gt)), make_res(std::move(res))};
}

// ---------------------------------------------------------------------------
// Random small sequences on an integer grid, with drops, identity changes,
// spurious boxes, inactive pedestrians and distractor annotations. Integer
// coordinates keep equal overlaps exactly equal and distinct overlaps well
// separated for the solver-vs-oracle comparison.
inline std::pair<ParsedFile, ParsedFile> random_sequence(std::mt19937_64& rng) {
    using moteval::bernoulli;
    using moteval::uniform_int;

    const int frames = static_cast<int>(uniform_int(rng, 2, 10));
    const int targets = static_cast<int>(uniform_int(rng, 1, 5));
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> res;
    int next_hyp_id = 100;

    for (int k = 1; k <= targets; ++k) {
        const int start = static_cast<int>(uniform_int(rng, 1, std::max(1, frames / 2)));
        const int end = static_cast<int>(uniform_int(rng, start, frames));
        double w = static_cast<double>(uniform_int(rng, 8, 30));
        double h = static_cast<double>(uniform_int(rng, 8, 30));
        double x = static_cast<double>(uniform_int(rng, 0, 60));
        double y = static_cast<double>(uniform_int(rng, 0, 60));
        int hyp_id = next_hyp_id++;
        bool ever_flagged_off = bernoulli(rng, 0.2);
        for (int t = start; t <= end; ++t) {
            const int flag = ever_flagged_off && bernoulli(rng, 0.3) ? 0 : 1;
            gt.push_back(ped(t, k, x, y, w, h, flag));
            if (!bernoulli(rng, 0.15)) {  // dropped otherwise
                if (bernoulli(rng, 0.05)) hyp_id = next_hyp_id++;
                const double dx = static_cast<double>(uniform_int(rng, -3, 3));
                const double dy = static_cast<double>(uniform_int(rng, -3, 3));
                res.push_back(hyp(t, hyp_id, x + dx, y + dy, w, h));
            }
            x += static_cast<double>(uniform_int(rng, -4, 4));
            y += static_cast<double>(uniform_int(rng, -4, 4));
        }
    }

    // The occasional distractor-class annotation, with hypotheses that
    // sometimes sit right on it (suppression path).
    if (bernoulli(rng, 0.5)) {
        static const ObjectClass kinds[] = {ObjectClass::PersonOnVehicle,
                                            ObjectClass::StaticPerson, ObjectClass::Distractor,
                                            ObjectClass::Reflection};
        const ObjectClass cls = kinds[uniform_int(rng, 0, 3)];
        const double x = static_cast<double>(uniform_int(rng, 0, 60));
        const double y = static_cast<double>(uniform_int(rng, 0, 60));
        const double w = static_cast<double>(uniform_int(rng, 8, 25));
        const double h = static_cast<double>(uniform_int(rng, 8, 25));
        const int ghost_id = next_hyp_id++;
        for (int t = 1; t <= frames; ++t) {
            gt.push_back(ann(t, targets + 1, cls, x, y, w, h));
            if (bernoulli(rng, 0.4)) res.push_back(hyp(t, ghost_id, x, y, w, h));
        }
    }

    // Spurious boxes.
    for (int t = 1; t <= frames; ++t) {
        if (bernoulli(rng, 0.2)) {
            res.push_back(hyp(t, next_hyp_id++, static_cast<double>(uniform_int(rng, 0, 80)),
                              static_cast<double>(uniform_int(rng, 0, 80)),
                              static_cast<double>(uniform_int(rng, 5, 20)),
                              static_cast<double>(uniform_int(rng, 5, 20))));
        }
    }

    return {make_gt(std::move(gt)), make_res(std::move(res))};
}

// Detailed equality of two event logs; returns an empty string when equal.
inline std::string compare_logs(const moteval::EventLog& a, const moteval::EventLog& b) {
    std::ostringstream why;
    if (a.frame_count != b.frame_count) {
        why << "frame_count " << a.frame_count << " vs " << b.frame_count;
        return why.str();
    }
    if (a.frames.size() != b.frames.size()) {
        why << "frame list size " << a.frames.size() << " vs " << b.frames.size();
        return why.str();
    }
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        const auto& fa = a.frames[i];
        const auto& fb = b.frames[i];
        auto fail = [&](const char* what) {
            why << "frame " << fa.frame << ": " << what;
            return why.str();
        };
        if (fa.frame != fb.frame) return fail("frame index");
        if (fa.gt_count != fb.gt_count) return fail("gt_count");
        if (fa.misses != fb.misses) return fail("misses");
        if (fa.false_positives != fb.false_positives) return fail("false positives");
        if (fa.suppressed_hyps != fb.suppressed_hyps) return fail("suppressed");
        if (fa.matches.size() != fb.matches.size()) return fail("match count");
        for (std::size_t m = 0; m < fa.matches.size(); ++m) {
            if (fa.matches[m].gt_id != fb.matches[m].gt_id ||
                fa.matches[m].hyp_id != fb.matches[m].hyp_id ||
                fa.matches[m].overlap != fb.matches[m].overlap ||
                fa.matches[m].carried_over != fb.matches[m].carried_over)
                return fail("match record");
        }
        if (fa.id_switches.size() != fb.id_switches.size()) return fail("id switch count");
        for (std::size_t m = 0; m < fa.id_switches.size(); ++m) {
            if (fa.id_switches[m].gt_id != fb.id_switches[m].gt_id ||
                fa.id_switches[m].old_hyp_id != fb.id_switches[m].old_hyp_id ||
                fa.id_switches[m].new_hyp_id != fb.id_switches[m].new_hyp_id)
                return fail("id switch record");
        }
    }
    if (a.tracks.size() != b.tracks.size()) return "track count differs";
    for (std::size_t i = 0; i < a.tracks.size(); ++i) {
        if (a.tracks[i].track_id != b.tracks[i].track_id ||
            a.tracks[i].lifespan != b.tracks[i].lifespan ||
            a.tracks[i].tracked != b.tracks[i].tracked) {
            why << "track " << a.tracks[i].track_id << " life/tracked differs";
            return why.str();
        }
    }
    return {};
}

}  // namespace support
