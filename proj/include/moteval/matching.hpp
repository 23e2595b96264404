// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Frame-by-frame tracker-to-target matching with temporal carry-over.
//
// Per frame, in order:
//   1. hypotheses overlapping an ignorable annotation (> 50% IoU) are
//      removed one-to-one via optimal assignment, except hypotheses whose
//      carry-over pairing to a pedestrian is still valid this frame;
//   2. pairings from the previous frame are kept whenever their overlap is
//      still at or above the threshold, even if a closer hypothesis exists;
//   3. the remaining targets and hypotheses are matched by minimum-cost
//      assignment on 1 - IoU, pairs below the threshold forbidden;
//   4. an identity switch is counted when a target's new hypothesis differs
//      from its last known one (memory persists across untracked gaps);
//   5. unmatched targets are misses, unmatched kept hypotheses are false
//      positives.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "moteval/assignment.hpp"
#include "moteval/core.hpp"
#include "moteval/io.hpp"

namespace moteval {

struct EvalConfig {
    double iou_threshold = 0.5;
    double min_height = 0.0;
    double distractor_overlap_threshold = 0.5;
    // The minimum-height filter applies to ground truth; optionally also
    // drop shorter result boxes from the evaluation.
    bool apply_min_height_to_results = false;

    void validate() const {
        if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
            throw InputError("iou_threshold must lie in (0, 1]");
        if (!(distractor_overlap_threshold > 0.0) || distractor_overlap_threshold > 1.0)
            throw InputError("distractor_overlap_threshold must lie in (0, 1]");
        if (min_height < 0.0) throw InputError("min_height must be non-negative");
    }
};

struct MatchRecord {
    int gt_id;
    int hyp_id;
    double overlap;     // IoU of the matched pair, >= iou_threshold
    bool carried_over;  // kept from the previous frame rather than re-assigned
};

struct IdSwitch {
    int gt_id;
    int old_hyp_id;
    int new_hyp_id;
};

struct FrameEvents {
    int frame = 0;
    int gt_count = 0;                      // active pedestrian boxes this frame
    std::vector<MatchRecord> matches;      // sorted by gt_id
    std::vector<int> false_positives;      // unmatched kept hypothesis ids
    std::vector<int> misses;               // unmatched target ids
    std::vector<IdSwitch> id_switches;
    std::vector<int> suppressed_hyps;      // removed by distractor filtering
};

// Per ground-truth trajectory: the frames it exists in (active entries
// only) and the frames it was matched in.
struct TrackLife {
    int track_id = 0;
    std::vector<int> lifespan;
    std::vector<int> tracked;
};

struct EventLog {
    std::string sequence;
    int frame_count = 0;
    std::vector<FrameEvents> frames;  // one per frame, 1..frame_count
    std::vector<TrackLife> tracks;    // sorted by track_id

    long long total_fp() const {
        long long n = 0;
        for (const auto& f : frames) n += static_cast<long long>(f.false_positives.size());
        return n;
    }
    long long total_fn() const {
        long long n = 0;
        for (const auto& f : frames) n += static_cast<long long>(f.misses.size());
        return n;
    }
    long long total_idsw() const {
        long long n = 0;
        for (const auto& f : frames) n += static_cast<long long>(f.id_switches.size());
        return n;
    }
    long long total_matches() const {
        long long n = 0;
        for (const auto& f : frames) n += static_cast<long long>(f.matches.size());
        return n;
    }
    long long total_gt() const {
        long long n = 0;
        for (const auto& f : frames) n += f.gt_count;
        return n;
    }
    double overlap_sum() const {
        double s = 0.0;
        for (const auto& f : frames)
            for (const auto& m : f.matches) s += m.overlap;
        return s;
    }
};

struct FilteredGt {
    int max_frame = 0;
    std::vector<std::vector<GtEntry>> targets;     // indexed by frame, 1-based
    std::vector<std::vector<GtEntry>> ignorables;  // indexed by frame, 1-based
};

// Splits ground truth into evaluated targets (pedestrians, active flag set,
// tall enough) and ignorable annotations (the four ignorable classes plus
// pedestrians that are flagged inactive or below the height cutoff).
// Vehicle and occluder classes land in neither set.
inline FilteredGt filter_gt(const ParsedFile& gt, const EvalConfig& cfg, int frame_count = 0) {
    if (gt.kind != FileKind::GroundTruth)
        throw InputError("filter_gt expects a ground-truth file");
    cfg.validate();

    FilteredGt out;
    out.max_frame = frame_count;
    for (const auto& e : gt.gt) out.max_frame = std::max(out.max_frame, e.frame);
    out.targets.resize(out.max_frame + 1);
    out.ignorables.resize(out.max_frame + 1);

    for (const auto& e : gt.gt) {
        if (frame_count > 0 && e.frame > frame_count)
            throw InputError(gt.origin + ": validation error: ground-truth frame " +
                             std::to_string(e.frame) + " outside [1, " +
                             std::to_string(frame_count) + "]");
        if (is_target_class(e.cls)) {
            if (e.active_flag == 1 && e.box.height >= cfg.min_height)
                out.targets[e.frame].push_back(e);
            else
                out.ignorables[e.frame].push_back(e);
        } else if (is_ignorable_class(e.cls)) {
            out.ignorables[e.frame].push_back(e);
        }
        // vehicles and occluders play no role in the matching
    }
    return out;
}

struct SuppressionResult {
    std::vector<ResultEntry> kept;   // input order preserved
    std::vector<int> suppressed;     // hypothesis ids, input order
};

// One-to-one removal of hypotheses that cover ignorable annotations with
// IoU strictly above the threshold. Hypotheses in `exempt` are never
// suppressed (used for pairs being carried over to a pedestrian).
inline SuppressionResult suppress_distractor_hits(const std::vector<ResultEntry>& frame_hyps,
                                                  const std::vector<GtEntry>& ignorables,
                                                  const EvalConfig& cfg,
                                                  const std::set<int>& exempt = {}) {
    cfg.validate();
    SuppressionResult out;
    if (ignorables.empty() || frame_hyps.empty()) {
        out.kept = frame_hyps;
        return out;
    }

    std::vector<int> candidates;  // indices into frame_hyps
    for (std::size_t h = 0; h < frame_hyps.size(); ++h)
        if (!exempt.count(frame_hyps[h].track_id)) candidates.push_back(static_cast<int>(h));

    CostMatrix cost(static_cast<int>(candidates.size()), static_cast<int>(ignorables.size()));
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        for (std::size_t c = 0; c < ignorables.size(); ++c) {
            const double ov = iou(frame_hyps[candidates[r]].box, ignorables[c].box);
            if (ov > cfg.distractor_overlap_threshold) cost.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
        }
    }
    std::set<int> removed;
    for (const auto& [r, c] : solve_assignment(cost).pairs) removed.insert(candidates[r]);

    for (std::size_t h = 0; h < frame_hyps.size(); ++h) {
        if (removed.count(static_cast<int>(h)))
            out.suppressed.push_back(frame_hyps[h].track_id);
        else
            out.kept.push_back(frame_hyps[h]);
    }
    return out;
}

// Runs the full per-sequence evaluation and emits the event stream all
// metrics are computed from. When frame_count is 0 it is inferred from the
// data; otherwise entries outside [1, frame_count] are rejected.
inline EventLog match_sequence(const ParsedFile& gt, const ParsedFile& res,
                               const EvalConfig& cfg, int frame_count = 0,
                               std::string sequence_name = "") {
    if (gt.kind != FileKind::GroundTruth)
        throw InputError("match_sequence expects ground truth as first input");
    if (res.kind != FileKind::Result)
        throw InputError("match_sequence expects a result file as second input");
    cfg.validate();

    int max_frame = frame_count;
    if (max_frame == 0) {
        for (const auto& e : gt.gt) max_frame = std::max(max_frame, e.frame);
        for (const auto& e : res.results) max_frame = std::max(max_frame, e.frame);
    }
    for (const auto& e : res.results) {
        if (e.frame < 1 || e.frame > max_frame)
            throw InputError(res.origin + ": validation error: result frame index " +
                             std::to_string(e.frame) + " outside [1, " +
                             std::to_string(max_frame) + "]");
    }

    const FilteredGt filtered = filter_gt(gt, cfg, max_frame);

    std::vector<std::vector<ResultEntry>> hyps(max_frame + 1);
    for (const auto& e : res.results) {
        if (cfg.apply_min_height_to_results && e.box.height < cfg.min_height) continue;
        hyps[e.frame].push_back(e);
    }

    EventLog log;
    log.sequence = std::move(sequence_name);
    log.frame_count = max_frame;
    log.frames.reserve(max_frame);

    std::map<int, std::vector<int>> lifespan, tracked;
    std::map<int, int> prev_match;  // gt id -> hyp id matched in frame t-1
    std::map<int, int> last_known;  // gt id -> last hyp id ever matched

    for (int t = 1; t <= max_frame; ++t) {
        const std::vector<GtEntry>& targets = filtered.targets[t];
        const std::vector<GtEntry>& ignorables = filtered.ignorables[t];
        const std::vector<ResultEntry>& frame_hyps = hyps[t];

        FrameEvents ev;
        ev.frame = t;
        ev.gt_count = static_cast<int>(targets.size());
        for (const auto& g : targets) lifespan[g.track_id].push_back(t);

        std::map<int, const ResultEntry*> hyp_by_id;
        for (const auto& h : frame_hyps) hyp_by_id[h.track_id] = &h;

        // Carry-over: previous-frame pairs that still overlap enough are
        // fixed before anything else and shield their hypothesis from
        // distractor suppression.
        std::vector<MatchRecord> matches;
        std::set<int> matched_gt, matched_hyp;
        for (const auto& g : targets) {
            const auto it = prev_match.find(g.track_id);
            if (it == prev_match.end()) continue;
            const auto hit = hyp_by_id.find(it->second);
            if (hit == hyp_by_id.end()) continue;
            const double ov = iou(g.box, hit->second->box);
            if (ov >= cfg.iou_threshold) {
                matches.push_back({g.track_id, it->second, ov, true});
                matched_gt.insert(g.track_id);
                matched_hyp.insert(it->second);
            }
        }

        const SuppressionResult sup =
            suppress_distractor_hits(frame_hyps, ignorables, cfg, matched_hyp);
        ev.suppressed_hyps = sup.suppressed;

        // Optimal assignment over what is left.
        std::vector<const GtEntry*> free_gt;
        for (const auto& g : targets)
            if (!matched_gt.count(g.track_id)) free_gt.push_back(&g);
        std::vector<const ResultEntry*> free_hyp;
        for (const auto& h : sup.kept)
            if (!matched_hyp.count(h.track_id)) free_hyp.push_back(&h);

        if (!free_gt.empty() && !free_hyp.empty()) {
            CostMatrix cost(static_cast<int>(free_gt.size()), static_cast<int>(free_hyp.size()));
            for (std::size_t r = 0; r < free_gt.size(); ++r) {
                for (std::size_t c = 0; c < free_hyp.size(); ++c) {
                    const double ov = iou(free_gt[r]->box, free_hyp[c]->box);
                    if (ov >= cfg.iou_threshold)
                        cost.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
                }
            }
            for (const auto& [r, c] : solve_assignment(cost).pairs) {
                const double ov = iou(free_gt[r]->box, free_hyp[c]->box);
                matches.push_back({free_gt[r]->track_id, free_hyp[c]->track_id, ov, false});
                matched_gt.insert(free_gt[r]->track_id);
                matched_hyp.insert(free_hyp[c]->track_id);
            }
        }

        std::sort(matches.begin(), matches.end(),
                  [](const MatchRecord& a, const MatchRecord& b) { return a.gt_id < b.gt_id; });

        prev_match.clear();
        for (const auto& m : matches) {
            const auto it = last_known.find(m.gt_id);
            if (it != last_known.end() && it->second != m.hyp_id)
                ev.id_switches.push_back({m.gt_id, it->second, m.hyp_id});
            last_known[m.gt_id] = m.hyp_id;
            prev_match[m.gt_id] = m.hyp_id;
            tracked[m.gt_id].push_back(t);
        }

        for (const auto& g : targets)
            if (!matched_gt.count(g.track_id)) ev.misses.push_back(g.track_id);
        for (const auto& h : sup.kept)
            if (!matched_hyp.count(h.track_id)) ev.false_positives.push_back(h.track_id);
        std::sort(ev.misses.begin(), ev.misses.end());
        std::sort(ev.false_positives.begin(), ev.false_positives.end());

        ev.matches = std::move(matches);
        log.frames.push_back(std::move(ev));
    }

    for (auto& [id, frames] : lifespan) {
        TrackLife life;
        life.track_id = id;
        life.lifespan = std::move(frames);
        const auto it = tracked.find(id);
        if (it != tracked.end()) life.tracked = std::move(it->second);
        log.tracks.push_back(std::move(life));
    }
    return log;
}

}  // namespace moteval
