// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Test oracle: a straight-line reference evaluator for the per-sequence
// matching protocol, using the exhaustive assignment oracle instead of the
// production solver. Deliberately naive; kept independent of
// moteval/matching.hpp internals.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "exhaustive_assignment.hpp"
#include "moteval/core.hpp"
#include "moteval/io.hpp"
#include "moteval/matching.hpp"

namespace oracle {

inline moteval::EventLog reference_match_sequence(const moteval::ParsedFile& gt,
                                                  const moteval::ParsedFile& res,
                                                  const moteval::EvalConfig& cfg,
                                                  int frame_count = 0,
                                                  std::string sequence_name = "") {
    using namespace moteval;

    int max_frame = frame_count;
    if (max_frame == 0) {
        for (const auto& e : gt.gt) max_frame = std::max(max_frame, e.frame);
        for (const auto& e : res.results) max_frame = std::max(max_frame, e.frame);
    }

    // Step 0: split annotations into evaluated pedestrians and ignorable
    // boxes; vehicles/occluders are dropped.
    std::vector<std::vector<GtEntry>> targets(max_frame + 1), ignorable(max_frame + 1);
    for (const auto& e : gt.gt) {
        if (e.cls == ObjectClass::Pedestrian) {
            if (e.active_flag == 1 && e.box.height >= cfg.min_height)
                targets[e.frame].push_back(e);
            else
                ignorable[e.frame].push_back(e);
        } else if (e.cls == ObjectClass::PersonOnVehicle || e.cls == ObjectClass::StaticPerson ||
                   e.cls == ObjectClass::Distractor || e.cls == ObjectClass::Reflection) {
            ignorable[e.frame].push_back(e);
        }
    }
    std::vector<std::vector<ResultEntry>> hyps(max_frame + 1);
    for (const auto& e : res.results) {
        if (cfg.apply_min_height_to_results && e.box.height < cfg.min_height) continue;
        hyps.at(e.frame).push_back(e);
    }

    EventLog log;
    log.sequence = std::move(sequence_name);
    log.frame_count = max_frame;

    std::map<int, int> prev;        // matching of frame t-1
    std::map<int, int> last_known;  // persistent across gaps
    std::map<int, std::vector<int>> life, got;

    for (int t = 1; t <= max_frame; ++t) {
        FrameEvents ev;
        ev.frame = t;
        ev.gt_count = static_cast<int>(targets[t].size());
        for (const auto& g : targets[t]) life[g.track_id].push_back(t);

        // Carried-over pairs: matched in t-1, both present, still overlapping.
        std::map<int, int> carried;  // gt id -> hyp id
        std::set<int> carried_hyps;
        for (const auto& g : targets[t]) {
            auto pit = prev.find(g.track_id);
            if (pit == prev.end()) continue;
            for (const auto& h : hyps[t]) {
                if (h.track_id != pit->second) continue;
                if (iou(g.box, h.box) >= cfg.iou_threshold) {
                    carried[g.track_id] = h.track_id;
                    carried_hyps.insert(h.track_id);
                }
            }
        }

        // Distractor suppression: one-to-one, overlap strictly above the
        // threshold, carried hypotheses exempt.
        std::vector<const ResultEntry*> pool;
        for (const auto& h : hyps[t])
            if (!carried_hyps.count(h.track_id)) pool.push_back(&h);
        std::set<int> suppressed;
        if (!pool.empty() && !ignorable[t].empty()) {
            CostMatrix cm(static_cast<int>(pool.size()), static_cast<int>(ignorable[t].size()));
            for (std::size_t r = 0; r < pool.size(); ++r)
                for (std::size_t c = 0; c < ignorable[t].size(); ++c) {
                    const double ov = iou(pool[r]->box, ignorable[t][c].box);
                    if (ov > cfg.distractor_overlap_threshold)
                        cm.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
                }
            for (const auto& [r, c] : exhaustive_assignment(cm).pairs)
                suppressed.insert(pool[r]->track_id);
        }
        for (const auto& h : hyps[t])
            if (suppressed.count(h.track_id)) ev.suppressed_hyps.push_back(h.track_id);

        // Remaining targets vs remaining hypotheses, exhaustive optimum.
        std::vector<const GtEntry*> free_g;
        for (const auto& g : targets[t])
            if (!carried.count(g.track_id)) free_g.push_back(&g);
        std::vector<const ResultEntry*> free_h;
        for (const auto& h : hyps[t])
            if (!carried_hyps.count(h.track_id) && !suppressed.count(h.track_id))
                free_h.push_back(&h);

        std::map<int, int> assigned = carried;
        if (!free_g.empty() && !free_h.empty()) {
            CostMatrix cm(static_cast<int>(free_g.size()), static_cast<int>(free_h.size()));
            for (std::size_t r = 0; r < free_g.size(); ++r)
                for (std::size_t c = 0; c < free_h.size(); ++c) {
                    const double ov = iou(free_g[r]->box, free_h[c]->box);
                    if (ov >= cfg.iou_threshold)
                        cm.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
                }
            for (const auto& [r, c] : exhaustive_assignment(cm).pairs)
                assigned[free_g[r]->track_id] = free_h[c]->track_id;
        }

        for (const auto& g : targets[t]) {
            auto it = assigned.find(g.track_id);
            if (it == assigned.end()) {
                ev.misses.push_back(g.track_id);
                continue;
            }
            double ov = 0.0;
            for (const auto& h : hyps[t])
                if (h.track_id == it->second) ov = iou(g.box, h.box);
            ev.matches.push_back(
                {g.track_id, it->second, ov, carried.count(g.track_id) > 0});
            auto lk = last_known.find(g.track_id);
            if (lk != last_known.end() && lk->second != it->second)
                ev.id_switches.push_back({g.track_id, lk->second, it->second});
            last_known[g.track_id] = it->second;
            got[g.track_id].push_back(t);
        }
        std::set<int> used;
        for (const auto& [g, h] : assigned) used.insert(h);
        for (const auto& h : hyps[t])
            if (!used.count(h.track_id) && !suppressed.count(h.track_id))
                ev.false_positives.push_back(h.track_id);

        std::sort(ev.misses.begin(), ev.misses.end());
        std::sort(ev.false_positives.begin(), ev.false_positives.end());
        prev = assigned;
        log.frames.push_back(std::move(ev));
    }

    for (auto& [id, frames] : life) {
        TrackLife tl;
        tl.track_id = id;
        tl.lifespan = std::move(frames);
        if (got.count(id)) tl.tracked = std::move(got[id]);
        log.tracks.push_back(std::move(tl));
    }
    return log;
}

}  // namespace oracle
