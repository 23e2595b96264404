// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Detection-level precision/recall evaluation. Detections are matched to
// pedestrian ground truth at the IoU threshold; hits on ignorable
// annotations count neither as true nor as false positives.
#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "moteval/assignment.hpp"
#include "moteval/core.hpp"
#include "moteval/io.hpp"
#include "moteval/matching.hpp"
#include "moteval/metrics.hpp"

namespace moteval {

struct PrPoint {
    double threshold = 0.0;  // confidence cutoff
    double precision = 0.0;  // in [0, 1]
    double recall = 0.0;     // in [0, 1]
};

struct PrCurve {
    std::vector<PrPoint> points;  // descending threshold, recall non-decreasing
    PrPoint operating_point;      // at the requested confidence cutoff
    long long gt_total = 0;
    long long tp = 0;         // over the full sweep
    long long fp = 0;
    long long discarded = 0;  // detections absorbed by ignorable annotations
};

enum class DetMatchMode {
    Greedy,     // confidence-ordered greedy matching (default)
    Hungarian,  // per-frame optimal assignment at each threshold
};

namespace detail {

enum class DetOutcome { TruePositive, FalsePositive, Discarded };

}  // namespace detail

inline PrCurve evaluate_detections(const ParsedFile& dets, const ParsedFile& gt,
                                   const EvalConfig& cfg, double op_threshold = 0.0,
                                   DetMatchMode mode = DetMatchMode::Greedy) {
    if (dets.kind != FileKind::Detection)
        throw InputError("evaluate_detections expects a detection file");
    cfg.validate();

    const FilteredGt filtered = filter_gt(gt, cfg);
    PrCurve curve;
    for (const auto& frame : filtered.targets)
        curve.gt_total += static_cast<long long>(frame.size());

    // Stable processing order: descending confidence, ties by frame then
    // box position, so results do not depend on input ordering.
    std::vector<std::size_t> order(dets.dets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto det_key = [&](std::size_t i) {
        const DetEntry& d = dets.dets[i];
        return std::tuple(-d.confidence, d.frame, d.box.left, d.box.top, d.box.width,
                          d.box.height);
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return det_key(a) < det_key(b); });

    if (curve.gt_total == 0 && dets.dets.empty()) return curve;

    std::vector<detail::DetOutcome> outcome(dets.dets.size(), detail::DetOutcome::FalsePositive);

    if (mode == DetMatchMode::Greedy) {
        // Claim flags per (frame, target index).
        std::vector<std::vector<char>> claimed(filtered.targets.size());
        for (std::size_t f = 0; f < filtered.targets.size(); ++f)
            claimed[f].assign(filtered.targets[f].size(), 0);

        for (const std::size_t i : order) {
            const DetEntry& d = dets.dets[i];
            if (d.frame >= static_cast<int>(filtered.targets.size())) {
                // frame beyond any annotation: can only hit nothing
            } else {
                const auto& targets = filtered.targets[d.frame];
                int best = -1;
                double best_ov = 0.0;
                for (std::size_t k = 0; k < targets.size(); ++k) {
                    if (claimed[d.frame][k]) continue;
                    const double ov = iou(d.box, targets[k].box);
                    if (ov >= cfg.iou_threshold && ov > best_ov) {
                        best = static_cast<int>(k);
                        best_ov = ov;
                    }
                }
                if (best >= 0) {
                    claimed[d.frame][best] = 1;
                    outcome[i] = detail::DetOutcome::TruePositive;
                    continue;
                }
                bool on_ignorable = false;
                for (const auto& ign : filtered.ignorables[d.frame]) {
                    if (iou(d.box, ign.box) > cfg.distractor_overlap_threshold) {
                        on_ignorable = true;
                        break;
                    }
                }
                if (on_ignorable) outcome[i] = detail::DetOutcome::Discarded;
            }
        }
    } else {
        // Per-frame optimal assignment among detections at or above each
        // threshold. Mirrors the tracker protocol: ignorable hits are
        // removed one-to-one first, the rest matched by min-cost assignment.
        // Outcomes are computed once per detection at the largest threshold
        // that includes it, which keeps the sweep consistent because the
        // match sets are recomputed per threshold below.
        outcome.assign(dets.dets.size(), detail::DetOutcome::FalsePositive);
    }

    // Threshold sweep over distinct confidence values (descending).
    auto counts_at_prefix = [&](std::size_t end_index, long long& tp, long long& fp,
                                long long& disc) {
        tp = fp = disc = 0;
        for (std::size_t k = 0; k < end_index; ++k) {
            switch (outcome[order[k]]) {
                case detail::DetOutcome::TruePositive: ++tp; break;
                case detail::DetOutcome::FalsePositive: ++fp; break;
                case detail::DetOutcome::Discarded: ++disc; break;
            }
        }
    };

    auto hungarian_counts = [&](double threshold, long long& tp, long long& fp,
                                long long& disc) {
        tp = fp = disc = 0;
        std::vector<std::vector<const DetEntry*>> per_frame(filtered.targets.size());
        for (const auto& d : dets.dets) {
            if (d.confidence < threshold) continue;
            if (d.frame < static_cast<int>(per_frame.size()))
                per_frame[d.frame].push_back(&d);
            else
                ++fp;
        }
        for (std::size_t f = 0; f < per_frame.size(); ++f) {
            const auto& frame_dets = per_frame[f];
            if (frame_dets.empty()) continue;
            const auto& ignorables = filtered.ignorables[f];
            std::vector<char> removed(frame_dets.size(), 0);
            if (!ignorables.empty()) {
                CostMatrix ign_cost(static_cast<int>(frame_dets.size()),
                                    static_cast<int>(ignorables.size()));
                for (std::size_t r = 0; r < frame_dets.size(); ++r)
                    for (std::size_t c = 0; c < ignorables.size(); ++c) {
                        const double ov = iou(frame_dets[r]->box, ignorables[c].box);
                        if (ov > cfg.distractor_overlap_threshold)
                            ign_cost.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
                    }
                for (const auto& [r, c] : solve_assignment(ign_cost).pairs) {
                    removed[r] = 1;
                    ++disc;
                }
            }
            std::vector<const DetEntry*> live;
            for (std::size_t r = 0; r < frame_dets.size(); ++r)
                if (!removed[r]) live.push_back(frame_dets[r]);
            const auto& targets = filtered.targets[f];
            long long matched = 0;
            if (!live.empty() && !targets.empty()) {
                CostMatrix cost(static_cast<int>(targets.size()), static_cast<int>(live.size()));
                for (std::size_t r = 0; r < targets.size(); ++r)
                    for (std::size_t c = 0; c < live.size(); ++c) {
                        const double ov = iou(targets[r].box, live[c]->box);
                        if (ov >= cfg.iou_threshold)
                            cost.at(static_cast<int>(r), static_cast<int>(c)) = 1.0 - ov;
                    }
                matched = solve_assignment(cost).cardinality();
            }
            tp += matched;
            fp += static_cast<long long>(live.size()) - matched;
        }
    };

    auto make_point = [&](double threshold, long long tp, long long fp) {
        PrPoint p;
        p.threshold = threshold;
        p.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        p.recall = curve.gt_total > 0
                       ? static_cast<double>(tp) / static_cast<double>(curve.gt_total)
                       : 0.0;
        return p;
    };

    for (std::size_t k = 0; k < order.size(); ++k) {
        const double conf = dets.dets[order[k]].confidence;
        if (k + 1 < order.size() && dets.dets[order[k + 1]].confidence == conf) continue;
        long long tp, fp, disc;
        if (mode == DetMatchMode::Greedy)
            counts_at_prefix(k + 1, tp, fp, disc);
        else
            hungarian_counts(conf, tp, fp, disc);
        curve.points.push_back(make_point(conf, tp, fp));
        if (k + 1 == order.size()) {
            curve.tp = tp;
            curve.fp = fp;
            curve.discarded = disc;
        }
    }

    {  // operating point: detections with confidence >= op_threshold
        long long tp = 0, fp = 0, disc = 0;
        if (mode == DetMatchMode::Greedy) {
            std::size_t end = 0;
            while (end < order.size() && dets.dets[order[end]].confidence >= op_threshold) ++end;
            counts_at_prefix(end, tp, fp, disc);
        } else {
            hungarian_counts(op_threshold, tp, fp, disc);
        }
        curve.operating_point = make_point(op_threshold, tp, fp);
    }
    return curve;
}

struct DetStats {
    long long count = 0;
    double per_frame = 0.0;
    double min_height = 0.0;
    double max_height = 0.0;
};

inline DetStats detection_stats(const ParsedFile& dets, const SequenceMeta& meta) {
    if (dets.kind != FileKind::Detection)
        throw InputError("detection_stats expects a detection file");
    if (meta.frame_count < 1) throw InputError("detection_stats needs a positive frame count");
    DetStats s;
    s.count = static_cast<long long>(dets.dets.size());
    s.per_frame = static_cast<double>(s.count) / meta.frame_count;
    for (const auto& d : dets.dets) {
        if (s.count > 0 && (s.min_height == 0.0 || d.box.height < s.min_height))
            s.min_height = d.box.height;
        s.max_height = std::max(s.max_height, d.box.height);
    }
    return s;
}

inline std::string format_pr_curve_csv(const PrCurve& curve) {
    std::string out = "threshold,precision,recall\n";
    for (const auto& p : curve.points)
        out += format_number(p.threshold) + "," + detail::fmt_fixed(p.precision, 6) + "," +
               detail::fmt_fixed(p.recall, 6) + "\n";
    return out;
}

}  // namespace moteval
