// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Visibility of annotated targets under the ground-plane assumption: a box
// whose bottom edge is lower in the image is closer to the camera and
// occludes boxes behind it. Cropping by the image border counts as
// occlusion too.
#pragma once

#include <algorithm>
#include <vector>

#include "moteval/core.hpp"

namespace moteval {

namespace detail {

struct Rectd {
    double x0, y0, x1, y1;
    bool empty() const { return x1 <= x0 || y1 <= y0; }
};

inline Rectd intersect(const Rectd& a, const Rectd& b) {
    return {std::max(a.x0, b.x0), std::max(a.y0, b.y0),
            std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

inline Rectd to_rect(const BoundingBox& b) {
    return {b.left, b.top, b.right(), b.bottom()};
}

// Exact area of a rectangle union via vertical strips over compressed
// x-coordinates with merged y-intervals per strip.
inline double union_area(const std::vector<Rectd>& rects) {
    std::vector<double> xs;
    xs.reserve(rects.size() * 2);
    for (const auto& r : rects) {
        if (r.empty()) continue;
        xs.push_back(r.x0);
        xs.push_back(r.x1);
    }
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double total = 0.0;
    std::vector<std::pair<double, double>> spans;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double sx0 = xs[i], sx1 = xs[i + 1];
        spans.clear();
        for (const auto& r : rects) {
            if (r.empty() || r.x0 > sx0 || r.x1 < sx1) continue;
            spans.emplace_back(r.y0, r.y1);
        }
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        double covered = 0.0, cur0 = spans[0].first, cur1 = spans[0].second;
        for (std::size_t k = 1; k < spans.size(); ++k) {
            if (spans[k].first > cur1) {
                covered += cur1 - cur0;
                cur0 = spans[k].first;
                cur1 = spans[k].second;
            } else {
                cur1 = std::max(cur1, spans[k].second);
            }
        }
        covered += cur1 - cur0;
        total += covered * (sx1 - sx0);
    }
    return total;
}

}  // namespace detail

// Visibility ratio for each target in one frame. A box occludes the target
// when its bottom edge is strictly lower (ground-plane depth ordering);
// occluder-class boxes are treated as always in front. The occluded area is
// the union of all in-front intersections and the part of the target
// outside the image rectangle.
inline std::vector<double> compute_visibility(const std::vector<GtEntry>& targets,
                                              const std::vector<GtEntry>& occluders,
                                              const SequenceMeta& meta) {
    if (!(meta.image_width > 0.0) || !(meta.image_height > 0.0))
        throw InputError("sequence metadata must have positive image dimensions");
    if (!targets.empty()) {
        const int frame = targets.front().frame;
        for (const auto& t : targets)
            if (t.frame != frame) throw InputError("visibility entries must share one frame");
        for (const auto& o : occluders)
            if (o.frame != frame) throw InputError("visibility entries must share one frame");
    }

    const ImageRect img = image_rect(meta);
    const detail::Rectd image{img.x0, img.y0, img.x1, img.y1};

    std::vector<double> vis(targets.size(), 0.0);
    std::vector<detail::Rectd> covers;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const BoundingBox& box = targets[k].box;
        const double own_bottom = box.bottom();
        const detail::Rectd inside = detail::intersect(detail::to_rect(box), image);
        if (inside.empty()) {
            vis[k] = 0.0;
            continue;
        }
        covers.clear();
        for (std::size_t j = 0; j < targets.size(); ++j) {
            if (j == k) continue;
            if (targets[j].box.bottom() > own_bottom)
                covers.push_back(detail::intersect(detail::to_rect(targets[j].box), inside));
        }
        for (const auto& occ : occluders) {
            if (is_occluder_class(occ.cls) || occ.box.bottom() > own_bottom)
                covers.push_back(detail::intersect(detail::to_rect(occ.box), inside));
        }
        const double inside_area = (inside.x1 - inside.x0) * (inside.y1 - inside.y0);
        const double visible = inside_area - detail::union_area(covers);
        vis[k] = std::clamp(visible / box.area(), 0.0, 1.0);
    }
    return vis;
}

}  // namespace moteval
