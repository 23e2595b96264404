// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Core domain types: bounding boxes in 1-based image coordinates, the
// annotation class vocabulary, and the per-row entry types shared by the
// ground-truth, result and detection file formats.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace moteval {

// Bad or inconsistent input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A submission archive that is missing required sequences (CLI exit code 3).
class SubmissionError : public InputError {
public:
    using InputError::InputError;
};

// Requested metrics are undefined for the given data (e.g. no ground truth).
class MetricsUndefinedError : public InputError {
public:
    using InputError::InputError;
};

// Axis-aligned box, top-left corner plus extent. Coordinates are 1-based
// (the top-left image pixel is (1,1)) and fractional; they may lie outside
// the image, since annotations are estimated beyond the frame border.
struct BoundingBox {
    double left;
    double top;
    double width;
    double height;

    BoundingBox(double l, double t, double w, double h)
        : left(l), top(t), width(w), height(h) {
        if (!(w > 0.0) || !(h > 0.0))
            throw InputError("bounding box must have positive width and height");
        if (!std::isfinite(l) || !std::isfinite(t) || !std::isfinite(w) || !std::isfinite(h))
            throw InputError("bounding box coordinates must be finite");
    }

    double right() const { return left + width; }
    double bottom() const { return top + height; }
    double area() const { return width * height; }
};

// Jaccard index of two boxes; 0 when disjoint. All extents are computed
// from corner differences so identical boxes score exactly 1; the clamp
// covers the remaining one-ulp rounding of the union for near-identical
// boxes.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double iw = std::min(a.right(), b.right()) - std::max(a.left, b.left);
    const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double area_a = (a.right() - a.left) * (a.bottom() - a.top);
    const double area_b = (b.right() - b.left) * (b.bottom() - b.top);
    return std::min(1.0, inter / (area_a + area_b - inter));
}

// Annotation classes, matching the integer codes used in the files.
enum class ObjectClass : int {
    Pedestrian = 1,
    PersonOnVehicle = 2,
    Car = 3,
    Bicycle = 4,
    Motorbike = 5,
    NonMotorizedVehicle = 6,
    StaticPerson = 7,
    Distractor = 8,
    Occluder = 9,
    OccluderOnGround = 10,
    OccluderFull = 11,
    Reflection = 12,
};

inline ObjectClass object_class_from_id(int id) {
    if (id < 1 || id > 12)
        throw InputError("unknown object class id " + std::to_string(id));
    return static_cast<ObjectClass>(id);
}

inline const char* object_class_name(ObjectClass c) {
    switch (c) {
        case ObjectClass::Pedestrian: return "Pedestrian";
        case ObjectClass::PersonOnVehicle: return "Person on vehicle";
        case ObjectClass::Car: return "Car";
        case ObjectClass::Bicycle: return "Bicycle";
        case ObjectClass::Motorbike: return "Motorbike";
        case ObjectClass::NonMotorizedVehicle: return "Non motorized vehicle";
        case ObjectClass::StaticPerson: return "Static person";
        case ObjectClass::Distractor: return "Distractor";
        case ObjectClass::Occluder: return "Occluder";
        case ObjectClass::OccluderOnGround: return "Occluder on the ground";
        case ObjectClass::OccluderFull: return "Occluder full";
        case ObjectClass::Reflection: return "Reflection";
    }
    return "?";
}

// The class trackers are evaluated on.
inline bool is_target_class(ObjectClass c) { return c == ObjectClass::Pedestrian; }

// Classes a tracker is neither penalized nor rewarded for following:
// person on vehicle, static person, distractor, reflection.
inline bool is_ignorable_class(ObjectClass c) {
    return c == ObjectClass::PersonOnVehicle || c == ObjectClass::StaticPerson ||
           c == ObjectClass::Distractor || c == ObjectClass::Reflection;
}

inline bool is_occluder_class(ObjectClass c) {
    return c == ObjectClass::Occluder || c == ObjectClass::OccluderOnGround ||
           c == ObjectClass::OccluderFull;
}

// One ground-truth row.
struct GtEntry {
    int frame;
    int track_id;
    BoundingBox box;
    int active_flag;  // 1 = considered, 0 = ignored
    ObjectClass cls;
    double visibility;  // in [0, 1]
};

// One tracker-output row. The confidence is carried through but plays no
// role in the evaluation.
struct ResultEntry {
    int frame;
    int track_id;
    BoundingBox box;
    double confidence;
};

// One detector-output row; detections carry no identity.
struct DetEntry {
    int frame;
    BoundingBox box;
    double confidence;
};

struct SequenceMeta {
    std::string name;
    int frame_count = 0;
    double fps = 0.0;
    double image_width = 0.0;
    double image_height = 0.0;
};

// The image rectangle in continuous 1-based coordinates: pixel (1,1)
// occupies [0.5, 1.5) x [0.5, 1.5), so a WxH image spans
// [0.5, W + 0.5] x [0.5, H + 0.5].
struct ImageRect {
    double x0, y0, x1, y1;
};

inline ImageRect image_rect(const SequenceMeta& meta) {
    return {0.5, 0.5, meta.image_width + 0.5, meta.image_height + 0.5};
}

struct ClipResult {
    std::optional<BoundingBox> box;  // empty when fully outside
    double cropped_fraction = 0.0;   // share of the original area lost
};

// Intersects a box with the image rectangle.
inline ClipResult clip_to_image(const BoundingBox& b, const SequenceMeta& meta) {
    if (!(meta.image_width > 0.0) || !(meta.image_height > 0.0))
        throw InputError("sequence metadata must have positive image dimensions");
    const ImageRect img = image_rect(meta);
    const double x0 = std::max(b.left, img.x0);
    const double y0 = std::max(b.top, img.y0);
    const double x1 = std::min(b.right(), img.x1);
    const double y1 = std::min(b.bottom(), img.y1);
    if (x1 <= x0 || y1 <= y0) return {std::nullopt, 1.0};
    BoundingBox clipped(x0, y0, x1 - x0, y1 - y0);
    const double frac = 1.0 - clipped.area() / b.area();
    return {clipped, std::clamp(frac, 0.0, 1.0)};
}

}  // namespace moteval
