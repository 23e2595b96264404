// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "moteval/core.hpp"
#include "oracles/rasterize.hpp"

using namespace moteval;

TEST_CASE("iou of identical boxes is 1") {
    const BoundingBox a(10, 10, 5, 8);
    CHECK(iou(a, a) == 1.0);
}

TEST_CASE("iou of disjoint boxes is 0") {
    CHECK(iou(BoundingBox(0, 0, 2, 2), BoundingBox(10, 10, 2, 2)) == 0.0);
}

TEST_CASE("iou of unit-offset overlap is 1/3") {
    // intersection 2, union 6
    CHECK(iou(BoundingBox(0, 0, 2, 2), BoundingBox(1, 0, 2, 2)) ==
          Catch::Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("degenerate boxes are rejected at construction") {
    CHECK_THROWS_AS(BoundingBox(0, 0, 0, 5), InputError);
    CHECK_THROWS_AS(BoundingBox(0, 0, 5, -1), InputError);
    CHECK_THROWS_AS(BoundingBox(0, 0, -3, 5), InputError);
}

TEST_CASE("iou is symmetric and translation-invariant") {
    std::mt19937_64 rng(11);
    auto rnd = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < 500; ++i) {
        const BoundingBox a(rnd(-50, 50), rnd(-50, 50), rnd(0.5, 40), rnd(0.5, 40));
        const BoundingBox b(rnd(-50, 50), rnd(-50, 50), rnd(0.5, 40), rnd(0.5, 40));
        CHECK(iou(a, a) == 1.0);  // exactly, for any fractional box
        CHECK(iou(a, b) == iou(b, a));
        const double v = iou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        const double dx = rnd(-100, 100), dy = rnd(-100, 100);
        const BoundingBox a2(a.left + dx, a.top + dy, a.width, a.height);
        const BoundingBox b2(b.left + dx, b.top + dy, b.width, b.height);
        CHECK(iou(a2, b2) == Catch::Approx(v).margin(1e-9));
    }
}

TEST_CASE("clip keeps a fully-inside box untouched") {
    SequenceMeta meta{"t", 10, 30.0, 100, 100};
    const BoundingBox b(10, 10, 5, 5);
    const ClipResult r = clip_to_image(b, meta);
    REQUIRE(r.box.has_value());
    CHECK(r.box->left == b.left);
    CHECK(r.box->top == b.top);
    CHECK(r.box->width == b.width);
    CHECK(r.box->height == b.height);
    CHECK(r.cropped_fraction == 0.0);
}

TEST_CASE("clip of a box hanging over the left border") {
    SequenceMeta meta{"t", 10, 30.0, 100, 100};
    const BoundingBox b(-5, 1, 10, 10);
    const ClipResult r = clip_to_image(b, meta);
    REQUIRE(r.box.has_value());
    CHECK(r.cropped_fraction == Catch::Approx(0.55).margin(1e-12));
    // pixel-rasterization oracle agrees
    CHECK(r.cropped_fraction ==
          Catch::Approx(oracle::rasterize_cropped_fraction(b, meta)).margin(1e-12));
    CHECK(r.box->left == 0.5);
    CHECK(r.box->width == Catch::Approx(4.5));
}

TEST_CASE("clip of a fully-outside box is empty") {
    SequenceMeta meta{"t", 10, 30.0, 100, 100};
    const ClipResult r = clip_to_image(BoundingBox(200, 200, 5, 5), meta);
    CHECK(!r.box.has_value());
    CHECK(r.cropped_fraction == 1.0);
}

TEST_CASE("clip agrees with the rasterization oracle on random integer boxes") {
    SequenceMeta meta{"t", 10, 30.0, 100, 100};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const double l = static_cast<double>(static_cast<int>(rng() % 140) - 20);
        const double t = static_cast<double>(static_cast<int>(rng() % 140) - 20);
        const double w = static_cast<double>(1 + rng() % 40);
        const double h = static_cast<double>(1 + rng() % 40);
        const BoundingBox b(l, t, w, h);
        CHECK(clip_to_image(b, meta).cropped_fraction ==
              Catch::Approx(oracle::rasterize_cropped_fraction(b, meta)).margin(1e-9));
    }
}

TEST_CASE("object classes map one-to-one onto ids 1..12") {
    for (int id = 1; id <= 12; ++id)
        CHECK(static_cast<int>(object_class_from_id(id)) == id);
    CHECK_THROWS_AS(object_class_from_id(0), InputError);
    CHECK_THROWS_AS(object_class_from_id(13), InputError);
    CHECK_THROWS_AS(object_class_from_id(-1), InputError);
}

TEST_CASE("class predicates partition as specified") {
    CHECK(is_target_class(ObjectClass::Pedestrian));
    for (int id = 2; id <= 12; ++id) CHECK(!is_target_class(object_class_from_id(id)));

    const std::set<int> ignorable = {2, 7, 8, 12};
    const std::set<int> occluder = {9, 10, 11};
    for (int id = 1; id <= 12; ++id) {
        CHECK(is_ignorable_class(object_class_from_id(id)) == (ignorable.count(id) > 0));
        CHECK(is_occluder_class(object_class_from_id(id)) == (occluder.count(id) > 0));
    }
}
