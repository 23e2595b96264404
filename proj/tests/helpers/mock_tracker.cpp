// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Stand-in for an external tracker with a known accuracy landscape, used by
// the parameter-search tests.
//
//   mock_tracker <gt_root> <seqmap> <out_dir> <mode> <theta1>
//
// Modes:
//   copy_if_gt1   copy the pedestrian ground truth when theta1 > 1,
//                 otherwise emit empty result files (accuracy 0)
//   keep_frames   keep boxes from the first clamp(theta1/4, 0, 1) fraction
//                 of each sequence's frames (accuracy grows with theta1)
//   fail          exit nonzero without writing anything

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "moteval/io.hpp"

int main(int argc, char** argv) {
    if (argc != 6) {
        std::cerr << "usage: mock_tracker <gt_root> <seqmap> <out_dir> <mode> <theta1>\n";
        return 64;
    }
    const std::filesystem::path gt_root = argv[1];
    const std::filesystem::path seqmap_path = argv[2];
    const std::filesystem::path out_dir = argv[3];
    const std::string mode = argv[4];
    const double theta1 = std::strtod(argv[5], nullptr);

    if (mode == "fail") return 7;

    try {
        std::filesystem::create_directories(out_dir);
        for (const auto& seq : moteval::load_seqmap(seqmap_path)) {
            const moteval::ParsedFile gt =
                moteval::parse_csv(moteval::gt_file_path(gt_root, seq),
                                   moteval::FileKind::GroundTruth);
            int max_frame = 0;
            for (const auto& e : gt.gt) max_frame = std::max(max_frame, e.frame);

            moteval::ParsedFile res;
            res.kind = moteval::FileKind::Result;
            const bool copy_all = mode == "copy_if_gt1" && theta1 > 1.0;
            const double keep = std::clamp(theta1 / 4.0, 0.0, 1.0);
            const int keep_upto = static_cast<int>(keep * max_frame);
            for (const auto& e : gt.gt) {
                if (e.cls != moteval::ObjectClass::Pedestrian || e.active_flag != 1) continue;
                const bool take = mode == "keep_frames" ? e.frame <= keep_upto : copy_all;
                if (take) res.results.push_back({e.frame, e.track_id, e.box, 1.0});
            }
            moteval::write_csv_file(res, moteval::result_file_path(out_dir, seq));
        }
    } catch (const std::exception& e) {
        std::cerr << "mock_tracker: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
