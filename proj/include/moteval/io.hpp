// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Reading and writing of the benchmark file formats:
//   - CSV annotation/result/detection files, 9 comma-separated fields per
//     line (results may carry 7 to 9), all coordinates 1-based;
//   - sequence maps (one sequence name per line);
//   - per-sequence metadata as a small `key = value` text file;
//   - ZIP submissions holding one "<Sequence-Name>.txt" per sequence.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "moteval/core.hpp"
#include "moteval/util.hpp"
#include "moteval/zip.hpp"

namespace moteval {

enum class FileKind { GroundTruth, Result, Detection };

inline const char* file_kind_name(FileKind k) {
    switch (k) {
        case FileKind::GroundTruth: return "ground truth";
        case FileKind::Result: return "result";
        case FileKind::Detection: return "detection";
    }
    return "?";
}

struct ParsedFile {
    FileKind kind = FileKind::GroundTruth;
    std::string origin;  // path or label used in error messages
    std::vector<GtEntry> gt;
    std::vector<ResultEntry> results;
    std::vector<DetEntry> dets;
    std::vector<std::string> warnings;

    std::size_t size() const {
        switch (kind) {
            case FileKind::GroundTruth: return gt.size();
            case FileKind::Result: return results.size();
            case FileKind::Detection: return dets.size();
        }
        return 0;
    }
};

namespace detail {

inline double parse_field(std::string_view raw, const std::string& origin, std::size_t lineno,
                          const char* what) {
    const std::string_view s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError(origin + ":" + std::to_string(lineno) + ": parse error: bad " +
                         std::string(what) + " value '" + std::string(s) + "'");
    return v;
}

inline long long parse_int_field(std::string_view raw, const std::string& origin,
                                 std::size_t lineno, const char* what) {
    const double v = parse_field(raw, origin, lineno, what);
    if (v != std::floor(v) || std::abs(v) > 1e12)
        throw InputError(origin + ":" + std::to_string(lineno) + ": parse error: " +
                         std::string(what) + " must be an integer, got '" +
                         std::string(trim(raw)) + "'");
    return static_cast<long long>(v);
}

inline BoundingBox parse_box(const std::vector<std::string_view>& f, const std::string& origin,
                             std::size_t lineno) {
    const double l = parse_field(f[2], origin, lineno, "left");
    const double t = parse_field(f[3], origin, lineno, "top");
    const double w = parse_field(f[4], origin, lineno, "width");
    const double h = parse_field(f[5], origin, lineno, "height");
    if (!(w > 0.0) || !(h > 0.0))
        throw InputError(origin + ":" + std::to_string(lineno) +
                         ": validation error: non-positive width/height");
    return {l, t, w, h};
}

}  // namespace detail

// Parses one CSV file given as text. Lines are newline-terminated (LF or
// CRLF); blank lines are skipped; spaces after commas are tolerated.
inline ParsedFile parse_csv_text(std::string_view text, FileKind kind, std::string origin) {
    ParsedFile out;
    out.kind = kind;
    out.origin = origin;

    std::set<std::pair<int, int>> seen;  // (frame, id) for gt/result
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view line =
            text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (trim(line).empty()) continue;

        const auto fields = split(line, ',');
        const std::size_t expected_min = kind == FileKind::Result ? 7 : 9;
        if (fields.size() < expected_min || fields.size() > 9)
            throw InputError(origin + ":" + std::to_string(lineno) +
                             ": parse error: expected " +
                             (kind == FileKind::Result ? std::string("7 to 9")
                                                       : std::string("9")) +
                             " fields, got " + std::to_string(fields.size()));

        const long long frame = detail::parse_int_field(fields[0], origin, lineno, "frame");
        if (frame < 1)
            throw InputError(origin + ":" + std::to_string(lineno) +
                             ": validation error: frame number must be positive");
        const BoundingBox box = detail::parse_box(fields, origin, lineno);

        switch (kind) {
            case FileKind::GroundTruth: {
                const long long id = detail::parse_int_field(fields[1], origin, lineno, "id");
                if (id < 1)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: track id must be positive");
                const long long flag =
                    detail::parse_int_field(fields[6], origin, lineno, "active flag");
                if (flag != 0 && flag != 1)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: active flag must be 0 or 1");
                const long long cls_id =
                    detail::parse_int_field(fields[7], origin, lineno, "class");
                ObjectClass cls;
                try {
                    cls = object_class_from_id(static_cast<int>(cls_id));
                } catch (const InputError& e) {
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: " + e.what());
                }
                const double vis = detail::parse_field(fields[8], origin, lineno, "visibility");
                if (vis < 0.0 || vis > 1.0)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: visibility must lie in [0, 1]");
                if (!seen.emplace(static_cast<int>(frame), static_cast<int>(id)).second)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: duplicate (frame, id) = (" +
                                     std::to_string(frame) + ", " + std::to_string(id) + ")");
                out.gt.push_back({static_cast<int>(frame), static_cast<int>(id), box,
                                  static_cast<int>(flag), cls, vis});
                break;
            }
            case FileKind::Result: {
                const long long id = detail::parse_int_field(fields[1], origin, lineno, "id");
                if (id < 1)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: track id must be positive");
                const double conf = detail::parse_field(fields[6], origin, lineno, "confidence");
                if (!seen.emplace(static_cast<int>(frame), static_cast<int>(id)).second)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: duplicate (frame, id) = (" +
                                     std::to_string(frame) + ", " + std::to_string(id) + ")");
                out.results.push_back(
                    {static_cast<int>(frame), static_cast<int>(id), box, conf});
                break;
            }
            case FileKind::Detection: {
                const double id = detail::parse_field(fields[1], origin, lineno, "id");
                if (id != -1.0)
                    throw InputError(origin + ":" + std::to_string(lineno) +
                                     ": validation error: detection id field must be -1");
                const double conf = detail::parse_field(fields[6], origin, lineno, "confidence");
                // fields 8-9 are ignored for detections
                out.dets.push_back({static_cast<int>(frame), box, conf});
                break;
            }
        }
    }

    auto by_frame_id = [](const auto& a, const auto& b) {
        return std::pair(a.frame, a.track_id) < std::pair(b.frame, b.track_id);
    };
    std::sort(out.gt.begin(), out.gt.end(), by_frame_id);
    std::sort(out.results.begin(), out.results.end(), by_frame_id);
    std::stable_sort(out.dets.begin(), out.dets.end(),
                     [](const DetEntry& a, const DetEntry& b) { return a.frame < b.frame; });
    return out;
}

inline ParsedFile parse_csv(const std::filesystem::path& path, FileKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + std::string(file_kind_name(kind)) + " file: " +
                         path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_csv_text(text, kind, path.string());
}

// Minimal decimal rendering: integers without a decimal point, otherwise up
// to six fractional digits with trailing zeros stripped.
inline std::string format_number(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

// Serializes entries back to CSV. parse(write(x)) == x field-for-field for
// values within the six-fractional-digit budget.
inline std::string write_csv(const ParsedFile& file) {
    std::string out;
    auto box_fields = [](const BoundingBox& b) {
        return format_number(b.left) + "," + format_number(b.top) + "," +
               format_number(b.width) + "," + format_number(b.height);
    };
    switch (file.kind) {
        case FileKind::GroundTruth:
            for (const auto& e : file.gt) {
                out += std::to_string(e.frame) + "," + std::to_string(e.track_id) + "," +
                       box_fields(e.box) + "," + std::to_string(e.active_flag) + "," +
                       std::to_string(static_cast<int>(e.cls)) + "," +
                       format_number(e.visibility) + "\n";
            }
            break;
        case FileKind::Result:
            for (const auto& e : file.results) {
                out += std::to_string(e.frame) + "," + std::to_string(e.track_id) + "," +
                       box_fields(e.box) + "," + format_number(e.confidence) + ",-1,-1\n";
            }
            break;
        case FileKind::Detection:
            for (const auto& e : file.dets) {
                out += std::to_string(e.frame) + ",-1," + box_fields(e.box) + "," +
                       format_number(e.confidence) + ",-1,-1\n";
            }
            break;
    }
    return out;
}

inline void write_csv_file(const ParsedFile& file, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path.string());
    const std::string text = write_csv(file);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

// Sequence map: plain text, one sequence name per line. Blank lines and
// '#' comments are skipped, as is a leading "name" header line.
inline std::vector<std::string> load_seqmap(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sequence map: " + path.string());
    std::vector<std::string> names;
    std::set<std::string> unique;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string name{trim(line)};
        const bool header = first && name == "name";
        first = false;
        if (name.empty() || name[0] == '#' || header) continue;
        if (!unique.insert(name).second)
            throw InputError(path.string() + ": duplicate sequence name '" + name + "'");
        names.push_back(name);
    }
    if (names.empty()) throw InputError(path.string() + ": sequence map is empty");
    return names;
}

// Sequence metadata file, `key = value` per line:
//   name = MOT16-02
//   frames = 600
//   fps = 30
//   width = 1920
//   height = 1080
inline SequenceMeta load_seqinfo(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sequence metadata: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        kv[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
    }
    SequenceMeta meta;
    auto need = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw InputError(path.string() + ": missing key '" + std::string(key) + "'");
        return it->second;
    };
    meta.name = need("name");
    meta.frame_count = static_cast<int>(
        detail::parse_int_field(need("frames"), path.string(), 0, "frames"));
    meta.fps = detail::parse_field(need("fps"), path.string(), 0, "fps");
    meta.image_width = detail::parse_field(need("width"), path.string(), 0, "width");
    meta.image_height = detail::parse_field(need("height"), path.string(), 0, "height");
    if (meta.frame_count < 1 || !(meta.fps > 0.0) || !(meta.image_width > 0.0) ||
        !(meta.image_height > 0.0))
        throw InputError(path.string() + ": frames, fps, width and height must be positive");
    return meta;
}

inline void save_seqinfo(const SequenceMeta& meta, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sequence metadata: " + path.string());
    out << "name = " << meta.name << "\n"
        << "frames = " << meta.frame_count << "\n"
        << "fps = " << format_number(meta.fps) << "\n"
        << "width = " << format_number(meta.image_width) << "\n"
        << "height = " << format_number(meta.image_height) << "\n";
}

// Sequence directory layout helpers. Ground truth lives at
// <root>/<name>/gt/gt.txt (or <root>/<name>/gt.txt), detections at
// <root>/<name>/det/det.txt (or det.txt), metadata at
// <root>/<name>/seqinfo.txt, results at <res_root>/<name>.txt.
inline std::filesystem::path gt_file_path(const std::filesystem::path& root,
                                          const std::string& name) {
    const auto nested = root / name / "gt" / "gt.txt";
    if (std::filesystem::exists(nested)) return nested;
    const auto flat = root / name / "gt.txt";
    if (std::filesystem::exists(flat)) return flat;
    throw InputError("no ground truth found for sequence " + name + " under " + root.string());
}

inline std::filesystem::path det_file_path(const std::filesystem::path& root,
                                           const std::string& name) {
    const auto nested = root / name / "det" / "det.txt";
    if (std::filesystem::exists(nested)) return nested;
    const auto flat = root / name / "det.txt";
    if (std::filesystem::exists(flat)) return flat;
    throw InputError("no detection file found for sequence " + name + " under " + root.string());
}

inline std::filesystem::path seqinfo_path(const std::filesystem::path& root,
                                          const std::string& name) {
    return root / name / "seqinfo.txt";
}

inline std::filesystem::path result_file_path(const std::filesystem::path& res_root,
                                              const std::string& name) {
    return res_root / (name + ".txt");
}

struct SeqStats {
    long long tracks = 0;   // distinct pedestrian trajectories
    long long boxes = 0;    // pedestrian boxes
    double density = 0.0;   // boxes per frame
};

inline SeqStats sequence_stats(const ParsedFile& gt, const SequenceMeta& meta) {
    if (gt.kind != FileKind::GroundTruth)
        throw InputError("sequence_stats expects a ground-truth file");
    if (meta.frame_count < 1) throw InputError("sequence_stats needs a positive frame count");
    SeqStats s;
    std::set<int> ids;
    for (const auto& e : gt.gt) {
        if (!is_target_class(e.cls)) continue;
        ++s.boxes;
        ids.insert(e.track_id);
    }
    s.tracks = static_cast<long long>(ids.size());
    s.density = static_cast<double>(s.boxes) / meta.frame_count;
    return s;
}

struct Submission {
    std::map<std::string, ParsedFile> results;
    std::vector<std::string> warnings;
};

// Reads a ZIP submission: a flat archive with one "<Sequence-Name>.txt" per
// sequence in the map. Extra files are ignored with a warning; a missing
// sequence is an error naming it.
inline Submission ingest_submission(const std::filesystem::path& zip_path,
                                    const std::vector<std::string>& seqmap) {
    const std::vector<ZipEntry> entries = read_zip(zip_path);
    std::map<std::string, const ZipEntry*> by_name;
    for (const auto& e : entries) by_name[e.name] = &e;

    Submission sub;
    std::set<std::string> claimed;
    for (const auto& seq : seqmap) {
        const std::string want = seq + ".txt";
        const auto it = by_name.find(want);
        if (it == by_name.end())
            throw SubmissionError("missing result for " + seq + " in " + zip_path.string());
        claimed.insert(want);
        sub.results.emplace(
            seq, parse_csv_text(it->second->data, FileKind::Result,
                                zip_path.string() + "!" + want));
    }
    for (const auto& e : entries) {
        if (!claimed.count(e.name))
            sub.warnings.push_back("ignoring extra archive entry '" + e.name + "'");
    }
    return sub;
}

}  // namespace moteval
