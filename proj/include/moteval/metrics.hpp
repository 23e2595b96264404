// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Aggregate measures computed from event logs: MOTA, MOTP, false alarms per
// frame, recall/precision, MT/PT/ML trajectory categories, fragmentations,
// identity switches and their recall-relative variants, benchmark-level
// concatenation and the average-rank tracker ranking.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "moteval/core.hpp"
#include "moteval/matching.hpp"
#include "moteval/util.hpp"

namespace moteval {

struct MetricsReport {
    // raw counts
    long long fp = 0;
    long long fn = 0;
    long long idsw = 0;
    long long fm = 0;
    long long tp = 0;        // matched target boxes
    long long gt_total = 0;  // tp + fn
    long long frames = 0;
    long long mt = 0, pt = 0, ml = 0, tracks = 0;
    double overlap_sum = 0.0;

    // derived figures (percentages where conventional)
    double mota = 0.0;       // in (-inf, 100]
    double motp = 0.0;       // mean matched overlap as a percentage
    double faf = 0.0;        // false alarms per frame (a.k.a. FAR)
    double recall = 0.0;
    double precision = 0.0;
    double mt_ratio = 0.0, pt_ratio = 0.0, ml_ratio = 0.0;
    double rel_idsw = 0.0;   // IDSW / recall(%)
    double rel_fm = 0.0;     // FM / recall(%)

    // degenerate-input flags: the corresponding values read 0 when unset
    bool motp_defined = false;
    bool precision_defined = false;
    bool rel_defined = false;
};

namespace detail {

inline void derive_metrics(MetricsReport& r) {
    if (r.gt_total <= 0)
        throw MetricsUndefinedError("metrics undefined: no active ground-truth boxes");
    r.mota = 100.0 * (1.0 - static_cast<double>(r.fn + r.fp + r.idsw) /
                                static_cast<double>(r.gt_total));
    r.motp_defined = r.tp > 0;
    r.motp = r.motp_defined ? 100.0 * r.overlap_sum / static_cast<double>(r.tp) : 0.0;
    r.faf = r.frames > 0 ? static_cast<double>(r.fp) / static_cast<double>(r.frames) : 0.0;
    r.recall = 100.0 * static_cast<double>(r.tp) / static_cast<double>(r.gt_total);
    r.precision_defined = r.tp + r.fp > 0;
    r.precision = r.precision_defined
                      ? 100.0 * static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp)
                      : 0.0;
    if (r.tracks > 0) {
        r.mt_ratio = 100.0 * static_cast<double>(r.mt) / static_cast<double>(r.tracks);
        r.pt_ratio = 100.0 * static_cast<double>(r.pt) / static_cast<double>(r.tracks);
        r.ml_ratio = 100.0 * static_cast<double>(r.ml) / static_cast<double>(r.tracks);
    }
    // Relative figures divide by recall expressed in percent; undefined (and
    // reported as 0) when nothing was recovered.
    r.rel_defined = r.recall > 0.0;
    r.rel_idsw = r.rel_defined ? static_cast<double>(r.idsw) / r.recall : 0.0;
    r.rel_fm = r.rel_defined ? static_cast<double>(r.fm) / r.recall : 0.0;
}

// Maximal runs of tracked frames within the trajectory's lifespan order.
inline long long tracked_segments(const TrackLife& t) {
    long long segments = 0;
    bool in_run = false;
    std::size_t k = 0;
    for (const int frame : t.lifespan) {
        const bool is_tracked = k < t.tracked.size() && t.tracked[k] == frame;
        if (is_tracked) ++k;
        if (is_tracked && !in_run) ++segments;
        in_run = is_tracked;
    }
    return segments;
}

}  // namespace detail

// Trajectory status: mostly tracked at >= 80% of its lifespan, mostly lost
// below 20%, partially tracked otherwise (exactly 20% is PT). Comparisons
// are integer-exact.
enum class TrackStatus { MostlyTracked, PartiallyTracked, MostlyLost };

inline TrackStatus track_status(const TrackLife& t) {
    const long long life = static_cast<long long>(t.lifespan.size());
    const long long got = static_cast<long long>(t.tracked.size());
    if (got * 5 >= life * 4) return TrackStatus::MostlyTracked;
    if (got * 5 < life) return TrackStatus::MostlyLost;
    return TrackStatus::PartiallyTracked;
}

inline MetricsReport compute_metrics(const EventLog& log) {
    MetricsReport r;
    r.frames = log.frame_count;
    r.fp = log.total_fp();
    r.fn = log.total_fn();
    r.idsw = log.total_idsw();
    r.tp = log.total_matches();
    r.gt_total = log.total_gt();
    r.overlap_sum = log.overlap_sum();
    for (const auto& t : log.tracks) {
        if (t.lifespan.empty()) continue;
        ++r.tracks;
        switch (track_status(t)) {
            case TrackStatus::MostlyTracked: ++r.mt; break;
            case TrackStatus::PartiallyTracked: ++r.pt; break;
            case TrackStatus::MostlyLost: ++r.ml; break;
        }
        r.fm += std::max<long long>(0, detail::tracked_segments(t) - 1);
    }
    detail::derive_metrics(r);
    return r;
}

struct BenchmarkReport {
    std::vector<std::pair<std::string, MetricsReport>> per_sequence;
    MetricsReport overall;       // computed from summed counts, not averages
    double mota_stddev = 0.0;    // population std-dev of per-sequence MOTA
};

inline BenchmarkReport accumulate(const std::vector<EventLog>& logs) {
    if (logs.empty()) throw InputError("accumulate needs at least one sequence");
    BenchmarkReport b;
    MetricsReport& o = b.overall;
    for (const auto& log : logs) {
        MetricsReport r = compute_metrics(log);
        o.fp += r.fp;
        o.fn += r.fn;
        o.idsw += r.idsw;
        o.fm += r.fm;
        o.tp += r.tp;
        o.gt_total += r.gt_total;
        o.frames += r.frames;
        o.mt += r.mt;
        o.pt += r.pt;
        o.ml += r.ml;
        o.tracks += r.tracks;
        o.overlap_sum += r.overlap_sum;
        b.per_sequence.emplace_back(log.sequence, std::move(r));
    }
    detail::derive_metrics(o);

    double mean = 0.0;
    for (const auto& [name, r] : b.per_sequence) mean += r.mota;
    mean /= static_cast<double>(b.per_sequence.size());
    double var = 0.0;
    for (const auto& [name, r] : b.per_sequence) var += (r.mota - mean) * (r.mota - mean);
    b.mota_stddev = std::sqrt(var / static_cast<double>(b.per_sequence.size()));
    return b;
}

// ---------------------------------------------------------------------------
// Tracker ranking: rank per metric (1 = best, ties share the mean of the
// tied ranks), then average across all metrics.

struct RankedTracker {
    std::string name;
    double avg_rank = 0.0;
};

namespace detail {

struct MetricColumn {
    const char* name;
    bool higher_better;
    double (*get)(const MetricsReport&);
};

inline const std::vector<MetricColumn>& ranking_columns() {
    static const std::vector<MetricColumn> cols = {
        {"MOTA", true, [](const MetricsReport& r) { return r.mota; }},
        {"MOTP", true, [](const MetricsReport& r) { return r.motp; }},
        {"FAR", false, [](const MetricsReport& r) { return r.faf; }},
        {"MT", true, [](const MetricsReport& r) { return r.mt_ratio; }},
        {"ML", false, [](const MetricsReport& r) { return r.ml_ratio; }},
        {"FP", false, [](const MetricsReport& r) { return static_cast<double>(r.fp); }},
        {"FN", false, [](const MetricsReport& r) { return static_cast<double>(r.fn); }},
        {"IDsw", false, [](const MetricsReport& r) { return static_cast<double>(r.idsw); }},
        {"rel.ID", false, [](const MetricsReport& r) { return r.rel_idsw; }},
        {"FM", false, [](const MetricsReport& r) { return static_cast<double>(r.fm); }},
        {"rel.FM", false, [](const MetricsReport& r) { return r.rel_fm; }},
    };
    return cols;
}

// Ranks with ties sharing the mean of the tied positions.
inline std::vector<double> tied_ranks(const std::vector<double>& values, bool higher_better) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_better ? values[a] > values[b] : values[a] < values[b];
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

inline std::vector<RankedTracker> rank_trackers(
    const std::vector<std::pair<std::string, MetricsReport>>& table) {
    if (table.empty()) throw InputError("rank_trackers needs at least one tracker");
    const auto& cols = detail::ranking_columns();
    std::vector<double> sums(table.size(), 0.0);
    for (const auto& col : cols) {
        std::vector<double> values;
        values.reserve(table.size());
        for (const auto& [name, r] : table) values.push_back(col.get(r));
        const std::vector<double> ranks = detail::tied_ranks(values, col.higher_better);
        for (std::size_t i = 0; i < ranks.size(); ++i) sums[i] += ranks[i];
    }
    std::vector<RankedTracker> out;
    out.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        out.push_back({table[i].first, sums[i] / static_cast<double>(cols.size())});
    std::sort(out.begin(), out.end(), [](const RankedTracker& a, const RankedTracker& b) {
        return a.avg_rank != b.avg_rank ? a.avg_rank < b.avg_rank : a.name < b.name;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Report emission. The machine-readable CSV follows the benchmark's column
// order: MOTA, MOTP, FAR, MT, ML, FP, FN, IDsw, rel.ID, FM, rel.FM.

namespace detail {

inline std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

inline std::string csv_row(const std::string& name, const MetricsReport& r, double mota_std) {
    std::string row = name;
    row += "," + fmt_fixed(r.mota, 6);
    row += "," + fmt_fixed(r.motp, 6);
    row += "," + fmt_fixed(r.faf, 6);
    row += "," + fmt_fixed(r.mt_ratio, 6);
    row += "," + fmt_fixed(r.ml_ratio, 6);
    row += "," + std::to_string(r.fp);
    row += "," + std::to_string(r.fn);
    row += "," + std::to_string(r.idsw);
    row += "," + fmt_fixed(r.rel_idsw, 6);
    row += "," + std::to_string(r.fm);
    row += "," + fmt_fixed(r.rel_fm, 6);
    row += "," + fmt_fixed(mota_std, 6);
    return row;
}

}  // namespace detail

inline std::string format_benchmark_csv(const BenchmarkReport& b) {
    std::string out = "sequence,MOTA,MOTP,FAR,MT,ML,FP,FN,IDsw,rel.ID,FM,rel.FM,MOTA_std\n";
    for (const auto& [name, r] : b.per_sequence) out += detail::csv_row(name, r, 0.0) + "\n";
    out += detail::csv_row("OVERALL", b.overall, b.mota_stddev) + "\n";
    return out;
}

inline std::string format_benchmark_text(const BenchmarkReport& b) {
    static const char* head[] = {"Sequence", "MOTA", "MOTP", "FAR",  "MT%", "ML%",    "FP",
                                 "FN",       "IDsw", "rel.ID", "FM", "rel.FM", "Rcll", "Prcn"};
    std::vector<std::vector<std::string>> rows;
    auto render = [](const std::string& name, const MetricsReport& r, double std_dev,
                     bool with_std) {
        std::vector<std::string> row;
        row.push_back(name);
        std::string mota = detail::fmt_fixed(r.mota, 1);
        if (with_std) mota += " +/-" + detail::fmt_fixed(std_dev, 1);
        row.push_back(mota);
        row.push_back(detail::fmt_fixed(r.motp, 1));
        row.push_back(detail::fmt_fixed(r.faf, 2));
        row.push_back(detail::fmt_fixed(r.mt_ratio, 1));
        row.push_back(detail::fmt_fixed(r.ml_ratio, 1));
        row.push_back(std::to_string(r.fp));
        row.push_back(std::to_string(r.fn));
        row.push_back(std::to_string(r.idsw));
        row.push_back(detail::fmt_fixed(r.rel_idsw, 1));
        row.push_back(std::to_string(r.fm));
        row.push_back(detail::fmt_fixed(r.rel_fm, 1));
        row.push_back(detail::fmt_fixed(r.recall, 1));
        row.push_back(detail::fmt_fixed(r.precision, 1));
        return row;
    };
    for (const auto& [name, r] : b.per_sequence) rows.push_back(render(name, r, 0.0, false));
    rows.push_back(render("OVERALL", b.overall, b.mota_stddev, b.per_sequence.size() > 1));

    const std::size_t ncol = std::size(head);
    std::vector<std::size_t> width(ncol);
    for (std::size_t c = 0; c < ncol; ++c) width[c] = std::string(head[c]).size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < ncol; ++c) width[c] = std::max(width[c], row[c].size());

    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < ncol; ++c) {
            const std::string& cell = row[c];
            if (c == 0) {
                out += cell + std::string(width[c] - cell.size(), ' ');
            } else {
                out += "  " + std::string(width[c] - cell.size(), ' ') + cell;
            }
        }
        out += "\n";
    };
    std::vector<std::string> header(head, head + ncol);
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

// Reads a report CSV produced by format_benchmark_csv and returns the named
// rows (sequence rows plus OVERALL).
inline std::vector<std::pair<std::string, MetricsReport>> parse_benchmark_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open report: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw InputError(path.string() + ": empty report");
    const auto header = split(trim(line), ',');
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[std::string(trim(header[i]))] = i;
    for (const char* need :
         {"sequence", "MOTA", "MOTP", "FAR", "MT", "ML", "FP", "FN", "IDsw", "rel.ID", "FM",
          "rel.FM"})
        if (!col.count(need))
            throw InputError(path.string() + ": report is missing column '" +
                             std::string(need) + "'");

    std::vector<std::pair<std::string, MetricsReport>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() < header.size())
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": truncated report row");
        auto num = [&](const char* name) {
            return detail::parse_field(f[col.at(name)], path.string(), lineno, name);
        };
        MetricsReport r;
        r.mota = num("MOTA");
        r.motp = num("MOTP");
        r.faf = num("FAR");
        r.mt_ratio = num("MT");
        r.ml_ratio = num("ML");
        r.fp = static_cast<long long>(num("FP"));
        r.fn = static_cast<long long>(num("FN"));
        r.idsw = static_cast<long long>(num("IDsw"));
        r.rel_idsw = num("rel.ID");
        r.fm = static_cast<long long>(num("FM"));
        r.rel_fm = num("rel.FM");
        rows.emplace_back(std::string(trim(f[col.at("sequence")])), r);
    }
    if (rows.empty()) throw InputError(path.string() + ": report has no rows");
    return rows;
}

}  // namespace moteval
