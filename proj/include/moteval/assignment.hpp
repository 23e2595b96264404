// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Optimal bipartite assignment on rectangular cost matrices with forbidden
// cells. The objective is maximum cardinality over allowed cells first, and
// minimum total cost among those.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "moteval/core.hpp"

namespace moteval {

// Rectangular cost matrix; cells default to forbidden (infinity).
// Finite costs must be non-negative.
struct CostMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> cells;

    static double forbidden() { return std::numeric_limits<double>::infinity(); }

    CostMatrix(int r, int c)
        : rows(r), cols(c), cells(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), forbidden()) {
        if (r < 0 || c < 0) throw InputError("cost matrix dimensions must be non-negative");
    }

    double& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
};

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
    double total_cost = 0.0;

    int cardinality() const { return static_cast<int>(pairs.size()); }
};

namespace detail {

struct SquareSolution {
    std::vector<int> col_to_row;  // 1-indexed; 0 = unassigned
    std::vector<long double> u;   // row potentials, 1-indexed
    std::vector<long double> v;   // column potentials, 1-indexed
};

// Shortest-augmenting-path solver for a square matrix given as a flat
// row-major array (Jonker-Volgenant / Kuhn-Munkres family, O(n^3)).
inline SquareSolution solve_square(int n, const std::vector<long double>& cost) {
    const long double inf = std::numeric_limits<long double>::infinity();
    SquareSolution s;
    s.u.assign(n + 1, 0);
    s.v.assign(n + 1, 0);
    std::vector<long double> minv(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            long double delta = inf;
            const long double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const long double cur = row[j - 1] - s.u[i0] - s.v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    s.u[p[j]] += delta;
                    s.v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    s.col_to_row = std::move(p);
    return s;
}

}  // namespace detail

// Maximum-cardinality, then minimum-cost matching over the allowed cells.
// Forbidden cells never appear in the result.
//
// Deterministic tie handling: among optimal matchings the lexicographically
// smallest (row, col) pair sequence is returned. After the O(n^3) solve,
// optimal solutions are exactly the perfect matchings over cells with zero
// reduced cost (complementary slackness), so ties are canonicalized by
// greedy reroutes through that tight-edge graph.
inline Assignment solve_assignment(const CostMatrix& m) {
    Assignment out;
    if (m.rows == 0 || m.cols == 0) return out;

    double max_cost = -1.0;
    for (double c : m.cells) {
        if (std::isinf(c)) continue;
        if (!(c >= 0.0) || !std::isfinite(c))
            throw InputError("cost matrix cells must be non-negative or forbidden");
        max_cost = std::max(max_cost, c);
    }
    if (max_cost < 0.0) return out;  // everything forbidden

    const int n = std::max(m.rows, m.cols);
    // Any k-cell real matching beats any (k-1)-cell one once unmatched slots
    // cost more than the largest possible real total; forbidden cells and
    // padding share that price.
    const long double big =
        static_cast<long double>(std::min(m.rows, m.cols)) * static_cast<long double>(max_cost) + 1.0L;

    std::vector<long double> padded(static_cast<std::size_t>(n) * n, big);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            const double c = m.at(i, j);
            if (!std::isinf(c)) padded[static_cast<std::size_t>(i) * n + j] = c;
        }

    const detail::SquareSolution sol = detail::solve_square(n, padded);

    std::vector<int> row_match(n, -1), col_match(n, -1);
    for (int j = 1; j <= n; ++j) {
        const int i = sol.col_to_row[j];
        row_match[i - 1] = j - 1;
        col_match[j - 1] = i - 1;
    }

    // A cell can appear in some optimal matching iff its reduced cost is
    // zero; the tolerance absorbs the solver's accumulated rounding, far
    // below any genuine cost difference in the data.
    const long double tol = static_cast<long double>(n) * (big + 1.0L) * 1e-17L;
    auto tight = [&](int r, int c) {
        return fabsl(padded[static_cast<std::size_t>(r) * n + c] - sol.u[r + 1] - sol.v[c + 1]) <=
               tol;
    };

    std::vector<char> fixed(n, 0);
    std::vector<char> visited(n, 0);
    const std::function<bool(int)> augment = [&](int x) -> bool {
        for (int j = 0; j < n; ++j) {
            if (visited[j] || !tight(x, j)) continue;
            visited[j] = 1;
            if (col_match[j] == -1 || (!fixed[col_match[j]] && augment(col_match[j]))) {
                row_match[x] = j;
                col_match[j] = x;
                return true;
            }
        }
        return false;
    };

    for (int r = 0; r < m.rows; ++r) {
        fixed[r] = 1;  // the reroute search must not displace this row
        const int cur = row_match[r];
        const bool cur_real = cur < m.cols && !std::isinf(m.at(r, cur));
        const int limit = cur_real ? cur : m.cols;
        for (int c = 0; c < limit; ++c) {
            if (std::isinf(m.at(r, c)) || !tight(r, c)) continue;
            const int displaced = col_match[c];
            if (displaced == r || fixed[displaced]) continue;
            // move r to c, then try to re-seat the displaced row over tight
            // edges; the freed column is the only open slot
            row_match[r] = c;
            col_match[c] = r;
            col_match[cur] = -1;
            row_match[displaced] = -1;
            std::fill(visited.begin(), visited.end(), 0);
            if (augment(displaced)) break;
            row_match[r] = cur;
            col_match[cur] = r;
            col_match[c] = displaced;
            row_match[displaced] = c;
        }
    }

    for (int r = 0; r < m.rows; ++r) {
        const int c = row_match[r];
        if (c < 0 || c >= m.cols || std::isinf(m.at(r, c))) continue;
        out.pairs.emplace_back(r, c);
    }
    for (const auto& [r, c] : out.pairs) out.total_cost += m.at(r, c);
    return out;
}

}  // namespace moteval
