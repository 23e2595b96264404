// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "moteval/assignment.hpp"
#include "oracles/exhaustive_assignment.hpp"

using namespace moteval;

namespace {

CostMatrix random_matrix(std::mt19937_64& rng, int max_dim, double forbidden_share) {
    const int rows = 1 + static_cast<int>(rng() % max_dim);
    const int cols = 1 + static_cast<int>(rng() % max_dim);
    CostMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u >= forbidden_share) m.at(r, c) = static_cast<double>(rng() % 21);
        }
    return m;
}

}  // namespace

TEST_CASE("diagonal dominance on a 2x2 matrix") {
    CostMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 0) = 2;
    m.at(1, 1) = 1;
    const Assignment a = solve_assignment(m);
    REQUIRE(a.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(a.total_cost == 2.0);
}

TEST_CASE("a fully forbidden matrix yields an empty matching") {
    CostMatrix m(1, 1);
    CHECK(solve_assignment(m).pairs.empty());
    CostMatrix m2(3, 4);
    CHECK(solve_assignment(m2).pairs.empty());
}

TEST_CASE("empty matrices yield empty matchings") {
    CHECK(solve_assignment(CostMatrix(0, 0)).pairs.empty());
    CHECK(solve_assignment(CostMatrix(0, 5)).pairs.empty());
    CHECK(solve_assignment(CostMatrix(5, 0)).pairs.empty());
}

TEST_CASE("cardinality beats cost") {
    // The cheapest single pair (0.1) must not displace the two-pair solution.
    CostMatrix m(2, 2);
    m.at(0, 0) = 0.1;
    m.at(0, 1) = 0.9;
    m.at(1, 0) = 0.2;
    const Assignment a = solve_assignment(m);
    REQUIRE(a.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
    CHECK(a.total_cost == Catch::Approx(1.1));
}

TEST_CASE("exact ties resolve to the lexicographically smallest pairing") {
    CostMatrix m(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.at(r, c) = 1.0;
    CHECK(solve_assignment(m).pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});

    CostMatrix m3(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m3.at(r, c) = 2.5;
    CHECK(solve_assignment(m3).pairs ==
          std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});
}

TEST_CASE("negative and NaN costs are rejected") {
    CostMatrix m(1, 1);
    m.at(0, 0) = -0.5;
    CHECK_THROWS_AS(solve_assignment(m), InputError);
    m.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_assignment(m), InputError);
}

TEST_CASE("two candidates for one column keep the cheaper one") {
    CostMatrix m(2, 1);
    m.at(0, 0) = 0.4;
    m.at(1, 0) = 0.3;
    const Assignment a = solve_assignment(m);
    REQUIRE(a.pairs == std::vector<std::pair<int, int>>{{1, 0}});
    // matches the exhaustive oracle on the same matrix
    const auto o = oracle::exhaustive_assignment(m);
    CHECK(o.pairs == a.pairs);
}

TEST_CASE("solver matches the exhaustive oracle on random matrices") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 300; ++i) {
        const CostMatrix m = random_matrix(rng, 7, 0.3);
        const Assignment got = solve_assignment(m);
        const oracle::OracleAssignment want = oracle::exhaustive_assignment(m);
        REQUIRE(got.cardinality() == want.cardinality);
        REQUIRE(got.total_cost == want.total_cost);
        REQUIRE(got.pairs == want.pairs);  // shared lexicographic tie rule
    }
}

TEST_CASE("uniform shift leaves a full square solution unchanged") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + static_cast<int>(rng() % 5);
        CostMatrix m(n, n), shifted(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
                m.at(r, c) = v;
                shifted.at(r, c) = v + 5.0;
            }
        CHECK(solve_assignment(m).pairs == solve_assignment(shifted).pairs);
    }
}

TEST_CASE("permuting rows permutes the solution") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + static_cast<int>(rng() % 5);
        CostMatrix m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                m.at(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
        std::vector<int> perm(n);
        for (int r = 0; r < n; ++r) perm[r] = r;
        std::shuffle(perm.begin(), perm.end(), rng);
        CostMatrix p(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) p.at(perm[r], c) = m.at(r, c);

        std::vector<std::pair<int, int>> expected;
        for (const auto& [r, c] : solve_assignment(m).pairs) expected.emplace_back(perm[r], c);
        std::sort(expected.begin(), expected.end());
        CHECK(solve_assignment(p).pairs == expected);
    }
}
