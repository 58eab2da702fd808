#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "stablepart/enumerate.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/solver.hpp"
#include "support/oracles.hpp"

namespace sp = stablepart;

TEST_CASE("solver handles the classic unsolvable instance") {
    const auto inst = sp::PreferenceInstance::parse_text("4\n2 3 4\n3 1 4\n1 2 4\n1 2 3\n");
    const auto result = sp::solve_stable_partition(inst);
    CHECK(result.partition == sp::CyclicPartition::from_cycles(4, {{0, 1, 2}, {3}}));
    CHECK_FALSE(result.solvable);
    CHECK(result.odd_party_count == 2);
    REQUIRE(result.odd_parties.size() == 2);
    CHECK(result.odd_parties[0] == std::vector<int>{0, 1, 2});
    CHECK(result.odd_parties[1] == std::vector<int>{3});
    CHECK_FALSE(sp::is_solvable(inst));

    const auto matching = sp::max_stable_matching(result);
    CHECK(matching.pair_count == 1);
    CHECK(matching.unmatched.size() == 2);
}

TEST_CASE("solver on n=2 pairs the two members") {
    const auto inst = sp::PreferenceInstance::parse_text("2\n2\n1\n");
    const auto result = sp::solve_stable_partition(inst);
    CHECK(result.solvable);
    CHECK(result.partition == sp::CyclicPartition::from_cycles(2, {{0, 1}}));
    CHECK(result.odd_parties.empty());
}

TEST_CASE("solver output is stable, reduced, and shares parties with enumeration") {
    for (int n = 3; n <= 7; ++n) {
        for (int rep = 0; rep < 60; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, 1000 * n + rep);
            const auto result = sp::solve_stable_partition(inst);
            REQUIRE(sp::is_stable(inst, result.partition).stable);
            REQUIRE(oracles::naive_is_stable(inst, result.partition));
            REQUIRE(result.partition.is_reduced());
            REQUIRE(result.partition.fixed_point_count() <= 1);
            REQUIRE(result.solvable == result.odd_parties.empty());
            REQUIRE(result.odd_parties == result.partition.odd_parties());

            // every stable partition of the instance carries the same odd parties
            for (const auto& other : sp::enumerate_stable_partitions(inst, true, 8))
                REQUIRE(other.odd_parties() == result.odd_parties);
        }
    }
}

TEST_CASE("solvability matches brute-force stable matching search") {
    for (int n : {4, 6}) {
        for (int rep = 0; rep < 120; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, 7000 * n + rep);
            const auto brute = oracles::perm_scan_stable_matchings(inst);
            CHECK(sp::is_solvable(inst) == !brute.empty());
        }
    }
}

TEST_CASE("max stable matching size and internal stability") {
    for (int n : {4, 5, 6, 7, 8}) {
        for (int rep = 0; rep < 60; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, 3000 * n + rep);
            const auto result = sp::solve_stable_partition(inst);
            const auto matching = sp::max_stable_matching(result);
            CHECK(matching.pair_count == (n - result.odd_party_count) / 2);
            CHECK(static_cast<int>(matching.unmatched.size()) == n - 2 * matching.pair_count);
            CHECK(oracles::internally_stable(inst, matching));
            for (int v = 0; v < n; ++v) {
                if (matching.mate[v] == -1) continue;
                CHECK(matching.mate[matching.mate[v]] == v);
            }
        }
    }
}

TEST_CASE("matching completion heuristic pairs everyone on even n") {
    for (int rep = 0; rep < 40; ++rep) {
        const auto inst = sp::PreferenceInstance::generate_uniform(8, 500 + rep);
        const auto completed = sp::complete_matching_heuristic(inst);
        CHECK(completed.is_matching());
        // blocking pairs listing works on the completed matching
        const auto blocks = sp::blocking_pairs(inst, completed);
        if (sp::is_solvable(inst) && sp::is_stable(inst, completed).stable)
            CHECK(blocks.empty());
    }
    const auto odd = sp::PreferenceInstance::generate_uniform(5, 1);
    CHECK_THROWS_AS(sp::complete_matching_heuristic(odd), std::invalid_argument);
}

TEST_CASE("solver statistics are populated") {
    const auto inst = sp::PreferenceInstance::generate_uniform(20, 77);
    const auto result = sp::solve_stable_partition(inst);
    CHECK(result.stats.proposals >= 20);
    CHECK(sp::is_stable(inst, result.partition).stable);
}

TEST_CASE("solver agrees with enumeration on solvability across many small instances") {
    int unsolvable_seen = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto inst = sp::PreferenceInstance::generate_uniform(6, 42000 + rep);
        const auto result = sp::solve_stable_partition(inst);
        const auto matchings = sp::enumerate_stable_matchings(inst, 8);
        CHECK(result.solvable == !matchings.empty());
        if (!result.solvable) ++unsolvable_seen;
        if (result.solvable) {
            // the reported maximum matching is perfect on solvable instances
            const auto matching = sp::max_stable_matching(result);
            CHECK(matching.pair_count == 3);
        }
    }
    CHECK(unsolvable_seen > 0);  // the sample is large enough to include both kinds
}
