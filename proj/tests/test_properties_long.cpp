// Bulk randomized checks. These take noticeably longer than the unit tests,
// so they live in their own binary.
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "stablepart/enumerate.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/solver.hpp"
#include "support/oracles.hpp"

namespace sp = stablepart;

TEST_CASE("solver output is stable and reduced across sizes") {
    struct Batch {
        int n;
        int reps;
    };
    const std::vector<Batch> plan = {{3, 4000}, {4, 4000}, {7, 3000},  {10, 3000},
                                     {15, 2000}, {24, 1500}, {40, 800}, {60, 400},
                                     {100, 120}, {200, 40}};
    for (const auto& batch : plan) {
        for (int rep = 0; rep < batch.reps; ++rep) {
            const auto inst =
                sp::PreferenceInstance::generate_uniform(batch.n, sp::derive_seed(424200 + batch.n, rep));
            const auto result = sp::solve_stable_partition(inst);
            const auto verdict = sp::is_stable(inst, result.partition);
            REQUIRE(verdict.stable);
            REQUIRE(result.partition.is_reduced());
            REQUIRE(result.partition.fixed_point_count() <= 1);
            REQUIRE(result.solvable == result.odd_parties.empty());
            if (batch.n <= 10) {
                REQUIRE(oracles::naive_is_stable(inst, result.partition));
            }
        }
    }
}

TEST_CASE("odd parties are an instance invariant") {
    for (int n = 4; n <= 8; n += 2) {
        for (int rep = 0; rep < 400; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, sp::derive_seed(171700 + n, rep));
            const auto solved = sp::solve_stable_partition(inst);
            std::set<std::vector<std::vector<int>>> party_sets;
            for (const auto& pi : sp::enumerate_stable_partitions(inst)) {
                party_sets.insert(pi.odd_parties());
                for (bool orientation : {false, true}) {
                    const auto matching = sp::reduce(pi, orientation);
                    REQUIRE(sp::is_stable(inst, matching).stable);
                }
            }
            REQUIRE(party_sets.size() == 1);
            REQUIRE(*party_sets.begin() == solved.partition.odd_parties());
        }
    }
}

TEST_CASE("solvability, odd parties and matchings line up") {
    for (int n : {4, 6, 8}) {
        int solvable_seen = 0;
        for (int rep = 0; rep < 500; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, sp::derive_seed(888800 + n, rep));
            const auto solved = sp::solve_stable_partition(inst);
            const auto matchings = sp::enumerate_stable_matchings(inst);
            REQUIRE(solved.solvable == !matchings.empty());
            REQUIRE(solved.solvable == (solved.odd_party_count == 0));
            solvable_seen += solved.solvable ? 1 : 0;

            const auto matching = sp::max_stable_matching(solved);
            REQUIRE(2 * matching.pair_count == n - solved.odd_party_count);
            REQUIRE(oracles::internally_stable(inst, matching));
        }
        REQUIRE(solvable_seen > 0);
        REQUIRE(solvable_seen < 500);
    }
}

TEST_CASE("partial matchings from odd instances stay internally stable") {
    for (int n : {5, 7, 9}) {
        for (int rep = 0; rep < 600; ++rep) {
            const auto inst = sp::PreferenceInstance::generate_uniform(n, sp::derive_seed(414100 + n, rep));
            const auto solved = sp::solve_stable_partition(inst);
            const auto matching = sp::max_stable_matching(solved);
            REQUIRE(2 * matching.pair_count == n - solved.odd_party_count);
            REQUIRE(oracles::internally_stable(inst, matching));
        }
    }
}
