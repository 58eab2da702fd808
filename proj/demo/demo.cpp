// Tour of the library: solve the classic unsolvable instance, inspect a
// random instance end to end, and cross-check one exact value by simulation.
#include <iostream>

#include "stablepart/enumerate.hpp"
#include "stablepart/exact.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/mc.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/solver.hpp"

namespace sp = stablepart;

int main() {
    // Three members who rank each other cyclically and a fourth everyone
    // ranks last: no stable matching exists.
    const sp::PreferenceInstance classic = sp::PreferenceInstance::parse_text(
        "4\n"
        "2 3 4\n"
        "3 1 4\n"
        "1 2 4\n"
        "1 2 3\n");
    const sp::SolveResult classic_solved = sp::solve_stable_partition(classic);
    std::cout << "classic instance: partition " << classic_solved.partition.str()
              << ", solvable: " << (classic_solved.solvable ? "yes" : "no") << "\n";
    for (const auto& party : classic_solved.odd_parties) {
        std::cout << "  odd party:";
        for (int v : party) std::cout << " " << v + 1;
        std::cout << "\n";
    }

    const sp::PreferenceInstance inst = sp::PreferenceInstance::generate_uniform(8, 7);
    const sp::SolveResult solved = sp::solve_stable_partition(inst);
    std::cout << "\nrandom n=8 instance (seed 7): partition " << solved.partition.str() << "\n";
    const sp::PartialMatching matching = sp::max_stable_matching(solved);
    std::cout << "  max stable matching pairs: " << matching.pair_count << "\n";
    const auto all = sp::enumerate_stable_partitions(inst, true);
    std::cout << "  stable partitions (enumerated): " << all.size() << "\n";
    for (const auto& pi : all) std::cout << "    " << pi.str() << "\n";

    const auto shape = sp::ShapeSpec::parse("2,2");
    const sp::BigRational exact = sp::exact_stability_probability(shape);
    const sp::EstimateResult est = sp::mc_stability_probability(shape, 200000, 42);
    std::cout << "\nP(two fixed pairs stable at n=4) = " << exact.str() << " = "
              << exact.to_double() << "\n";
    std::cout << "Monte Carlo cross-check: " << est.mean << " +- " << est.std_error << "\n";
    return 0;
}
