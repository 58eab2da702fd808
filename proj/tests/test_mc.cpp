#include <cmath>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "stablepart/exact.hpp"
#include "stablepart/mc.hpp"
#include "support/oracles.hpp"

namespace sp = stablepart;

namespace {

double joint_se(const sp::EstimateResult& a, const sp::EstimateResult& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

}  // namespace

TEST_CASE("estimator is exact when the integrand is constant") {
    const auto est = sp::mc_stability_probability(sp::ShapeSpec::parse("2"), 2000, 1,
                                                  sp::Proposal::Uniform);
    CHECK(est.mean == 1.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("stability estimates agree with exact rationals") {
    const auto shape = sp::ShapeSpec::parse("2,2");
    const double exact = sp::exact_stability_probability(shape).to_double();
    const auto uniform =
        sp::mc_stability_probability(shape, 200000, 11, sp::Proposal::Uniform, 0.0, 4);
    const auto exponential =
        sp::mc_stability_probability(shape, 200000, 12, sp::Proposal::TruncExp, 0.0, 4);
    CHECK(std::abs(uniform.mean - exact) <= 3 * uniform.std_error);
    CHECK(std::abs(exponential.mean - exact) <= 3 * exponential.std_error);
    CHECK(std::abs(uniform.mean - exponential.mean) <= 3 * joint_se(uniform, exponential));

    const auto fp_shape = sp::ShapeSpec::parse("3+fp");
    const double fp_exact = sp::exact_stability_probability(fp_shape).to_double();
    const auto fp_est = sp::mc_stability_probability(fp_shape, 200000, 13);
    CHECK(std::abs(fp_est.mean - fp_exact) <= 3 * fp_est.std_error);
}

TEST_CASE("estimates are deterministic for any worker count") {
    const auto shape = sp::ShapeSpec::parse("2,2,2");
    const auto one = sp::mc_stability_probability(shape, 50000, 99, sp::Proposal::TruncExp, 0.0, 1);
    const auto three = sp::mc_stability_probability(shape, 50000, 99, sp::Proposal::TruncExp, 0.0, 3);
    const auto eight = sp::mc_stability_probability(shape, 50000, 99, sp::Proposal::TruncExp, 0.0, 8);
    CHECK(one.mean == three.mean);
    CHECK(one.std_error == three.std_error);
    CHECK(one.mean == eight.mean);
    const auto other = sp::mc_stability_probability(shape, 50000, 100);
    CHECK(one.mean != other.mean);
}

TEST_CASE("sample count validation") {
    CHECK_THROWS_AS(sp::mc_stability_probability(sp::ShapeSpec::parse("2,2"), 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(sp::parse_proposal("gaussian"), std::invalid_argument);
}

TEST_CASE("latent joint stability frequency matches exact probability") {
    const auto shape = sp::ShapeSpec::parse("2,2");
    const double exact = sp::exact_stability_probability(shape).to_double();
    const auto est =
        sp::mc_latent_joint_stability({shape.canonical_partition()}, 200000, 5, 4);
    CHECK(std::abs(est.mean - exact) <= 3 * est.std_error);
    CHECK(est.n_samples == 200000);
}

TEST_CASE("circuit structure of two distinct matchings") {
    const auto p1 = sp::CyclicPartition::from_cycles(4, {{0, 1}, {2, 3}});
    const auto p2 = sp::CyclicPartition::from_cycles(4, {{0, 3}, {1, 2}});
    const auto cs = sp::circuit_structure(p1, p2);
    CHECK(cs.common_pairs.empty());
    CHECK(cs.shared_odd_parties.empty());
    REQUIRE(cs.circuits.size() == 1);
    CHECK(cs.circuits[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("circuit structure with shared parties and common pairs") {
    const auto p1 =
        sp::CyclicPartition::from_cycles(9, {{0, 1, 2}, {3, 4}, {5, 6}, {7, 8}});
    const auto p2 =
        sp::CyclicPartition::from_cycles(9, {{0, 1, 2}, {3, 5}, {4, 6}, {7, 8}});
    const auto cs = sp::circuit_structure(p1, p2);
    REQUIRE(cs.shared_odd_parties.size() == 1);
    CHECK(cs.shared_odd_parties[0] == std::vector<int>{0, 1, 2});
    REQUIRE(cs.common_pairs.size() == 1);
    CHECK(cs.common_pairs[0] == std::pair<int, int>{7, 8});
    REQUIRE(cs.circuits.size() == 1);
    CHECK(cs.circuits[0] == std::vector<int>{3, 4, 6, 5});

    CHECK_THROWS_AS(sp::circuit_structure(p1, p1), std::invalid_argument);
}

TEST_CASE("pair estimator validation and the zero case") {
    const auto parties = sp::CyclicPartition::from_cycles(6, {{0, 1, 2}, {3, 4, 5}});
    const auto matching = sp::CyclicPartition::from_cycles(6, {{0, 1}, {2, 3}, {4, 5}});
    const auto zero = sp::mc_pair_probability(parties, matching, 10000, 3);
    CHECK(zero.mean == 0.0);
    CHECK(zero.std_error == 0.0);

    CHECK_THROWS_AS(sp::mc_pair_probability(matching, matching, 10000, 3), std::invalid_argument);
    const auto with_fp = sp::CyclicPartition::from_cycles(5, {{0, 1, 2, 3}, {4}});
    CHECK_THROWS_AS(sp::mc_pair_probability(with_fp, with_fp, 10000, 3), std::invalid_argument);
    const auto small = sp::CyclicPartition::from_cycles(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(sp::mc_pair_probability(small, matching, 10000, 3), std::invalid_argument);
}

TEST_CASE("pair estimator agrees with direct latent simulation") {
    const auto p1 = sp::CyclicPartition::from_cycles(4, {{0, 1}, {2, 3}});
    const auto p2 = sp::CyclicPartition::from_cycles(4, {{0, 3}, {1, 2}});
    const auto via_integrand = sp::mc_pair_probability(p1, p2, 400000, 21, sp::Proposal::TruncExp, 0.0, 4);
    const auto via_latent = sp::mc_latent_joint_stability({p1, p2}, 400000, 22, 4);
    CHECK(std::abs(via_integrand.mean - via_latent.mean) <= 3 * joint_se(via_integrand, via_latent));

    // both-stable probability cannot exceed either single probability
    const auto single = sp::mc_stability_probability(sp::ShapeSpec::parse("2,2"), 200000, 23);
    CHECK(via_integrand.mean <= single.mean + 3 * joint_se(via_integrand, single));

    const auto rerun = sp::mc_pair_probability(p1, p2, 400000, 21, sp::Proposal::TruncExp, 0.0, 1);
    CHECK(rerun.mean == via_integrand.mean);  // worker-count independence
}

TEST_CASE("rank generating function point estimates") {
    const auto shape = sp::ShapeSpec::parse("2,2");
    const auto poly = sp::exact_rank_gf(shape);
    const auto at_one = sp::mc_rank_gf_point(shape, 1.0, 200000, 31, 4);
    CHECK(std::abs(at_one.mean - poly.sum().to_double()) <= 3 * at_one.std_error);
    const auto at_half = sp::mc_rank_gf_point(shape, 0.5, 200000, 32, 4);
    CHECK(std::abs(at_half.mean - poly.eval_double(0.5)) <= 3 * at_half.std_error);
    CHECK(at_half.mean < at_one.mean);

    CHECK_THROWS_AS(sp::mc_rank_gf_point(shape, 0.0, 2000, 1), std::invalid_argument);
    CHECK_THROWS_AS(sp::mc_rank_gf_point(shape, 1.5, 2000, 1), std::invalid_argument);
}

TEST_CASE("bound harnesses see no violations") {
    const auto single = sp::bound_check_single(50, 20000, 7, 4);
    CHECK(single.n_checked == 20000);
    CHECK(single.violations == 0);
    CHECK(single.max_log_ratio <= 0.0);
    const auto rerun = sp::bound_check_single(50, 20000, 7, 1);
    CHECK(rerun.max_log_ratio == single.max_log_ratio);

    const auto pair = sp::bound_check_pair(30, 20000, 8, 4);
    CHECK(pair.n_checked == 20000);
    CHECK(pair.violations == 0);
    CHECK(pair.max_log_ratio <= 0.0);
    CHECK_THROWS_AS(sp::bound_check_pair(11, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(sp::bound_check_single(1, 100, 1), std::invalid_argument);
}

TEST_CASE("instance experiment on n=2 is fully determined") {
    sp::ExperimentOptions opt;
    opt.n = 2;
    opt.trials = 50;
    opt.seed = 5;
    opt.with_enumeration = true;
    const auto result = sp::instance_experiment(opt);
    REQUIRE(result.rows.size() == 50);
    for (const auto& row : result.rows) {
        CHECK(row.solvable);
        CHECK(row.m == 0);
        CHECK(row.odd_parties == 0);
        CHECK_FALSE(row.has_fixed_point);
        CHECK(row.rank_sum == 2);
        CHECK(row.r_max == 1);
        CHECK(row.max_matching_size == 1);
        CHECK(row.blocking_count == 0);
        CHECK(row.s_count == 1);
        CHECK(row.q_fraction == 0.0);
    }
    CHECK(result.summary["mean_solvable"] == 1.0);
    CHECK(result.summary["mean_s_count"] == 1.0);
}

TEST_CASE("instance experiment is worker-count independent") {
    sp::ExperimentOptions opt;
    opt.n = 7;
    opt.trials = 300;
    opt.seed = 17;
    opt.workers = 1;
    const auto serial = sp::instance_experiment(opt);
    opt.workers = 4;
    const auto parallel = sp::instance_experiment(opt);
    std::ostringstream a, b;
    sp::write_experiment_csv(serial, a);
    sp::write_experiment_csv(parallel, b);
    CHECK(a.str() == b.str());
    CHECK(serial.summary.dump() == parallel.summary.dump());
}

TEST_CASE("experiment csv header and blank columns") {
    sp::ExperimentOptions opt;
    opt.n = 5;  // odd: no completion heuristic, enumeration off by default
    opt.trials = 3;
    opt.seed = 2;
    const auto result = sp::instance_experiment(opt);
    std::ostringstream out;
    sp::write_experiment_csv(result, out);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "n,trial,m,odd_parties,has_fixed_point,solvable,rank_sum,rank_ratio,r_max,"
          "max_matching_size,blocking_count,s_count,q_fraction");
    std::string row;
    std::getline(lines, row);
    CHECK(row.substr(0, 4) == "5,0,");
    CHECK(row.substr(row.size() - 3) == ",,,");  // blocking, s_count, q_fraction blank
}

TEST_CASE("experiment mean count tracks the exact expectation at n=4") {
    sp::ExperimentOptions opt;
    opt.n = 4;
    opt.trials = 4000;
    opt.seed = 99;
    opt.with_enumeration = true;
    opt.workers = 4;
    const auto result = sp::instance_experiment(opt);
    const double exact = sp::exact_expected_partitions(4).to_double();
    const double mean = result.summary["mean_s_count"].get<double>();
    const double se = result.summary["s_count_std_error"].get<double>();
    CHECK(std::abs(mean - exact) <= 4 * se);
}

TEST_CASE("experiment validation") {
    sp::ExperimentOptions opt;
    opt.n = 12;
    opt.trials = 1;
    opt.with_enumeration = true;
    CHECK_THROWS_AS(sp::instance_experiment(opt), sp::CapExceeded);
    opt.n = 1;
    opt.with_enumeration = false;
    CHECK_THROWS_AS(sp::instance_experiment(opt), std::invalid_argument);
}

TEST_CASE("shortest round-trip float formatting") {
    CHECK(sp::double_str(0.5) == "0.5");
    CHECK(sp::double_str(1.0 / 3.0) == "0.3333333333333333");
    CHECK(sp::double_str(2.0) == "2");
    const double v = 0.7071067811865475;
    CHECK(std::stod(sp::double_str(v)) == v);
}
