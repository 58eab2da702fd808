#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stablepart/enumerate.hpp"
#include "stablepart/exact.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/rng.hpp"
#include "stablepart/solver.hpp"
#include "stablepart/util.hpp"

namespace stablepart {

struct EstimateResult {
    std::string label;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;

    Json to_json() const {
        return Json{{"label", label},
                    {"mean", mean},
                    {"std_error", std_error},
                    {"n_samples", n_samples},
                    {"seed", seed}};
    }
};

enum class Proposal { Uniform, TruncExp };

inline Proposal parse_proposal(std::string_view name) {
    if (name == "uniform") return Proposal::Uniform;
    if (name == "truncexp") return Proposal::TruncExp;
    throw std::invalid_argument("proposal must be 'uniform' or 'truncexp'");
}

namespace detail {

// Running product with a wide binary exponent so that long products of
// factors in (0, 1] or large weights never hit double limits.
struct ScaledProduct {
    double mant = 1.0;
    int blocks = 0;  // value = mant * 2^(512 * blocks)

    void mul(double f) {
        mant *= f;
        if (mant == 0.0) return;
        const double a = std::abs(mant);
        if (a < 0x1p-512) {
            mant *= 0x1p512;
            --blocks;
        } else if (a > 0x1p512) {
            mant *= 0x1p-512;
            ++blocks;
        }
    }

    double value() const {
        if (blocks == 0) return mant;
        return mant * std::pow(0x1p512, static_cast<double>(blocks));
    }

    double log_abs() const {
        if (mant == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mant)) + 512.0 * std::log(2.0) * static_cast<double>(blocks);
    }
};

struct CoordinateProposal {
    Proposal kind = Proposal::TruncExp;
    double beta = 1.0;
    double c = 0.0;  // 1 - exp(-beta)

    CoordinateProposal(Proposal kind_, double beta_) : kind(kind_), beta(beta_) {
        c = -std::expm1(-beta);
    }

    // Draws one coordinate and multiplies its importance weight into `prod`.
    double draw(SplitRng& rng, ScaledProduct& prod) const {
        const double u = rng.uniform01();
        if (kind == Proposal::Uniform) return u;
        const double x = -std::log1p(-u * c) / beta;
        prod.mul(c / (beta * (1.0 - u * c)));
        return x;
    }
};

}  // namespace detail

// Estimates the probability that one fixed partition of the given shape is
// stable under a uniform instance, by importance sampling of the latent
// scores conditioned on the predecessor scores.
inline EstimateResult mc_stability_probability(const ShapeSpec& shape, std::uint64_t n_samples,
                                               std::uint64_t seed,
                                               Proposal proposal = Proposal::TruncExp,
                                               double beta = 0.0, int workers = 1) {
    if (n_samples < 1000) throw std::invalid_argument("mc: need at least 1000 samples");
    const CyclicPartition pi = shape.canonical_partition();
    if (!pi.is_reduced()) throw std::invalid_argument("mc: shape must be reduced");
    const int n = pi.n;
    const int fp = pi.fixed_point();
    const int m = pi.odd_member_count();
    if (beta <= 0.0) beta = std::sqrt(static_cast<double>(n + m));
    const detail::CoordinateProposal prop(proposal, beta);

    std::vector<int> members;
    std::vector<char> odd_flag;
    for (int i = 0; i < n; ++i) {
        if (i == fp) continue;
        members.push_back(i);
        odd_flag.push_back(pi.succ(i) != pi.pred(i) ? 1 : 0);
    }
    std::vector<std::array<int, 2>> edges;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            if (!pi.adjacent(members[a], members[b]))
                edges.push_back({static_cast<int>(a), static_cast<int>(b)});

    std::vector<double> terms(n_samples);
    parallel_for_index(n_samples, workers, [&](std::uint64_t idx) {
        SplitRng rng(seed, idx);
        detail::ScaledProduct prod;
        std::vector<double> x(members.size());
        for (std::size_t v = 0; v < members.size(); ++v) {
            x[v] = prop.draw(rng, prod);
            if (odd_flag[v]) prod.mul(x[v]);
            if (fp != -1) prod.mul(1.0 - x[v]);
        }
        for (const auto& e : edges) prod.mul(1.0 - x[e[0]] * x[e[1]]);
        terms[idx] = prod.value();
    });
    const MeanStdErr ms = mean_std_error(terms);
    return EstimateResult{"p_stable[" + shape.str() + "]", ms.mean, ms.std_error, n_samples, seed};
}

// Decomposition of two distinct reduced fixed-point-free partitions sharing
// their odd parties: pairs common to both, and the alternating circuits of
// the symmetric difference. Each circuit starts at its minimum member and
// steps first along the first partition.
struct CircuitStructure {
    std::vector<std::pair<int, int>> common_pairs;
    std::vector<std::vector<int>> circuits;
    std::vector<std::vector<int>> shared_odd_parties;
};

inline CircuitStructure circuit_structure(const CyclicPartition& p1, const CyclicPartition& p2) {
    if (p1.n != p2.n) throw std::invalid_argument("circuit structure: sizes differ");
    if (!p1.is_reduced() || !p2.is_reduced())
        throw std::invalid_argument("circuit structure: partitions must be reduced");
    if (p1.fixed_point_count() != 0 || p2.fixed_point_count() != 0)
        throw std::invalid_argument("circuit structure: partitions must be fixed-point-free");
    if (p1 == p2) throw std::invalid_argument("circuit structure: partitions must differ");
    if (p1.odd_parties() != p2.odd_parties())
        throw std::invalid_argument("circuit structure: odd parties differ");
    CircuitStructure out;
    out.shared_odd_parties = p1.odd_parties();
    std::vector<char> used(static_cast<std::size_t>(p1.n), 0);
    for (const auto& party : out.shared_odd_parties)
        for (int v : party) used[v] = 1;
    for (int v = 0; v < p1.n; ++v) {
        if (used[v]) continue;
        if (p1.succ(v) == p2.succ(v)) {
            used[v] = 1;
            used[p1.succ(v)] = 1;
            out.common_pairs.emplace_back(v, p1.succ(v));
            continue;
        }
        std::vector<int> circuit;
        int cur = v;
        bool along_first = true;
        do {
            used[cur] = 1;
            circuit.push_back(cur);
            cur = along_first ? p1.succ(cur) : p2.succ(cur);
            along_first = !along_first;
        } while (cur != v);
        if (circuit.size() % 2 != 0 || circuit.size() < 4)
            throw std::logic_error("circuit structure: malformed alternating circuit");
        out.circuits.push_back(std::move(circuit));
    }
    return out;
}

// Estimates the probability that two fixed partitions are both stable under
// one uniform instance. Distinct odd parties force probability zero, which
// is returned without sampling.
inline EstimateResult mc_pair_probability(const CyclicPartition& p1, const CyclicPartition& p2,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          Proposal proposal = Proposal::TruncExp, double beta = 0.0,
                                          int workers = 1) {
    if (n_samples < 1000) throw std::invalid_argument("mc: need at least 1000 samples");
    if (p1.n != p2.n) throw std::invalid_argument("mc pair: sizes differ");
    if (!p1.is_reduced() || !p2.is_reduced())
        throw std::invalid_argument("mc pair: partitions must be reduced");
    if (p1.fixed_point_count() != 0 || p2.fixed_point_count() != 0)
        throw std::invalid_argument("mc pair: partitions must be fixed-point-free");
    if (p1 == p2) throw std::invalid_argument("mc pair: partitions must differ");
    const std::string label = "p_pair[" + p1.str() + ";" + p2.str() + "]";
    if (p1.odd_parties() != p2.odd_parties())
        return EstimateResult{label, 0.0, 0.0, n_samples, seed};

    const CircuitStructure cs = circuit_structure(p1, p2);
    const int n = p1.n;
    const int m = p1.odd_member_count();
    if (beta <= 0.0) beta = std::sqrt(static_cast<double>(n + m));
    const detail::CoordinateProposal prop(proposal, beta);

    // Cone roles under one fixed orientation: members at odd circuit
    // positions take y above x, even positions below; the 2^mu orientation
    // choices contribute equally.
    std::vector<char> role(static_cast<std::size_t>(n), 0);
    for (const auto& circuit : cs.circuits)
        for (std::size_t k = 0; k < circuit.size(); ++k) role[circuit[k]] = k % 2 == 1 ? 1 : 2;
    std::vector<char> odd_flag(static_cast<std::size_t>(n), 0);
    for (const auto& party : cs.shared_odd_parties)
        for (int v : party) odd_flag[v] = 1;
    std::vector<std::array<int, 2>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!p1.adjacent(i, j) && !p2.adjacent(i, j)) edges.push_back({i, j});
    const double scale = std::pow(2.0, static_cast<double>(cs.circuits.size()));

    std::vector<double> terms(n_samples);
    parallel_for_index(n_samples, workers, [&](std::uint64_t idx) {
        SplitRng rng(seed, idx);
        detail::ScaledProduct prod;
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            x[i] = prop.draw(rng, prod);
            if (odd_flag[i]) prod.mul(x[i]);
        }
        for (int i = 0; i < n; ++i) {
            if (role[i] == 0) {
                y[i] = x[i];
            } else if (role[i] == 1) {
                y[i] = x[i] + rng.uniform01() * (1.0 - x[i]);
                prod.mul(1.0 - x[i]);
            } else {
                y[i] = rng.uniform01() * x[i];
                prod.mul(x[i]);
            }
        }
        for (const auto& e : edges) {
            const int i = e[0];
            const int j = e[1];
            prod.mul(1.0 - x[i] * x[j] - y[i] * y[j] +
                     std::min(x[i], y[i]) * std::min(x[j], y[j]));
        }
        terms[idx] = scale * prod.value();
    });
    const MeanStdErr ms = mean_std_error(terms);
    return EstimateResult{label, ms.mean, ms.std_error, n_samples, seed};
}

// Fraction of sampled instances for which every given partition is stable.
inline EstimateResult mc_latent_joint_stability(const std::vector<CyclicPartition>& partitions,
                                                std::uint64_t n_samples, std::uint64_t seed,
                                                int workers = 1) {
    if (partitions.empty()) throw std::invalid_argument("mc latent: need at least one partition");
    const int n = partitions.front().n;
    for (const auto& pi : partitions)
        if (pi.n != n) throw std::invalid_argument("mc latent: partition sizes differ");
    std::vector<double> terms(n_samples);
    parallel_for_index(
        n_samples, workers,
        [&](std::uint64_t idx) {
            SplitRng rng(seed, idx);
            const PreferenceInstance inst = PreferenceInstance::from_latent(LatentMatrix::sample(n, rng));
            double hit = 1.0;
            for (const auto& pi : partitions)
                if (!is_stable(inst, pi).stable) {
                    hit = 0.0;
                    break;
                }
            terms[idx] = hit;
        },
        256);
    const MeanStdErr ms = mean_std_error(terms);
    std::string label = "p_joint[";
    for (std::size_t k = 0; k < partitions.size(); ++k)
        label += (k ? ";" : "") + partitions[k].str();
    label += "]";
    return EstimateResult{label, ms.mean, ms.std_error, n_samples, seed};
}

// Sample mean of z^(rank total) over instances where the canonical partition
// of the shape is stable; matches the rank polynomial evaluated at z.
inline EstimateResult mc_rank_gf_point(const ShapeSpec& shape, double z, std::uint64_t n_samples,
                                       std::uint64_t seed, int workers = 1) {
    if (!(z > 0.0 && z <= 1.0)) throw std::invalid_argument("rank gf point: need z in (0, 1]");
    const CyclicPartition pi = shape.canonical_partition();
    std::vector<double> terms(n_samples);
    parallel_for_index(
        n_samples, workers,
        [&](std::uint64_t idx) {
            SplitRng rng(seed, idx);
            const PreferenceInstance inst =
                PreferenceInstance::from_latent(LatentMatrix::sample(pi.n, rng));
            if (!is_stable(inst, pi).stable) {
                terms[idx] = 0.0;
                return;
            }
            terms[idx] = std::pow(z, static_cast<double>(rank_sum(inst, pi)));
        },
        256);
    const MeanStdErr ms = mean_std_error(terms);
    return EstimateResult{"rank_gf[" + shape.str() + "]", ms.mean, ms.std_error, n_samples, seed};
}

struct BoundCheckResult {
    std::uint64_t n_checked = 0;
    std::uint64_t violations = 0;
    double max_log_ratio = -std::numeric_limits<double>::infinity();

    Json to_json() const {
        return Json{{"n_checked", n_checked}, {"violations", violations}, {"max_log_ratio", max_log_ratio}};
    }
};

namespace detail {

// Random reduced fixed-point-free cycle lengths covering n members.
inline std::vector<int> random_reduced_lengths(int n, SplitRng& rng) {
    std::vector<int> lengths;
    int rem = n;
    while (rem > 0) {
        std::array<int, 3> options{2, 3, 5};
        std::array<int, 3> ok{};
        int count = 0;
        for (int opt : options)
            if (opt <= rem && rem - opt != 1) ok[count++] = opt;
        lengths.push_back(ok[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(count)))]);
        rem -= lengths.back();
    }
    return lengths;
}

inline BoundCheckResult reduce_bound_checks(std::vector<double>& ratios) {
    BoundCheckResult out;
    out.n_checked = ratios.size();
    for (double r : ratios) {
        if (r > 0.0) ++out.violations;
        if (r > out.max_log_ratio) out.max_log_ratio = r;
    }
    return out;
}

}  // namespace detail

// Samples random reduced shapes and latent scores, and checks the single-
// partition product bound
//   prod_{(i,j) not in D} (1 - x_i x_j) <= exp(-s^2/2 + 4.5),  s = sum x_i.
inline BoundCheckResult bound_check_single(int n, std::uint64_t n_configs, std::uint64_t seed,
                                           int workers = 1) {
    if (n < 2) throw std::invalid_argument("bound check: n must be at least 2");
    std::vector<double> ratios(n_configs);
    parallel_for_index(
        n_configs, workers,
        [&](std::uint64_t idx) {
            SplitRng rng(seed, idx);
            const std::vector<int> lengths = detail::random_reduced_lengths(n, rng);
            std::vector<int> start_of;
            std::vector<int> cycle_of(static_cast<std::size_t>(n));
            std::vector<int> pos_of(static_cast<std::size_t>(n));
            int at = 0;
            for (std::size_t c = 0; c < lengths.size(); ++c) {
                start_of.push_back(at);
                for (int k = 0; k < lengths[c]; ++k, ++at) {
                    cycle_of[at] = static_cast<int>(c);
                    pos_of[at] = k;
                }
            }
            std::vector<double> x(static_cast<std::size_t>(n));
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] = rng.uniform01();
                s += x[i];
            }
            detail::ScaledProduct prod;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (cycle_of[i] == cycle_of[j]) {
                        const int len = lengths[cycle_of[i]];
                        const int d = pos_of[j] - pos_of[i];
                        if (d == 1 || d == len - 1) continue;  // adjacent on the cycle
                    }
                    prod.mul(1.0 - x[i] * x[j]);
                }
            ratios[idx] = prod.log_abs() - (-0.5 * s * s + 4.5);
        },
        256);
    return detail::reduce_bound_checks(ratios);
}

// Samples pairs of reduced partitions sharing their odd part, plus latent
// scores inside one alternating cone, and checks the two-partition bound
//   prod_{(i,j) in D1^c union D2^c} [1 - x_i x_j - y_i y_j + (x_i ^ y_i)(x_j ^ y_j)]
//     <= exp(2^8) exp(-s1^2/2 - s2^2/2 + s12^2/2)
// with s1 = sum x_i, s2 = sum y_i, s12 = sum min(x_i, y_i).
inline BoundCheckResult bound_check_pair(int n, std::uint64_t n_configs, std::uint64_t seed,
                                         int workers = 1) {
    if (n < 12 || n % 2 != 0)
        throw std::invalid_argument("pair bound check: n must be even and at least 12");
    std::vector<double> ratios(n_configs);
    parallel_for_index(
        n_configs, workers,
        [&](std::uint64_t idx) {
            SplitRng rng(seed, idx);
            // Shared odd part: none, 3+3, 3+5, or 5+5 members, then two
            // independent uniform matchings on the even rest.
            static constexpr std::array<std::array<int, 2>, 4> kOddMenus{
                {{0, 0}, {3, 3}, {3, 5}, {5, 5}}};
            const auto menu = kOddMenus[static_cast<std::size_t>(rng.below(4))];
            std::vector<int> succ1(static_cast<std::size_t>(n)), succ2(static_cast<std::size_t>(n));
            int at = 0;
            for (int len : menu) {
                for (int k = 0; k < len; ++k) {
                    const int v = at + k;
                    const int w = at + (k + 1) % len;
                    succ1[v] = w;
                    succ2[v] = w;
                }
                at += len;
            }
            std::vector<int> rest;
            for (int v = at; v < n; ++v) rest.push_back(v);
            for (int round = 0; round < 2; ++round) {
                std::vector<int> pool = rest;
                rng.shuffle(pool);
                auto& succ = round == 0 ? succ1 : succ2;
                for (std::size_t k = 0; k < pool.size(); k += 2) {
                    succ[pool[k]] = pool[k + 1];
                    succ[pool[k + 1]] = pool[k];
                }
            }
            const CyclicPartition p1 = CyclicPartition::from_succ(succ1);
            const CyclicPartition p2 = CyclicPartition::from_succ(succ2);
            std::vector<char> role(static_cast<std::size_t>(n), 0);
            if (p1 != p2) {
                const CircuitStructure cs = circuit_structure(p1, p2);
                for (const auto& circuit : cs.circuits)
                    for (std::size_t k = 0; k < circuit.size(); ++k)
                        role[circuit[k]] = k % 2 == 1 ? 1 : 2;
            }
            std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
            double s1 = 0.0, s2 = 0.0, s12 = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] = rng.uniform01();
                if (role[i] == 1)
                    y[i] = x[i] + rng.uniform01() * (1.0 - x[i]);
                else if (role[i] == 2)
                    y[i] = rng.uniform01() * x[i];
                else
                    y[i] = x[i];
                s1 += x[i];
                s2 += y[i];
                s12 += std::min(x[i], y[i]);
            }
            detail::ScaledProduct prod;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (p1.adjacent(i, j) && p2.adjacent(i, j)) continue;
                    prod.mul(1.0 - x[i] * x[j] - y[i] * y[j] +
                             std::min(x[i], y[i]) * std::min(x[j], y[j]));
                }
            const double bound = 256.0 - 0.5 * s1 * s1 - 0.5 * s2 * s2 + 0.5 * s12 * s12;
            ratios[idx] = prod.log_abs() - bound;
        },
        256);
    return detail::reduce_bound_checks(ratios);
}

struct ExperimentOptions {
    int n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool with_matching = true;
    bool with_enumeration = false;
    int enum_cap = kEnumDefaultCap;
    int workers = 1;
};

struct TrialRow {
    int n = 0;
    std::uint64_t trial = 0;
    int m = 0;
    int odd_parties = 0;
    bool has_fixed_point = false;
    bool solvable = false;
    std::int64_t rank_sum = 0;
    double rank_ratio = 0.0;
    int r_max = 0;
    int max_matching_size = 0;
    std::int64_t blocking_count = -1;  // -1: not computed
    std::int64_t s_count = -1;         // -1: not computed
    double q_fraction = -1.0;          // < 0: not computed
};

struct ExperimentResult {
    ExperimentOptions options;
    std::vector<TrialRow> rows;
    Json summary;
};

namespace detail {

inline void add_mean_se(Json& summary, const std::string& key, const std::vector<double>& values) {
    const MeanStdErr ms = mean_std_error(values);
    summary["mean_" + key] = ms.mean;
    summary[key + "_std_error"] = ms.std_error;
}

}  // namespace detail

// Solves `trials` independent uniform instances and reports per-trial
// structure statistics plus aggregate means. Deterministic for a fixed
// (n, trials, seed) regardless of worker count.
inline ExperimentResult instance_experiment(const ExperimentOptions& opt) {
    if (opt.n < 2) throw std::invalid_argument("experiment: n must be at least 2");
    if (opt.trials == 0) throw std::invalid_argument("experiment: trials must be positive");
    if (opt.with_enumeration) check_enum_cap(opt.n, opt.enum_cap);
    ExperimentResult out;
    out.options = opt;
    out.rows.assign(opt.trials, TrialRow{});
    parallel_for_index(
        opt.trials, opt.workers,
        [&](std::uint64_t t) {
            const PreferenceInstance inst =
                PreferenceInstance::generate_uniform(opt.n, derive_seed(opt.seed, t));
            const SolveResult solved = solve_stable_partition(inst);
            TrialRow& row = out.rows[t];
            row.n = opt.n;
            row.trial = t;
            row.m = solved.partition.odd_member_count();
            row.odd_parties = solved.odd_party_count;
            row.has_fixed_point = solved.partition.fixed_point_count() == 1;
            row.solvable = solved.solvable;
            row.rank_sum = rank_sum(inst, solved.partition);
            row.rank_ratio =
                static_cast<double>(row.rank_sum) / std::pow(static_cast<double>(opt.n), 1.5);
            row.r_max = max_predecessor_rank(inst, solved.partition);
            if (opt.with_matching) {
                const PartialMatching matching = max_stable_matching(solved);
                row.max_matching_size = matching.pair_count;
                if (opt.n % 2 == 0) {
                    const CyclicPartition completed = complete_matching_heuristic(solved);
                    row.blocking_count =
                        static_cast<std::int64_t>(blocking_pairs(inst, completed).size());
                }
            }
            if (opt.with_enumeration) {
                row.s_count = static_cast<std::int64_t>(
                    enumerate_stable_partitions(inst, false, opt.enum_cap).size());
                row.q_fraction =
                    static_cast<double>(multiple_predecessor_members(inst, opt.enum_cap).size()) /
                    static_cast<double>(opt.n);
            }
        },
        1);

    Json& s = out.summary;
    s = Json::object();
    s["n"] = opt.n;
    s["trials"] = opt.trials;
    s["seed"] = opt.seed;
    std::vector<double> solvable, fixed, m_vals, parties, ratios, r_maxes, match_sizes;
    for (const TrialRow& row : out.rows) {
        solvable.push_back(row.solvable ? 1.0 : 0.0);
        fixed.push_back(row.has_fixed_point ? 1.0 : 0.0);
        m_vals.push_back(static_cast<double>(row.m));
        parties.push_back(static_cast<double>(row.odd_parties));
        ratios.push_back(row.rank_ratio);
        r_maxes.push_back(static_cast<double>(row.r_max));
    }
    detail::add_mean_se(s, "solvable", solvable);
    detail::add_mean_se(s, "fixed_point", fixed);
    detail::add_mean_se(s, "odd_members", m_vals);
    detail::add_mean_se(s, "odd_parties", parties);
    detail::add_mean_se(s, "rank_ratio", ratios);
    detail::add_mean_se(s, "r_max", r_maxes);
    if (opt.with_matching) {
        for (const TrialRow& row : out.rows)
            match_sizes.push_back(static_cast<double>(row.max_matching_size));
        detail::add_mean_se(s, "max_matching_size", match_sizes);
        if (opt.n % 2 == 0) {
            std::vector<double> blocking;
            for (const TrialRow& row : out.rows)
                blocking.push_back(static_cast<double>(row.blocking_count));
            detail::add_mean_se(s, "blocking_count", blocking);
        }
    }
    if (opt.with_enumeration) {
        std::vector<double> counts, fractions;
        for (const TrialRow& row : out.rows) {
            counts.push_back(static_cast<double>(row.s_count));
            fractions.push_back(row.q_fraction);
        }
        detail::add_mean_se(s, "s_count", counts);
        detail::add_mean_se(s, "q_fraction", fractions);
    }
    return out;
}

// Shortest decimal form that round-trips to the same double.
inline std::string double_str(double v) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline constexpr const char* kTrialCsvHeader =
    "n,trial,m,odd_parties,has_fixed_point,solvable,rank_sum,rank_ratio,r_max,"
    "max_matching_size,blocking_count,s_count,q_fraction";

inline void write_experiment_csv(const ExperimentResult& result, std::ostream& out) {
    out << kTrialCsvHeader << "\n";
    for (const TrialRow& row : result.rows) {
        out << row.n << ',' << row.trial << ',' << row.m << ',' << row.odd_parties << ','
            << (row.has_fixed_point ? '1' : '0') << ',' << (row.solvable ? '1' : '0') << ','
            << row.rank_sum << ',' << double_str(row.rank_ratio) << ',' << row.r_max << ',';
        if (result.options.with_matching) out << row.max_matching_size;
        out << ',';
        if (row.blocking_count >= 0) out << row.blocking_count;
        out << ',';
        if (row.s_count >= 0) out << row.s_count;
        out << ',';
        if (row.q_fraction >= 0.0) out << double_str(row.q_fraction);
        out << '\n';
    }
}

}  // namespace stablepart
