#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "stablepart/enumerate.hpp"
#include "stablepart/exact.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/mc.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/rational.hpp"
#include "stablepart/solver.hpp"

namespace sp = stablepart;
using sp::Json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// Empty path means stdout.
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

sp::PreferenceInstance load_instance(const std::string& path) {
    const std::string text = read_file(path);
    const std::size_t head = text.find_first_not_of(" \t\r\n");
    if (head != std::string::npos && text[head] == '{')
        return sp::PreferenceInstance::from_json(Json::parse(text));
    return sp::PreferenceInstance::parse_text(text);
}

// Accepts {"n", "succ"} with 1-based successors, {"n", "cycles"} with
// 1-based member lists, or a solve report wrapping either under "partition".
sp::CyclicPartition partition_from_json(const Json& j) {
    if (j.is_object() && j.contains("partition"))
        return partition_from_json(j.at("partition"));
    if (j.is_object() && j.contains("cycles")) {
        if (!j.contains("n")) throw std::invalid_argument("partition json: need n with cycles");
        const int n = j.at("n").get<int>();
        std::vector<std::vector<int>> cycles;
        for (const auto& c : j.at("cycles")) {
            std::vector<int> cycle;
            for (const auto& v : c) {
                const long long raw = v.get<long long>();
                if (raw < 1 || raw > n)
                    throw std::invalid_argument("partition json: member id out of range");
                cycle.push_back(static_cast<int>(raw - 1));
            }
            cycles.push_back(std::move(cycle));
        }
        return sp::CyclicPartition::from_cycles(n, cycles);
    }
    return sp::CyclicPartition::from_json(j);
}

sp::CyclicPartition load_partition(const std::string& path) {
    return partition_from_json(Json::parse(read_file(path)));
}

Json parties_json(const std::vector<std::vector<int>>& parties) {
    Json out = Json::array();
    for (const auto& party : parties) {
        Json p = Json::array();
        for (int v : party) p.push_back(v + 1);
        out.push_back(std::move(p));
    }
    return out;
}

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Json estimate_json(const sp::EstimateResult& r) { return r.to_json(); }

Json constants_json() {
    return Json{{"second_moment_c", sp::second_moment_constant()},
                {"gamma_quarter", std::tgamma(0.25)},
                {"expected_partitions_constant", sp::expected_partitions_constant()},
                {"sqrt_e", std::exp(0.5)}};
}

Json rank_gf_json(const sp::ShapeSpec& shape, int pair_cap) {
    const sp::RankPolynomial poly = sp::exact_rank_gf(shape, pair_cap);
    Json coeffs = Json::object();
    for (std::size_t k = 0; k < poly.coeffs.size(); ++k)
        if (!poly.coeffs[k].is_zero())
            coeffs[std::to_string(poly.offset + static_cast<int>(k))] = poly.coeffs[k].str();
    return Json{{"shape", shape.str()},
                {"min_power", poly.min_nonzero_power()},
                {"sum", poly.sum().str()},
                {"coefficients", std::move(coeffs)}};
}

Json solve_json(const sp::PreferenceInstance& inst) {
    const sp::SolveResult solved = sp::solve_stable_partition(inst);
    Json out = Json::object();
    out["n"] = inst.n;
    out["partition"] = solved.partition.to_json();
    out["partition_str"] = solved.partition.str();
    out["m"] = solved.partition.odd_member_count();
    out["odd_parties"] = parties_json(solved.odd_parties);
    out["solvable"] = solved.solvable;
    out["max_matching_size"] = sp::max_stable_matching(solved).pair_count;
    if (inst.n % 2 == 0) {
        const sp::CyclicPartition completed = sp::complete_matching_heuristic(solved);
        out["heuristic_blocking_count"] = sp::blocking_pairs(inst, completed).size();
    } else {
        out["heuristic_blocking_count"] = nullptr;
    }
    return out;
}

const char* verdict_kind_name(sp::StabilityVerdict::Kind kind) {
    switch (kind) {
        case sp::StabilityVerdict::Kind::None: return "none";
        case sp::StabilityVerdict::Kind::PrefersPredecessor: return "prefers_predecessor";
        case sp::StabilityVerdict::Kind::BlockingPair: return "blocking_pair";
        case sp::StabilityVerdict::Kind::ExchangeBlockingPair: return "exchange_blocking_pair";
    }
    return "none";
}

Json verdict_json(const sp::StabilityVerdict& v) {
    Json out = Json::object();
    out["stable"] = v.stable;
    out["kind"] = verdict_kind_name(v.kind);
    if (v.i >= 0)
        out["i"] = v.i + 1;
    else
        out["i"] = nullptr;
    if (v.j >= 0)
        out["j"] = v.j + 1;
    else
        out["j"] = nullptr;
    return out;
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + context);
    }
}

template <typename T>
T field_or(const Json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<T>();
}

struct ConfigRun {
    std::string config_path;
    std::string outdir;
    int workers = 0;
};

// Runs every job in a structured config and writes CSV plus JSON artifacts
// into the output directory. Job seeds default to streams of the top-level
// seed, so runs are reproducible end to end.
void run_config(const ConfigRun& run) {
    const Json config = Json::parse(read_file(run.config_path));
    check_keys(config, {"seed", "workers", "experiments", "estimates", "bounds", "exact"},
               "top level");
    const std::uint64_t base_seed = field_or<std::uint64_t>(config, "seed", 1);
    int workers = field_or<int>(config, "workers", 0);
    if (run.workers > 0) workers = run.workers;
    if (workers <= 0) workers = default_workers();
    std::filesystem::create_directories(run.outdir);
    std::uint64_t ordinal = 0;
    const auto job_seed = [&](const Json& job) {
        ++ordinal;
        return field_or<std::uint64_t>(job, "seed", sp::derive_seed(base_seed, ordinal));
    };

    Json results = Json::object();
    results["experiments"] = Json::array();
    results["estimates"] = Json::array();
    results["bounds"] = Json::array();
    results["exact"] = Json::array();

    for (const Json& job : field_or<Json>(config, "experiments", Json::array())) {
        check_keys(job,
                   {"name", "n", "trials", "seed", "with_matching", "with_enumeration", "enum_cap"},
                   "experiments entry");
        sp::ExperimentOptions opt;
        opt.n = field_or<int>(job, "n", 4);
        opt.trials = field_or<std::uint64_t>(job, "trials", 1000);
        opt.seed = job_seed(job);
        opt.with_matching = field_or<bool>(job, "with_matching", true);
        opt.with_enumeration = field_or<bool>(job, "with_enumeration", false);
        opt.enum_cap = field_or<int>(job, "enum_cap", sp::kEnumDefaultCap);
        opt.workers = workers;
        const std::string name =
            field_or<std::string>(job, "name", "experiment_" + std::to_string(ordinal));
        const sp::ExperimentResult result = sp::instance_experiment(opt);
        std::ostringstream csv;
        sp::write_experiment_csv(result, csv);
        write_file(run.outdir + "/" + name + ".csv", csv.str());
        write_file(run.outdir + "/" + name + ".summary.json", dump(result.summary));
        results["experiments"].push_back(Json{{"name", name}, {"summary", result.summary}});
    }

    for (const Json& job : field_or<Json>(config, "estimates", Json::array())) {
        check_keys(job,
                   {"name", "kind", "shape", "z", "samples", "seed", "proposal", "beta", "p1", "p2",
                    "partitions"},
                   "estimates entry");
        const std::string kind = field_or<std::string>(job, "kind", "prob");
        const std::uint64_t samples = field_or<std::uint64_t>(job, "samples", 100000);
        const std::uint64_t seed = job_seed(job);
        const sp::Proposal proposal =
            sp::parse_proposal(field_or<std::string>(job, "proposal", "truncexp"));
        const double beta = field_or<double>(job, "beta", 0.0);
        sp::EstimateResult est;
        if (kind == "prob") {
            const auto shape = sp::ShapeSpec::parse(field_or<std::string>(job, "shape", "2,2"));
            est = sp::mc_stability_probability(shape, samples, seed, proposal, beta, workers);
        } else if (kind == "pair") {
            if (!job.contains("p1") || !job.contains("p2"))
                throw std::invalid_argument("config: pair estimate needs p1 and p2");
            est = sp::mc_pair_probability(partition_from_json(job.at("p1")),
                                          partition_from_json(job.at("p2")), samples, seed,
                                          proposal, beta, workers);
        } else if (kind == "gf") {
            const auto shape = sp::ShapeSpec::parse(field_or<std::string>(job, "shape", "2,2"));
            est = sp::mc_rank_gf_point(shape, field_or<double>(job, "z", 1.0), samples, seed,
                                       workers);
        } else if (kind == "latent") {
            std::vector<sp::CyclicPartition> partitions;
            if (job.contains("partitions"))
                for (const Json& p : job.at("partitions"))
                    partitions.push_back(partition_from_json(p));
            if (job.contains("shape"))
                partitions.push_back(
                    sp::ShapeSpec::parse(job.at("shape").get<std::string>()).canonical_partition());
            est = sp::mc_latent_joint_stability(partitions, samples, seed, workers);
        } else {
            throw std::invalid_argument("config: unknown estimate kind '" + kind + "'");
        }
        const std::string name = field_or<std::string>(job, "name", kind + "_" + std::to_string(ordinal));
        results["estimates"].push_back(Json{{"name", name}, {"result", estimate_json(est)}});
    }

    for (const Json& job : field_or<Json>(config, "bounds", Json::array())) {
        check_keys(job, {"name", "kind", "n", "configs", "seed"}, "bounds entry");
        const std::string kind = field_or<std::string>(job, "kind", "single");
        const std::uint64_t configs = field_or<std::uint64_t>(job, "configs", 100000);
        const std::uint64_t seed = job_seed(job);
        sp::BoundCheckResult result;
        int n = 0;
        if (kind == "single") {
            n = field_or<int>(job, "n", 50);
            result = sp::bound_check_single(n, configs, seed, workers);
        } else if (kind == "pair") {
            n = field_or<int>(job, "n", 30);
            result = sp::bound_check_pair(n, configs, seed, workers);
        } else {
            throw std::invalid_argument("config: unknown bound kind '" + kind + "'");
        }
        const std::string name =
            field_or<std::string>(job, "name", "bound_" + kind + "_" + std::to_string(ordinal));
        results["bounds"].push_back(
            Json{{"name", name}, {"kind", kind}, {"n", n}, {"result", result.to_json()}});
    }

    for (const Json& job : field_or<Json>(config, "exact", Json::array())) {
        check_keys(job, {"name", "kind", "shape", "n", "include_fixed_point", "pair_cap", "seed"},
                   "exact entry");
        ++ordinal;
        const std::string kind = field_or<std::string>(job, "kind", "prob");
        Json value;
        if (kind == "prob") {
            const auto shape = sp::ShapeSpec::parse(field_or<std::string>(job, "shape", "2,2"));
            value = sp::exact_stability_probability(
                        shape, field_or<int>(job, "pair_cap", sp::kExactPairCapDefault))
                        .str();
        } else if (kind == "gf") {
            const auto shape = sp::ShapeSpec::parse(field_or<std::string>(job, "shape", "2,2"));
            value = rank_gf_json(shape, field_or<int>(job, "pair_cap", sp::kRankGfPairCapDefault));
        } else if (kind == "expected") {
            value = sp::exact_expected_partitions(
                        field_or<int>(job, "n", 4), field_or<bool>(job, "include_fixed_point", false),
                        field_or<int>(job, "pair_cap", sp::kExactPairCapDefault))
                        .str();
        } else if (kind == "constants") {
            value = constants_json();
        } else {
            throw std::invalid_argument("config: unknown exact kind '" + kind + "'");
        }
        const std::string name =
            field_or<std::string>(job, "name", "exact_" + kind + "_" + std::to_string(ordinal));
        results["exact"].push_back(Json{{"name", name}, {"kind", kind}, {"value", value}});
    }

    write_file(run.outdir + "/results.json", dump(results));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable partitions of the roommates problem: solve, enumerate, evaluate, simulate"};
    app.require_subcommand(1);
    std::function<int()> action;

    // gen
    {
        auto* cmd = app.add_subcommand("gen", "generate a uniform random preference instance");
        auto n = std::make_shared<int>(4);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--n", *n, "number of members")->check(CLI::Range(2, 1000000));
        cmd->add_option("--seed", *seed, "RNG seed");
        cmd->add_option("--out", *out, "output path (default stdout)");
        cmd->callback([n, seed, out, &action] {
            action = [=] {
                emit(*out, sp::PreferenceInstance::generate_uniform(*n, *seed).to_text());
                return 0;
            };
        });
    }

    // solve
    {
        auto* cmd = app.add_subcommand("solve", "solve an instance for a stable partition");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "instance file")->required();
        cmd->add_option("--out", *out, "output path (default stdout)");
        cmd->callback([in, out, &action] {
            action = [=] {
                emit(*out, dump(solve_json(load_instance(*in))));
                return 0;
            };
        });
    }

    // verify
    {
        auto* cmd = app.add_subcommand("verify", "check a partition for stability; exit 0 iff stable");
        auto in = std::make_shared<std::string>();
        auto part = std::make_shared<std::string>();
        auto exchange = std::make_shared<bool>(false);
        cmd->add_option("--in", *in, "instance file")->required();
        cmd->add_option("--partition", *part, "partition JSON file")->required();
        cmd->add_flag("--exchange", *exchange, "also require exchange-stability");
        cmd->callback([in, part, exchange, &action] {
            action = [=] {
                const sp::PreferenceInstance inst = load_instance(*in);
                const sp::CyclicPartition pi = load_partition(*part);
                const sp::StabilityVerdict v =
                    *exchange ? sp::is_doubly_stable(inst, pi) : sp::is_stable(inst, pi);
                std::cout << dump(verdict_json(v));
                return v.stable ? 0 : 1;
            };
        });
    }

    // enumerate
    {
        auto* cmd = app.add_subcommand("enumerate", "list all stable partitions or matchings");
        auto in = std::make_shared<std::string>();
        auto cap = std::make_shared<int>(sp::kEnumDefaultCap);
        auto fp_free = std::make_shared<bool>(false);
        auto matchings = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "instance file")->required();
        cmd->add_option("--cap", *cap, "refuse instances larger than this")
            ->check(CLI::Range(2, sp::kEnumMaxCap));
        cmd->add_flag("--fp-free", *fp_free, "exclude partitions with a fixed point");
        cmd->add_flag("--matchings", *matchings, "enumerate stable matchings instead");
        cmd->add_option("--out", *out, "output path (default stdout)");
        cmd->callback([in, cap, fp_free, matchings, out, &action] {
            action = [=] {
                const sp::PreferenceInstance inst = load_instance(*in);
                const std::vector<sp::CyclicPartition> found =
                    *matchings ? sp::enumerate_stable_matchings(inst, *cap)
                               : sp::enumerate_stable_partitions(inst, !*fp_free, *cap);
                Json items = Json::array();
                for (const auto& pi : found) items.push_back(pi.str());
                emit(*out, dump(Json{{"n", inst.n},
                                     {"kind", *matchings ? "matchings" : "partitions"},
                                     {"count", found.size()},
                                     {"items", std::move(items)}}));
                return 0;
            };
        });
    }

    // exact
    {
        auto* cmd = app.add_subcommand("exact", "exact rational evaluation");
        cmd->require_subcommand(1);
        {
            auto* sub = cmd->add_subcommand("prob", "stability probability of a shape");
            auto shape = std::make_shared<std::string>("2,2");
            auto cap = std::make_shared<int>(sp::kExactPairCapDefault);
            sub->add_option("--shape", *shape, "shape, e.g. \"2,2\" or \"3+fp\"")->required();
            sub->add_option("--pair-cap", *cap, "refuse shapes with more non-adjacent pairs");
            sub->callback([shape, cap, &action] {
                action = [=] {
                    std::cout << sp::exact_stability_probability(sp::ShapeSpec::parse(*shape), *cap).str()
                              << "\n";
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("gf", "rank generating polynomial of a shape");
            auto shape = std::make_shared<std::string>("2,2");
            auto cap = std::make_shared<int>(sp::kRankGfPairCapDefault);
            auto z = std::make_shared<std::string>();
            sub->add_option("--shape", *shape, "fixed-point-free shape")->required();
            sub->add_option("--pair-cap", *cap, "refuse shapes with more non-adjacent pairs");
            sub->add_option("--z", *z, "also evaluate at this rational, e.g. \"1/2\"");
            sub->callback([shape, cap, z, &action] {
                action = [=] {
                    const auto spec = sp::ShapeSpec::parse(*shape);
                    Json out = rank_gf_json(spec, *cap);
                    if (!z->empty()) {
                        const sp::BigRational at = sp::BigRational::parse(*z);
                        out["z"] = at.str();
                        out["value_at_z"] = sp::exact_rank_gf(spec, *cap).eval(at).str();
                    }
                    std::cout << dump(out);
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("expected", "expected number of stable partitions");
            auto n = std::make_shared<int>(4);
            auto fp = std::make_shared<bool>(false);
            auto cap = std::make_shared<int>(sp::kExactPairCapDefault);
            sub->add_option("--n", *n, "number of members")->required();
            sub->add_flag("--fp", *fp, "include partitions with a fixed point");
            sub->add_option("--pair-cap", *cap, "refuse shapes with more non-adjacent pairs");
            sub->callback([n, fp, cap, &action] {
                action = [=] {
                    std::cout << sp::exact_expected_partitions(*n, *fp, *cap).str() << "\n";
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("constants", "asymptotic constants");
            sub->callback([&action] {
                action = [] {
                    std::cout << dump(constants_json());
                    return 0;
                };
            });
        }
    }

    // constants (alias of `exact constants`)
    {
        auto* cmd = app.add_subcommand("constants", "asymptotic constants");
        cmd->callback([&action] {
            action = [] {
                std::cout << dump(constants_json());
                return 0;
            };
        });
    }

    // estimate
    {
        auto* cmd = app.add_subcommand("estimate", "Monte Carlo estimation");
        cmd->require_subcommand(1);
        cmd->fallthrough();
        auto samples = std::make_shared<std::uint64_t>(100000);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto workers = std::make_shared<int>(default_workers());
        auto out = std::make_shared<std::string>();
        cmd->add_option("--samples", *samples, "sample count");
        cmd->add_option("--seed", *seed, "RNG seed");
        cmd->add_option("--workers", *workers, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "output path (default stdout)");
        {
            auto* sub = cmd->add_subcommand("prob", "stability probability of a shape");
            auto shape = std::make_shared<std::string>("2,2");
            auto proposal = std::make_shared<std::string>("truncexp");
            auto beta = std::make_shared<double>(0.0);
            sub->add_option("--shape", *shape, "shape, e.g. \"2,2\" or \"3+fp\"")->required();
            sub->add_option("--proposal", *proposal, "uniform or truncexp");
            sub->add_option("--beta", *beta, "truncexp rate; 0 picks sqrt(n+m)");
            sub->callback([=, &action] {
                action = [=] {
                    const auto est = sp::mc_stability_probability(
                        sp::ShapeSpec::parse(*shape), *samples, *seed,
                        sp::parse_proposal(*proposal), *beta, *workers);
                    emit(*out, dump(estimate_json(est)));
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("pair", "probability that two partitions are both stable");
            auto p1 = std::make_shared<std::string>();
            auto p2 = std::make_shared<std::string>();
            auto proposal = std::make_shared<std::string>("truncexp");
            auto beta = std::make_shared<double>(0.0);
            sub->add_option("--p1", *p1, "first partition JSON file")->required();
            sub->add_option("--p2", *p2, "second partition JSON file")->required();
            sub->add_option("--proposal", *proposal, "uniform or truncexp");
            sub->add_option("--beta", *beta, "truncexp rate; 0 picks sqrt(n+m)");
            sub->callback([=, &action] {
                action = [=] {
                    const auto est =
                        sp::mc_pair_probability(load_partition(*p1), load_partition(*p2), *samples,
                                                *seed, sp::parse_proposal(*proposal), *beta, *workers);
                    emit(*out, dump(estimate_json(est)));
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("gf", "rank generating function at one point");
            auto shape = std::make_shared<std::string>("2,2");
            auto z = std::make_shared<double>(1.0);
            sub->add_option("--shape", *shape, "shape")->required();
            sub->add_option("--z", *z, "evaluation point in (0, 1]");
            sub->callback([=, &action] {
                action = [=] {
                    const auto est = sp::mc_rank_gf_point(sp::ShapeSpec::parse(*shape), *z, *samples,
                                                          *seed, *workers);
                    emit(*out, dump(estimate_json(est)));
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("latent", "joint stability frequency over latent instances");
            auto parts = std::make_shared<std::vector<std::string>>();
            auto shape = std::make_shared<std::string>();
            sub->add_option("--partition", *parts, "partition JSON file (repeatable)");
            sub->add_option("--shape", *shape, "canonical partition of a shape");
            sub->callback([=, &action] {
                action = [=] {
                    std::vector<sp::CyclicPartition> partitions;
                    for (const auto& path : *parts) partitions.push_back(load_partition(path));
                    if (!shape->empty())
                        partitions.push_back(sp::ShapeSpec::parse(*shape).canonical_partition());
                    const auto est =
                        sp::mc_latent_joint_stability(partitions, *samples, *seed, *workers);
                    emit(*out, dump(estimate_json(est)));
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("bound-single", "single-partition product bound harness");
            auto n = std::make_shared<int>(50);
            sub->add_option("--n", *n, "members per sampled configuration");
            sub->callback([=, &action] {
                action = [=] {
                    emit(*out, dump(sp::bound_check_single(*n, *samples, *seed, *workers).to_json()));
                    return 0;
                };
            });
        }
        {
            auto* sub = cmd->add_subcommand("bound-pair", "two-partition product bound harness");
            auto n = std::make_shared<int>(30);
            sub->add_option("--n", *n, "members per sampled configuration");
            sub->callback([=, &action] {
                action = [=] {
                    emit(*out, dump(sp::bound_check_pair(*n, *samples, *seed, *workers).to_json()));
                    return 0;
                };
            });
        }
    }

    // experiment
    {
        auto* cmd = app.add_subcommand("experiment", "run seeded instance experiments");
        auto config = std::make_shared<std::string>();
        auto outdir = std::make_shared<std::string>();
        auto n = std::make_shared<int>(4);
        auto trials = std::make_shared<std::uint64_t>(1000);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto no_matching = std::make_shared<bool>(false);
        auto enumerate = std::make_shared<bool>(false);
        auto enum_cap = std::make_shared<int>(sp::kEnumDefaultCap);
        auto workers = std::make_shared<int>(0);
        auto csv = std::make_shared<std::string>();
        auto summary = std::make_shared<std::string>();
        auto* config_opt = cmd->add_option("--config", *config, "config file with a job list");
        cmd->add_option("--outdir", *outdir, "output directory for config runs");
        cmd->add_option("--n", *n, "number of members")->excludes(config_opt);
        cmd->add_option("--trials", *trials, "instance count")->excludes(config_opt);
        cmd->add_option("--seed", *seed, "RNG seed")->excludes(config_opt);
        cmd->add_flag("--no-matching", *no_matching, "skip matching statistics")->excludes(config_opt);
        cmd->add_flag("--enumerate", *enumerate, "add enumeration statistics (small n)")
            ->excludes(config_opt);
        cmd->add_option("--enum-cap", *enum_cap, "enumeration size cap")->excludes(config_opt);
        cmd->add_option("--workers", *workers, "worker threads (0: all cores)");
        cmd->add_option("--csv", *csv, "per-trial CSV path (default stdout)")->excludes(config_opt);
        cmd->add_option("--summary", *summary, "summary JSON path")->excludes(config_opt);
        cmd->callback([=, &action] {
            action = [=] {
                if (!config->empty()) {
                    if (outdir->empty())
                        throw std::invalid_argument("experiment --config requires --outdir");
                    run_config(ConfigRun{*config, *outdir, *workers});
                    return 0;
                }
                sp::ExperimentOptions opt;
                opt.n = *n;
                opt.trials = *trials;
                opt.seed = *seed;
                opt.with_matching = !*no_matching;
                opt.with_enumeration = *enumerate;
                opt.enum_cap = *enum_cap;
                opt.workers = *workers > 0 ? *workers : default_workers();
                const sp::ExperimentResult result = sp::instance_experiment(opt);
                std::ostringstream csv_text;
                sp::write_experiment_csv(result, csv_text);
                emit(*csv, csv_text.str());
                if (!summary->empty()) write_file(*summary, dump(result.summary));
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (!action) return 1;
    try {
        return action();
    } catch (const sp::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
