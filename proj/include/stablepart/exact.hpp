#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stablepart/enumerate.hpp"
#include "stablepart/instance.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/rational.hpp"
#include "stablepart/util.hpp"

namespace stablepart {

inline constexpr int kExactPairCapDefault = 28;
inline constexpr int kExactPairCapMax = 30;
inline constexpr int kRankGfPairCapDefault = 12;
inline constexpr int kRankGfPairCapMax = 16;

namespace detail {

struct ProductIntegrand {
    // Non-adjacent pairs and, per vertex, the factor denominators
    // q[v][c] after c incident pairs have been switched on.
    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<std::int64_t>> q;
    std::vector<std::int64_t> delta;  // per-vertex lcm of q[v]
    double total_bits = 0;

    void finish() {
        delta.clear();
        for (const auto& row : q) {
            std::int64_t l = 1;
            for (std::int64_t val : row) l = std::lcm(l, val);
            delta.push_back(l);
            total_bits += std::log2(static_cast<double>(l));
        }
    }
};

// Expands prod over pairs (1 - x_i x_j) by inclusion-exclusion; every term
// integrates to a product of per-vertex reciprocals, accumulated exactly
// over one shared denominator per vertex.
template <typename Acc>
struct AlternatingSum {
    const ProductIntegrand& f;
    std::vector<int> c;
    Acc value;
    Acc acc = 0;
    int sign = 1;

    explicit AlternatingSum(const ProductIntegrand& f_) : f(f_), c(f_.q.size(), 0) {
        value = 1;
        for (std::size_t v = 0; v < f.q.size(); ++v)
            value *= static_cast<Acc>(f.delta[v] / f.q[v][0]);
    }

    void run(std::size_t k) {
        if (k == f.edges.size()) {
            if (sign > 0)
                acc += value;
            else
                acc -= value;
            return;
        }
        run(k + 1);
        const int u = f.edges[k][0];
        const int w = f.edges[k][1];
        const Acc saved = value;
        value = value * static_cast<Acc>(f.q[u][c[u]]) / static_cast<Acc>(f.q[u][c[u] + 1]);
        value = value * static_cast<Acc>(f.q[w][c[w]]) / static_cast<Acc>(f.q[w][c[w] + 1]);
        ++c[u];
        ++c[w];
        sign = -sign;
        run(k + 1);
        sign = -sign;
        --c[u];
        --c[w];
        value = saved;
    }
};

inline BigRational integrate_alternating(const ProductIntegrand& f) {
    BigInt denom = 1;
    for (std::int64_t d : f.delta) denom *= d;
    const double need = f.total_bits + static_cast<double>(f.edges.size()) + 16;
    BigInt total;
    if (need < 126) {
        AlternatingSum<__int128> dfs(f);
        dfs.run(0);
        const bool neg = dfs.acc < 0;
        unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-dfs.acc)
                                    : static_cast<unsigned __int128>(dfs.acc);
        total = BigInt(static_cast<std::uint64_t>(mag >> 64));
        total <<= 64;
        total += BigInt(static_cast<std::uint64_t>(mag));
        if (neg) total = -total;
    } else {
        AlternatingSum<BigInt> dfs(f);
        dfs.run(0);
        total = dfs.acc;
    }
    return BigRational(total, denom);
}

inline ProductIntegrand stability_integrand(const CyclicPartition& pi, int pair_cap, int cap_max) {
    if (!pi.is_reduced())
        throw std::invalid_argument("exact probability: shape must be reduced");
    if (pi.fixed_point_count() > 1)
        throw std::invalid_argument("exact probability: at most one fixed point");
    if (pair_cap < 0 || pair_cap > cap_max)
        throw std::invalid_argument("exact probability: pair cap out of range");
    const int fp = pi.fixed_point();
    std::vector<int> vertex_of(static_cast<std::size_t>(pi.n), -1);
    std::vector<int> odd_flag;
    std::vector<int> members;
    for (int i = 0; i < pi.n; ++i) {
        if (i == fp) continue;
        vertex_of[i] = static_cast<int>(members.size());
        members.push_back(i);
    }
    for (int i : members) odd_flag.push_back(pi.succ(i) != pi.pred(i) ? 1 : 0);
    ProductIntegrand f;
    std::vector<int> deg(members.size(), 0);
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            if (pi.adjacent(members[a], members[b])) continue;
            f.edges.push_back({static_cast<int>(a), static_cast<int>(b)});
            ++deg[a];
            ++deg[b];
        }
    if (static_cast<int>(f.edges.size()) > pair_cap)
        throw CapExceeded("exact probability over " + std::to_string(f.edges.size()) +
                          " pair factors refused (cap " + std::to_string(pair_cap) + ")");
    const bool with_fp = fp != -1;
    for (std::size_t v = 0; v < members.size(); ++v) {
        std::vector<std::int64_t> row;
        for (int cdeg = 0; cdeg <= deg[v]; ++cdeg) {
            const std::int64_t e = cdeg + odd_flag[v] + 1;
            row.push_back(with_fp ? e * (e + 1) : e);
        }
        f.q.push_back(std::move(row));
    }
    f.finish();
    return f;
}

}  // namespace detail

// Probability that a uniform instance is stable for one fixed partition of
// the given shape, as an exact rational.
inline BigRational exact_stability_probability(const CyclicPartition& pi,
                                               int pair_cap = kExactPairCapDefault) {
    const auto f = detail::stability_integrand(pi, pair_cap, kExactPairCapMax);
    return detail::integrate_alternating(f);
}

inline BigRational exact_stability_probability(const ShapeSpec& shape,
                                               int pair_cap = kExactPairCapDefault) {
    return exact_stability_probability(shape.canonical_partition(), pair_cap);
}

// Power sums of z^(rank total) over instances stable for one partition.
struct RankPolynomial {
    int offset = 0;  // lowest power of z carried by the polynomial
    std::vector<BigRational> coeffs;

    BigRational sum() const {
        BigRational acc;
        for (const auto& c : coeffs) acc += c;
        return acc;
    }

    BigRational eval(const BigRational& z) const {
        BigRational acc;
        BigRational zp = pow(z, offset);
        for (const auto& c : coeffs) {
            acc += c * zp;
            zp *= z;
        }
        return acc;
    }

    double eval_double(double z) const { return eval(BigRational::from_double(z)).to_double(); }

    int min_nonzero_power() const {
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (!coeffs[k].is_zero()) return offset + static_cast<int>(k);
        return offset;
    }
};

namespace detail {

template <typename Acc>
struct RankGfSum {
    const std::vector<std::array<int, 2>>& edges;
    const std::vector<int>& deg;
    const std::vector<int>& odd_flag;
    std::vector<int> p;
    Acc value;
    std::vector<Acc>& buckets;
    int zcount = 0;

    RankGfSum(const std::vector<std::array<int, 2>>& edges_, const std::vector<int>& deg_,
              const std::vector<int>& odd_flag_, std::vector<Acc>& buckets_)
        : edges(edges_), deg(deg_), odd_flag(odd_flag_), p(deg_.size(), 0), buckets(buckets_) {
        value = 1;
        for (std::size_t v = 0; v < deg.size(); ++v) {
            for (int t = 2; t <= odd_flag[v]; ++t) value *= t;
            for (int t = 2; t <= deg[v]; ++t) value *= t;
        }
    }

    void bump(int v) {
        value = value * static_cast<Acc>(p[v] + odd_flag[v] + 1) / static_cast<Acc>(deg[v] - p[v]);
        ++p[v];
    }
    void unbump(int v) {
        --p[v];
        value = value * static_cast<Acc>(deg[v] - p[v]) / static_cast<Acc>(p[v] + odd_flag[v] + 1);
    }

    void run(std::size_t k) {
        if (k == edges.size()) {
            buckets[zcount] += value;
            return;
        }
        run(k + 1);
        const int u = edges[k][0];
        const int w = edges[k][1];
        ++zcount;
        bump(u);
        run(k + 1);
        unbump(u);
        bump(w);
        run(k + 1);
        unbump(w);
        --zcount;
    }
};

}  // namespace detail

// Joint law of stability and the rank total: coefficient k of the result is
// the probability that the partition is stable with rank total offset + k.
inline RankPolynomial exact_rank_gf(const ShapeSpec& shape, int pair_cap = kRankGfPairCapDefault) {
    if (shape.has_fixed_point())
        throw std::invalid_argument("rank gf: only fixed-point-free shapes are supported");
    if (!shape.is_reduced()) throw std::invalid_argument("rank gf: shape must be reduced");
    if (pair_cap < 0 || pair_cap > kRankGfPairCapMax)
        throw std::invalid_argument("rank gf: pair cap out of range");
    const CyclicPartition pi = shape.canonical_partition();
    const int n = pi.n;
    std::vector<std::array<int, 2>> edges;
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::vector<int> odd_flag(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) odd_flag[i] = pi.succ(i) != pi.pred(i) ? 1 : 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (pi.adjacent(i, j)) continue;
            edges.push_back({i, j});
            ++deg[i];
            ++deg[j];
        }
    if (static_cast<int>(edges.size()) > pair_cap)
        throw CapExceeded("rank gf over " + std::to_string(edges.size()) +
                          " pair factors refused (cap " + std::to_string(pair_cap) + ")");

    double bits = 1.6 * static_cast<double>(edges.size());
    for (int v = 0; v < n; ++v)
        bits += std::lgamma(deg[v] + odd_flag[v] + 1.0) / std::log(2.0);
    std::vector<BigInt> buckets(edges.size() + 1, BigInt(0));
    if (bits + 16 < 126) {
        std::vector<__int128> small(edges.size() + 1, 0);
        detail::RankGfSum<__int128> dfs(edges, deg, odd_flag, small);
        dfs.run(0);
        for (std::size_t k = 0; k < small.size(); ++k) {
            const bool neg = small[k] < 0;
            unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-small[k])
                                        : static_cast<unsigned __int128>(small[k]);
            BigInt b(static_cast<std::uint64_t>(mag >> 64));
            b <<= 64;
            b += BigInt(static_cast<std::uint64_t>(mag));
            buckets[k] = neg ? -b : b;
        }
    } else {
        detail::RankGfSum<BigInt> dfs(edges, deg, odd_flag, buckets);
        dfs.run(0);
    }
    BigInt denom = 1;
    for (int v = 0; v < n; ++v) denom *= factorial(static_cast<unsigned>(deg[v] + odd_flag[v] + 1));
    RankPolynomial poly;
    poly.offset = n + pi.odd_member_count();
    for (const auto& b : buckets) poly.coeffs.emplace_back(b, denom);
    return poly;
}

namespace detail {

template <typename Fn>
void for_each_reduced_type(int n, std::vector<int>& parts, int max_part, Fn&& fn) {
    if (n == 0) {
        fn(parts);
        return;
    }
    for (int len = std::min(n, max_part); len >= 2; --len) {
        if (len != 2 && len % 2 == 0) continue;
        parts.push_back(len);
        for_each_reduced_type(n - len, parts, len, fn);
        parts.pop_back();
    }
}

inline BigInt labelled_permutations_of_type(int n, const std::vector<int>& parts) {
    BigInt count = factorial(static_cast<unsigned>(n));
    int run_len = -1;
    int run = 0;
    for (int len : parts) {
        count /= len;
        if (len == run_len) {
            ++run;
        } else {
            run_len = len;
            run = 1;
        }
        count /= run;
    }
    return count;
}

}  // namespace detail

// Expected number of reduced stable partitions of a uniform instance,
// fixed-point-free by default, as an exact rational.
inline BigRational exact_expected_partitions(int n, bool include_fixed_point = false,
                                             int pair_cap = kExactPairCapDefault) {
    if (n < 2) throw std::invalid_argument("exact_expected_partitions: n must be at least 2");
    BigRational total;
    std::vector<int> parts;
    detail::for_each_reduced_type(n, parts, n, [&](const std::vector<int>& type) {
        ShapeSpec shape = ShapeSpec::of(type, false);
        total += BigRational(detail::labelled_permutations_of_type(n, type)) *
                 exact_stability_probability(shape, pair_cap);
    });
    if (include_fixed_point) {
        detail::for_each_reduced_type(n - 1, parts, n - 1, [&](const std::vector<int>& type) {
            ShapeSpec shape = ShapeSpec::of(type, true);
            total += BigRational(BigInt(n) * detail::labelled_permutations_of_type(n - 1, type)) *
                     exact_stability_probability(shape, pair_cap);
        });
    }
    return total;
}

// Leading constant of the expected count of reduced stable partitions,
// Gamma(1/4) / (sqrt(pi e) 2^(1/4)).
inline double expected_partitions_constant() {
    return std::tgamma(0.25) / (std::sqrt(4.0 * std::atan(1.0) * std::exp(1.0)) * std::pow(2.0, 0.25));
}

inline double asymptotic_expected_partitions(int n) {
    if (n < 2) throw std::invalid_argument("asymptotic_expected_partitions: n must be at least 2");
    return expected_partitions_constant() * std::pow(static_cast<double>(n), 0.25);
}

inline double log_double_factorial(long long k) {
    if (k < -1) throw std::invalid_argument("log_double_factorial: k must be at least -1");
    if (k <= 1) return 0.0;
    if (k % 2 == 0) {
        const double j = static_cast<double>(k) / 2.0;
        return j * std::log(2.0) + std::lgamma(j + 1.0);
    }
    const double j = static_cast<double>((k - 1) / 2);
    return std::lgamma(static_cast<double>(k) + 1.0) - j * std::log(2.0) - std::lgamma(j + 1.0);
}

// Limiting stability probability for one reduced fixed-point-free shape
// with m members on odd cycles: exp(1/2) / (n + m - 1)!!.
inline double asymptotic_p_stable(int n, int m) {
    if (n < 2 || m < 0 || m > n) throw std::invalid_argument("asymptotic_p_stable: need 0 <= m <= n >= 2");
    if ((n - m) % 2 != 0) throw std::invalid_argument("asymptotic_p_stable: n - m must be even");
    return std::exp(0.5 - log_double_factorial(static_cast<long long>(n) + m - 1));
}

namespace detail {

template <typename Fn>
double adaptive_simpson(Fn&& fn, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(fn, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(fn, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <typename Fn>
double integrate(Fn&& fn, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = fn(a);
    const double fm = fn(m);
    const double fb = fn(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

// Constant in front of n^(3/4) in the second-moment bound for the number of
// reduced stable partitions:
//   exp(-3/2) sqrt(2/pi^2) int_{x,y >= 0} x^(-1/2) exp(-x^2/2 - 2xy - y^2).
inline double second_moment_constant() {
    static const double cached = [] {
        const double pi = 4.0 * std::atan(1.0);
        const double inner = detail::integrate(
            [&](double u) {
                return detail::integrate(
                    [&](double y) {
                        const double u2 = u * u;
                        return 2.0 * std::exp(-0.5 * u2 * u2 - 2.0 * u2 * y - y * y);
                    },
                    0.0, 6.5, 1e-10);
            },
            0.0, 3.4, 1e-9);
        return std::exp(-1.5) * std::sqrt(2.0 / (pi * pi)) * inner;
    }();
    return cached;
}

// Bound on the expected fraction of members whose stable-partition
// predecessor is not unique: 2 e c n^(-1/4).
inline double q_fraction_bound(int n) {
    if (n < 2) throw std::invalid_argument("q_fraction_bound: n must be at least 2");
    return 2.0 * std::exp(1.0) * second_moment_constant() * std::pow(static_cast<double>(n), -0.25);
}

}  // namespace stablepart
