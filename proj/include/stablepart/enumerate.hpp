#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stablepart/instance.hpp"
#include "stablepart/partition.hpp"
#include "stablepart/rational.hpp"
#include "stablepart/util.hpp"

namespace stablepart {

inline constexpr int kEnumDefaultCap = 10;
inline constexpr int kEnumMaxCap = 12;

inline void check_enum_cap(int n, int cap) {
    if (cap < 2 || cap > kEnumMaxCap)
        throw std::invalid_argument("enumeration cap must lie in [2, " + std::to_string(kEnumMaxCap) + "]");
    if (n > cap)
        throw CapExceeded("enumeration over n = " + std::to_string(n) +
                          " members refused (cap " + std::to_string(cap) + ")");
}

// Cycle-type shape, e.g. "2,2" or "3+fp": comma-separated cycle lengths
// (each >= 2, kept sorted) plus an optional fixed point.
class ShapeSpec {
public:
    static ShapeSpec of(std::vector<int> cycles, bool fixed_point) {
        ShapeSpec s;
        for (int len : cycles)
            if (len < 2) throw std::invalid_argument("shape: cycle lengths must be at least 2");
        std::sort(cycles.begin(), cycles.end());
        s.cycles_ = std::move(cycles);
        s.fixed_point_ = fixed_point;
        if (s.n() < 2) throw std::invalid_argument("shape: at least two members required");
        return s;
    }

    static ShapeSpec parse(std::string_view text) {
        bool fp = false;
        if (text.size() >= 3 && text.substr(text.size() - 3) == "+fp") {
            fp = true;
            text.remove_suffix(3);
        }
        std::vector<int> cycles;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = std::min(text.find(',', pos), text.size());
            std::string_view token = text.substr(pos, comma - pos);
            while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
            while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
            if (token.empty()) throw std::invalid_argument("shape: empty cycle length");
            long long len = 0;
            for (char c : token) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw std::invalid_argument("shape: bad cycle length '" + std::string(token) + "'");
                len = len * 10 + (c - '0');
                if (len > 1000000) throw std::invalid_argument("shape: cycle length out of range");
            }
            if (len < 2) throw std::invalid_argument("shape: cycle lengths must be at least 2");
            cycles.push_back(static_cast<int>(len));
            if (comma == text.size()) break;
            pos = comma + 1;
        }
        return of(std::move(cycles), fp);
    }

    const std::vector<int>& cycles() const { return cycles_; }
    bool has_fixed_point() const { return fixed_point_; }

    int n() const {
        int total = fixed_point_ ? 1 : 0;
        for (int len : cycles_) total += len;
        return total;
    }

    // Members on odd cycles of length >= 3.
    int odd_member_count() const {
        int m = 0;
        for (int len : cycles_)
            if (len % 2 == 1) m += len;
        return m;
    }

    bool is_reduced() const {
        for (int len : cycles_)
            if (len % 2 == 0 && len != 2) return false;
        return true;
    }

    std::string str() const {
        std::string out;
        for (std::size_t k = 0; k < cycles_.size(); ++k) {
            if (k) out += ",";
            out += std::to_string(cycles_[k]);
        }
        if (fixed_point_) out += "+fp";
        return out;
    }

    // Members 0..n-1 assigned to the cycles in order, the fixed point last.
    CyclicPartition canonical_partition() const {
        std::vector<std::vector<int>> cycles;
        int next = 0;
        for (int len : cycles_) {
            std::vector<int> c(static_cast<std::size_t>(len));
            for (int& v : c) v = next++;
            cycles.push_back(std::move(c));
        }
        if (fixed_point_) cycles.push_back({next++});
        return CyclicPartition::from_cycles(next, cycles);
    }

private:
    std::vector<int> cycles_;
    bool fixed_point_ = false;
};

namespace detail {

// Remaining members must split into transpositions and odd cycles >= 3,
// with at most one fixed point overall.
inline bool enum_rest_feasible(int rest, bool fp_available) {
    return rest != 1 || fp_available;
}

template <typename Fn>
void enum_cycles(std::uint32_t free, bool fp_available, std::vector<int>& succ, Fn&& fn) {
    if (free == 0) {
        fn(succ);
        return;
    }
    const int v = std::countr_zero(free);
    const int rest = std::popcount(free);
    if (fp_available && enum_rest_feasible(rest - 1, false)) {
        succ[v] = v;
        enum_cycles(free & (free - 1), false, succ, fn);
    }
    // Grow a cycle from its minimum member v; closing is legal at length 2
    // or any odd length >= 3 when the leftover can still be completed.
    struct Grow {
        bool fp_available;
        std::vector<int>& succ;
        Fn& fn;
        int start;
        void step(std::uint32_t remaining, int prev, int len) {
            if (len >= 2 && (len == 2 || len % 2 == 1) &&
                enum_rest_feasible(std::popcount(remaining), fp_available)) {
                succ[prev] = start;
                enum_cycles(remaining, fp_available, succ, fn);
            }
            for (std::uint32_t bits = remaining; bits;) {
                const int w = std::countr_zero(bits);
                bits &= bits - 1;
                succ[prev] = w;
                step(remaining & ~(std::uint32_t{1} << w), w, len + 1);
            }
        }
    };
    Grow grow{fp_available, succ, fn, v};
    grow.step(free & (free - 1), v, 1);
}

}  // namespace detail

// Visits every permutation of [n] whose cycles are transpositions or odd
// cycles >= 3, plus at most one fixed point when allowed. Deterministic
// depth-first order.
template <typename Fn>
void for_each_reduced_permutation(int n, bool allow_fixed_point, Fn&& fn) {
    if (n < 2 || n > 20) throw std::invalid_argument("reduced enumeration needs 2 <= n <= 20");
    std::vector<int> succ(static_cast<std::size_t>(n), -1);
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    detail::enum_cycles(full, allow_fixed_point, succ, fn);
}

inline std::vector<CyclicPartition> enumerate_candidates(int n, bool allow_fixed_point,
                                                         int cap = kEnumDefaultCap) {
    check_enum_cap(n, cap);
    std::vector<CyclicPartition> out;
    for_each_reduced_permutation(n, allow_fixed_point, [&](const std::vector<int>& succ) {
        out.push_back(CyclicPartition::from_succ(succ));
    });
    return out;
}

inline std::vector<CyclicPartition> enumerate_stable_partitions(const PreferenceInstance& inst,
                                                                bool allow_fixed_point = true,
                                                                int cap = kEnumDefaultCap) {
    check_enum_cap(inst.n, cap);
    std::vector<CyclicPartition> out;
    for_each_reduced_permutation(inst.n, allow_fixed_point, [&](const std::vector<int>& succ) {
        CyclicPartition pi = CyclicPartition::from_succ(succ);
        if (is_stable(inst, pi).stable) out.push_back(std::move(pi));
    });
    return out;
}

namespace detail {

template <typename Fn>
void enum_matchings(std::uint32_t free, std::vector<int>& succ, Fn&& fn) {
    if (free == 0) {
        fn(succ);
        return;
    }
    const int v = std::countr_zero(free);
    const std::uint32_t rest = free & (free - 1);
    for (std::uint32_t bits = rest; bits;) {
        const int w = std::countr_zero(bits);
        bits &= bits - 1;
        succ[v] = w;
        succ[w] = v;
        enum_matchings(rest & ~(std::uint32_t{1} << w), succ, fn);
    }
}

}  // namespace detail

inline std::vector<CyclicPartition> enumerate_stable_matchings(const PreferenceInstance& inst,
                                                               int cap = kEnumDefaultCap) {
    check_enum_cap(inst.n, cap);
    std::vector<CyclicPartition> out;
    if (inst.n % 2 != 0) return out;
    std::vector<int> succ(static_cast<std::size_t>(inst.n), -1);
    const std::uint32_t full = (std::uint32_t{1} << inst.n) - 1;
    detail::enum_matchings(full, succ, [&](const std::vector<int>& s) {
        CyclicPartition pi = CyclicPartition::from_succ(s);
        if (is_stable(inst, pi).stable) out.push_back(std::move(pi));
    });
    return out;
}

// Members whose predecessor differs across the fixed-point-free stable
// partitions of the instance.
inline std::vector<int> multiple_predecessor_members(const PreferenceInstance& inst,
                                                     int cap = kEnumDefaultCap) {
    const std::vector<CyclicPartition> stable = enumerate_stable_partitions(inst, false, cap);
    std::vector<int> out;
    if (stable.empty()) return out;
    for (int i = 0; i < inst.n; ++i) {
        const int base = stable.front().pred(i);
        for (const auto& pi : stable) {
            if (pi.pred(i) != base) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

namespace detail {

// Coefficients of exp(a) for a power series with a[0] = 0.
inline std::vector<BigRational> series_exp(const std::vector<BigRational>& a) {
    std::vector<BigRational> b(a.size());
    b[0] = BigRational(1);
    for (std::size_t k = 1; k < a.size(); ++k) {
        BigRational acc;
        for (std::size_t j = 1; j <= k; ++j)
            acc += BigRational(static_cast<long long>(j)) * a[j] * b[k - j];
        b[k] = acc / BigRational(static_cast<long long>(k));
    }
    return b;
}

inline BigInt integer_coefficient(const BigRational& c, unsigned factorial_of) {
    const BigRational scaled = c * BigRational(factorial(factorial_of));
    if (!scaled.is_integer()) throw std::logic_error("counting series produced a non-integer");
    return scaled.num();
}

}  // namespace detail

// Permutations of [m] whose cycles are all odd, of length >= 3.
inline BigInt odd_cycle_perm_count(int m) {
    if (m < 0) throw std::invalid_argument("odd_cycle_perm_count: m must be nonnegative");
    std::vector<BigRational> a(static_cast<std::size_t>(m) + 1);
    for (int j = 3; j <= m; j += 2) a[j] = BigRational(BigInt(1), BigInt(j));
    const auto b = detail::series_exp(a);
    return detail::integer_coefficient(b[m], static_cast<unsigned>(m));
}

// Same permutations counted with multiplicity = number of cycles.
inline BigInt odd_cycle_perm_count_weighted(int m) {
    if (m < 0) throw std::invalid_argument("odd_cycle_perm_count_weighted: m must be nonnegative");
    std::vector<BigRational> a(static_cast<std::size_t>(m) + 1);
    for (int j = 3; j <= m; j += 2) a[j] = BigRational(BigInt(1), BigInt(j));
    const auto b = detail::series_exp(a);
    BigRational acc;
    for (int j = 3; j <= m; j += 2) acc += a[j] * b[m - j];
    return detail::integer_coefficient(acc, static_cast<unsigned>(m));
}

// Partitions of [2 nu] into undirected circuits of even length >= 4, each
// circuit weighted by 4; equals sum over mu of 4^mu f(2 nu, mu).
inline BigInt weighted_even_circuit_covers(int nu) {
    if (nu < 0) throw std::invalid_argument("weighted_even_circuit_covers: nu must be nonnegative");
    const int deg = 2 * nu;
    std::vector<BigRational> a(static_cast<std::size_t>(deg) + 1);
    for (int j = 4; j <= deg; j += 2) a[j] = BigRational(BigInt(2), BigInt(j));
    const auto b = detail::series_exp(a);
    return detail::integer_coefficient(b[deg], static_cast<unsigned>(deg));
}

// Reduced fixed-point-free permutations of [n] with m members on odd cycles.
inline BigInt count_shapes(int n, int m) {
    if (n < 0 || m < 0 || m > n) throw std::invalid_argument("count_shapes: need 0 <= m <= n");
    if ((n - m) % 2 != 0)
        throw std::invalid_argument("count_shapes: n - m must be even");
    return binomial(static_cast<unsigned>(n), static_cast<unsigned>(m)) * odd_cycle_perm_count(m) *
           double_factorial(n - m - 1);
}

// Reduced permutations of [n] with one fixed point and m members on odd
// cycles of length >= 3.
inline BigInt count_shapes_fixed_point(int n, int m) {
    if (n < 1) throw std::invalid_argument("count_shapes_fixed_point: n must be positive");
    return BigInt(n) * count_shapes(n - 1, m);
}

}  // namespace stablepart
