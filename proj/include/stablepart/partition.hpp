#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablepart/instance.hpp"

namespace stablepart {

// A permutation of [n] viewed as a cyclic partition: each cycle is one
// "room", succ(i) is who i proposes to, pred(i) is who proposes to i.
class CyclicPartition {
public:
    int n = 0;

    static CyclicPartition from_succ(std::vector<int> succ) {
        CyclicPartition p;
        p.n = static_cast<int>(succ.size());
        if (p.n < 1) throw std::invalid_argument("partition: empty successor map");
        p.succ_ = std::move(succ);
        p.pred_.assign(static_cast<std::size_t>(p.n), -1);
        for (int i = 0; i < p.n; ++i) {
            const int s = p.succ_[i];
            if (s < 0 || s >= p.n || p.pred_[s] != -1)
                throw std::invalid_argument("partition: successor map is not a permutation");
            p.pred_[s] = i;
        }
        p.build_cycles();
        return p;
    }

    static CyclicPartition from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
        std::vector<int> succ(static_cast<std::size_t>(n), -1);
        for (const auto& c : cycles) {
            if (c.empty()) throw std::invalid_argument("partition: empty cycle");
            for (std::size_t k = 0; k < c.size(); ++k) {
                const int a = c[k];
                const int b = c[(k + 1) % c.size()];
                if (a < 0 || a >= n || succ[a] != -1)
                    throw std::invalid_argument("partition: cycles do not partition the members");
                succ[a] = b;
            }
        }
        for (int v : succ)
            if (v == -1) throw std::invalid_argument("partition: cycles do not cover every member");
        return from_succ(std::move(succ));
    }

    int succ(int i) const { return succ_[i]; }
    int pred(int i) const { return pred_[i]; }
    const std::vector<int>& succ_map() const { return succ_; }

    // Cycles in canonical form: rotated to start at the minimum member,
    // listed in increasing order of that minimum.
    const std::vector<std::vector<int>>& cycles() const { return cycles_; }

    // Odd-length cycles, fixed points included, in canonical order.
    std::vector<std::vector<int>> odd_parties() const {
        std::vector<std::vector<int>> out;
        for (const auto& c : cycles_)
            if (c.size() % 2 == 1) out.push_back(c);
        return out;
    }

    int odd_party_count() const { return odd_party_count_; }
    // Members on odd cycles of length >= 3 (fixed points excluded).
    int odd_member_count() const { return odd_member_count_; }
    int fixed_point_count() const { return fixed_point_count_; }
    // Smallest fixed point, or -1 when the permutation has none.
    int fixed_point() const { return fixed_point_; }

    bool is_reduced() const {
        for (const auto& c : cycles_)
            if (c.size() % 2 == 0 && c.size() != 2) return false;
        return true;
    }

    bool is_matching() const {
        for (const auto& c : cycles_)
            if (c.size() != 2) return false;
        return true;
    }

    // True iff {i, j} lies in D: one is the other's successor.
    bool adjacent(int i, int j) const { return succ_[i] == j || succ_[j] == i; }

    bool operator==(const CyclicPartition& o) const { return succ_ == o.succ_; }
    bool operator!=(const CyclicPartition& o) const { return !(*this == o); }

    std::string str() const {
        std::ostringstream out;
        for (const auto& c : cycles_) {
            out << "(";
            for (std::size_t k = 0; k < c.size(); ++k) out << (k ? " " : "") << c[k] + 1;
            out << ")";
        }
        return out.str();
    }

    Json to_json() const {
        Json succ = Json::array();
        for (int i = 0; i < n; ++i) succ.push_back(succ_[i] + 1);
        return Json{{"n", n}, {"succ", std::move(succ)}};
    }

    static CyclicPartition from_json(const Json& j) {
        if (!j.is_object() || !j.contains("n") || !j.contains("succ"))
            throw std::invalid_argument("partition json: need {n, succ}");
        const int n = j.at("n").get<int>();
        std::vector<int> succ;
        for (const auto& v : j.at("succ")) {
            const long long raw = v.get<long long>();
            if (raw < 1 || raw > n) throw std::invalid_argument("partition json: member id out of range");
            succ.push_back(static_cast<int>(raw - 1));
        }
        if (static_cast<int>(succ.size()) != n)
            throw std::invalid_argument("partition json: succ length differs from n");
        return from_succ(std::move(succ));
    }

private:
    void build_cycles() {
        cycles_.clear();
        odd_member_count_ = 0;
        odd_party_count_ = 0;
        fixed_point_count_ = 0;
        fixed_point_ = -1;
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            std::vector<int> cycle;
            for (int w = v; !seen[w]; w = succ_[w]) {
                seen[w] = 1;
                cycle.push_back(w);
            }
            if (cycle.size() % 2 == 1) {
                ++odd_party_count_;
                if (cycle.size() == 1) {
                    ++fixed_point_count_;
                    if (fixed_point_ == -1) fixed_point_ = v;
                } else {
                    odd_member_count_ += static_cast<int>(cycle.size());
                }
            }
            cycles_.push_back(std::move(cycle));
        }
    }

    std::vector<int> succ_;
    std::vector<int> pred_;
    std::vector<std::vector<int>> cycles_;
    int odd_member_count_ = 0;
    int odd_party_count_ = 0;
    int fixed_point_count_ = 0;
    int fixed_point_ = -1;
};

struct StabilityVerdict {
    enum class Kind { None, PrefersPredecessor, BlockingPair, ExchangeBlockingPair };

    bool stable = true;
    Kind kind = Kind::None;
    int i = -1;
    int j = -1;

    explicit operator bool() const { return stable; }

    static StabilityVerdict ok() { return {}; }
    static StabilityVerdict fail(Kind k, int i, int j = -1) { return {false, k, i, j}; }
};

inline void require_same_size(const PreferenceInstance& inst, const CyclicPartition& pi) {
    if (inst.n != pi.n) throw std::invalid_argument("instance and partition sizes differ");
}

// Nobody prefers their predecessor to their successor, and no two
// non-adjacent members prefer each other to their predecessors.
inline StabilityVerdict is_stable(const PreferenceInstance& inst, const CyclicPartition& pi) {
    require_same_size(inst, pi);
    const int n = inst.n;
    for (int i = 0; i < n; ++i) {
        const int s = pi.succ(i);
        const int p = pi.pred(i);
        if (s != p && inst.rank(i, s) > inst.rank(i, p))
            return StabilityVerdict::fail(StabilityVerdict::Kind::PrefersPredecessor, i);
    }
    for (int i = 0; i < n; ++i) {
        const int* ri = inst.rank_row(i);
        const int pi_rank = ri[pi.pred(i)];
        for (int j = i + 1; j < n; ++j) {
            if (pi.adjacent(i, j)) continue;
            if (ri[j] < pi_rank && inst.rank(j, i) < inst.rank(j, pi.pred(j)))
                return StabilityVerdict::fail(StabilityVerdict::Kind::BlockingPair, i, j);
        }
    }
    return StabilityVerdict::ok();
}

// No two members each prefer the other's predecessor to their own.
inline StabilityVerdict is_exchange_stable(const PreferenceInstance& inst, const CyclicPartition& pi) {
    require_same_size(inst, pi);
    const int n = inst.n;
    for (int i = 0; i < n; ++i) {
        const int* ri = inst.rank_row(i);
        const int own_i = ri[pi.pred(i)];
        for (int j = i + 1; j < n; ++j) {
            if (ri[pi.pred(j)] < own_i && inst.rank(j, pi.pred(i)) < inst.rank(j, pi.pred(j)))
                return StabilityVerdict::fail(StabilityVerdict::Kind::ExchangeBlockingPair, i, j);
        }
    }
    return StabilityVerdict::ok();
}

inline StabilityVerdict is_doubly_stable(const PreferenceInstance& inst, const CyclicPartition& pi) {
    const StabilityVerdict plain = is_stable(inst, pi);
    if (!plain.stable) return plain;
    return is_exchange_stable(inst, pi);
}

// Splits every even cycle of length >= 4 into transpositions of adjacent
// members. choice holds one flag per such cycle, in canonical cycle order:
// false pairs (c0,c1)(c2,c3)..., true pairs (c1,c2)...(c_last,c0).
inline CyclicPartition reduce(const CyclicPartition& pi, const std::vector<bool>& choice) {
    std::vector<int> succ = pi.succ_map();
    std::size_t which = 0;
    for (const auto& c : pi.cycles()) {
        if (c.size() % 2 != 0 || c.size() == 2) continue;
        if (which >= choice.size())
            throw std::invalid_argument("reduce: one choice flag needed per even cycle of length >= 4");
        const std::size_t offset = choice[which++] ? 1 : 0;
        for (std::size_t k = 0; k < c.size(); k += 2) {
            const int a = c[(k + offset) % c.size()];
            const int b = c[(k + 1 + offset) % c.size()];
            succ[a] = b;
            succ[b] = a;
        }
    }
    if (which != choice.size())
        throw std::invalid_argument("reduce: one choice flag needed per even cycle of length >= 4");
    return CyclicPartition::from_succ(std::move(succ));
}

inline CyclicPartition reduce(const CyclicPartition& pi, bool choice = false) {
    std::size_t count = 0;
    for (const auto& c : pi.cycles())
        if (c.size() % 2 == 0 && c.size() != 2) ++count;
    return reduce(pi, std::vector<bool>(count, choice));
}

// Sum over members of the rank of their predecessor; a fixed point
// contributes its self-rank n.
inline std::int64_t rank_sum(const PreferenceInstance& inst, const CyclicPartition& pi) {
    require_same_size(inst, pi);
    std::int64_t total = 0;
    for (int i = 0; i < inst.n; ++i) total += inst.rank(i, pi.pred(i));
    return total;
}

inline int max_predecessor_rank(const PreferenceInstance& inst, const CyclicPartition& pi) {
    require_same_size(inst, pi);
    int best = 0;
    for (int i = 0; i < inst.n; ++i) best = std::max(best, inst.rank(i, pi.pred(i)));
    return best;
}

// True iff every member's predecessor sits within the top d ranks.
inline bool rank_profile_within(const PreferenceInstance& inst, const CyclicPartition& pi, int d) {
    require_same_size(inst, pi);
    for (int i = 0; i < inst.n; ++i)
        if (inst.rank(i, pi.pred(i)) > d) return false;
    return true;
}

// All unordered pairs, not matched together, who prefer each other to their
// partners. The input must be a perfect matching.
inline std::vector<std::pair<int, int>> blocking_pairs(const PreferenceInstance& inst,
                                                       const CyclicPartition& m) {
    require_same_size(inst, m);
    if (!m.is_matching()) throw std::invalid_argument("blocking_pairs: input is not a perfect matching");
    std::vector<std::pair<int, int>> out;
    const int n = inst.n;
    for (int i = 0; i < n; ++i) {
        const int* ri = inst.rank_row(i);
        const int own_i = ri[m.succ(i)];
        for (int j = i + 1; j < n; ++j) {
            if (m.succ(i) == j) continue;
            if (ri[j] < own_i && inst.rank(j, i) < inst.rank(j, m.succ(j)))
                out.emplace_back(i, j);
        }
    }
    return out;
}

}  // namespace stablepart
