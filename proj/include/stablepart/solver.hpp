#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stablepart/instance.hpp"
#include "stablepart/partition.hpp"

namespace stablepart {

struct SolveStats {
    std::uint64_t proposals = 0;
    std::uint64_t rotations_eliminated = 0;
    std::uint64_t odd_parties_extracted = 0;
};

struct SolveResult {
    CyclicPartition partition;
    std::vector<std::vector<int>> odd_parties;
    int odd_party_count = 0;
    bool solvable = false;
    SolveStats stats;
};

namespace detail {

// Proposal rounds over doubly linked preference lists, then rotation
// elimination. A rotation is peeled off whole as an odd party only once it
// is terminal: its targets are exactly its proposers and every member's
// list is down to [successor, predecessor]. Singular-looking rotations on
// longer lists (preference rings) still get eliminated; elimination is also
// what splits terminal even rings into their two matched pairs.
class PartitionSolver {
public:
    explicit PartitionSolver(const PreferenceInstance& inst)
        : inst_(inst),
          n_(inst.n),
          nxt_(static_cast<std::size_t>(n_) * n_),
          prv_(static_cast<std::size_t>(n_) * n_),
          present_(static_cast<std::size_t>(n_) * n_, 0),
          sz_(static_cast<std::size_t>(n_), n_ - 1),
          holder_(static_cast<std::size_t>(n_), -1),
          gone_(static_cast<std::size_t>(n_), 0),
          stamp_(static_cast<std::size_t>(n_), 0),
          seq_pos_(static_cast<std::size_t>(n_), 0) {
        for (int i = 0; i < n_; ++i) {
            const std::size_t row = static_cast<std::size_t>(i) * n_;
            for (int p = 0; p < n_ - 1; ++p) {
                nxt_[row + p] = p + 1 < n_ - 1 ? p + 1 : sentinel();
                prv_[row + p] = p > 0 ? p - 1 : sentinel();
                present_[row + p] = 1;
            }
            nxt_[row + sentinel()] = n_ > 1 ? 0 : sentinel();
            prv_[row + sentinel()] = n_ > 1 ? n_ - 2 : sentinel();
        }
    }

    SolveResult run() {
        for (int i = 0; i < n_; ++i) queue_.push_back(i);
        run_proposals(true);

        int ptr = 0;
        while (true) {
            while (ptr < n_ && (gone_[ptr] || sz_[ptr] < 2)) ++ptr;
            if (ptr == n_) break;
            find_rotation(ptr);
            if (rotation_is_singular() && rotation_is_terminal())
                extract_party();
            else
                eliminate_rotation();
        }
        return assemble();
    }

private:
    int sentinel() const { return n_ - 1; }

    int cand(int i, int p) const { return inst_.pref_at(i, p + 1); }
    int pos_of(int i, int j) const { return inst_.rank(i, j) - 1; }

    bool empty_list(int i) const {
        return nxt_[static_cast<std::size_t>(i) * n_ + sentinel()] == sentinel();
    }
    int first(int i) const { return cand(i, nxt_[static_cast<std::size_t>(i) * n_ + sentinel()]); }
    int last(int i) const { return cand(i, prv_[static_cast<std::size_t>(i) * n_ + sentinel()]); }
    int second(int i) const {
        const std::size_t row = static_cast<std::size_t>(i) * n_;
        return cand(i, nxt_[row + nxt_[row + sentinel()]]);
    }

    void unlink(int i, int p) {
        const std::size_t row = static_cast<std::size_t>(i) * n_;
        if (!present_[row + p]) throw std::logic_error("solver: deleting an absent list entry");
        present_[row + p] = 0;
        nxt_[row + prv_[row + p]] = nxt_[row + p];
        prv_[row + nxt_[row + p]] = prv_[row + p];
        --sz_[i];
    }

    void delete_pair(int i, int j) {
        unlink(i, pos_of(i, j));
        unlink(j, pos_of(j, i));
        if (holder_[i] == j) holder_[i] = -1;
        if (holder_[j] == i) holder_[j] = -1;
    }

    void run_proposals(bool allow_reject) {
        while (qhead_ < queue_.size()) {
            const int x = queue_[qhead_++];
            if (empty_list(x)) {
                if (!allow_reject || fixed_point_ != -1)
                    throw std::logic_error("solver: member ran out of candidates");
                fixed_point_ = x;
                gone_[x] = 1;
                continue;
            }
            const int y = first(x);
            ++stats_.proposals;
            const int old = holder_[y];
            while (last(y) != x) delete_pair(y, last(y));
            holder_[y] = x;
            if (old != -1) queue_.push_back(old);
        }
        queue_.clear();
        qhead_ = 0;
    }

    // Walks v -> holder(second(v)) from an active member until it revisits
    // someone; the closed part is the rotation.
    void find_rotation(int start) {
        ++epoch_;
        rot_a_.clear();
        int v = start;
        while (stamp_[v] != epoch_) {
            stamp_[v] = epoch_;
            seq_pos_[v] = static_cast<int>(rot_a_.size());
            rot_a_.push_back(v);
            v = last(second(v));
        }
        rot_a_.erase(rot_a_.begin(), rot_a_.begin() + seq_pos_[v]);
        if (rot_a_.size() < 2) throw std::logic_error("solver: degenerate rotation");
        rot_b_.clear();
        for (int a : rot_a_) rot_b_.push_back(first(a));
    }

    bool rotation_is_singular() {
        ++epoch_;
        for (int a : rot_a_) stamp_[a] = epoch_;
        for (int b : rot_b_)
            if (stamp_[b] != epoch_) return false;
        ++epoch_;
        for (int b : rot_b_) {
            if (stamp_[b] == epoch_) throw std::logic_error("solver: repeated rotation target");
            stamp_[b] = epoch_;
        }
        return true;
    }

    // With every list at [successor, predecessor] a singular rotation is a
    // lone odd ring; anything longer is still reducible and must be
    // eliminated, not extracted.
    bool rotation_is_terminal() const {
        for (int a : rot_a_)
            if (sz_[a] != 2) return false;
        return true;
    }

    void eliminate_rotation() {
        ++stats_.rotations_eliminated;
        for (std::size_t k = 0; k < rot_a_.size(); ++k) delete_pair(rot_a_[k], rot_b_[k]);
        for (int a : rot_a_) queue_.push_back(a);
        run_proposals(false);
    }

    void extract_party() {
        ++stats_.odd_parties_extracted;
        if (rot_a_.size() % 2 == 0) throw std::logic_error("solver: even rotation closed on itself");
        const int start = *std::min_element(rot_a_.begin(), rot_a_.end());
        std::vector<int> cycle;
        int v = start;
        do {
            cycle.push_back(v);
            v = first(v);
        } while (v != start && cycle.size() <= rot_a_.size());
        if (v != start || cycle.size() != rot_a_.size())
            throw std::logic_error("solver: closed rotation is not a single cycle");
        for (int c : cycle) {
            while (!empty_list(c)) delete_pair(c, first(c));
            gone_[c] = 1;
        }
        parties_.push_back(std::move(cycle));
    }

    SolveResult assemble() {
        std::vector<int> succ(static_cast<std::size_t>(n_), -1);
        if (fixed_point_ != -1) succ[fixed_point_] = fixed_point_;
        for (const auto& cycle : parties_)
            for (std::size_t k = 0; k < cycle.size(); ++k)
                succ[cycle[k]] = cycle[(k + 1) % cycle.size()];
        for (int x = 0; x < n_; ++x) {
            if (succ[x] != -1) continue;
            if (gone_[x] || sz_[x] != 1) throw std::logic_error("solver: unmatched member after phase 2");
            const int y = first(x);
            if (y == x || first(y) != x) throw std::logic_error("solver: final proposals are not mutual");
            succ[x] = y;
            succ[y] = x;
        }
        SolveResult out;
        out.partition = CyclicPartition::from_succ(std::move(succ));
        out.odd_parties = out.partition.odd_parties();
        out.odd_party_count = out.partition.odd_party_count();
        out.solvable = out.odd_party_count == 0;
        out.stats = stats_;
        return out;
    }

    const PreferenceInstance& inst_;
    int n_;
    std::vector<std::int32_t> nxt_;
    std::vector<std::int32_t> prv_;
    std::vector<char> present_;
    std::vector<int> sz_;
    std::vector<int> holder_;
    std::vector<char> gone_;
    std::vector<int> stamp_;
    std::vector<int> seq_pos_;
    std::vector<int> queue_;
    std::size_t qhead_ = 0;
    std::vector<int> rot_a_;
    std::vector<int> rot_b_;
    std::vector<std::vector<int>> parties_;
    int fixed_point_ = -1;
    int epoch_ = 0;
    SolveStats stats_;
};

}  // namespace detail

inline SolveResult solve_stable_partition(const PreferenceInstance& inst) {
    return detail::PartitionSolver(inst).run();
}

inline bool is_solvable(const PreferenceInstance& inst) {
    return solve_stable_partition(inst).solvable;
}

struct PartialMatching {
    std::vector<int> mate;  // -1 for unmatched members
    int pair_count = 0;
    std::vector<int> unmatched;
};

// Keeps every transposition of the stable partition and pairs consecutive
// members inside each odd party, leaving that party's last canonical member
// out. The result has (n - #odd parties) / 2 pairs and no blocking pair.
inline PartialMatching max_stable_matching(const SolveResult& solved) {
    const CyclicPartition& pi = solved.partition;
    PartialMatching out;
    out.mate.assign(static_cast<std::size_t>(pi.n), -1);
    for (const auto& c : pi.cycles()) {
        const std::size_t paired = c.size() - c.size() % 2;
        for (std::size_t k = 0; k < paired; k += 2) {
            out.mate[c[k]] = c[k + 1];
            out.mate[c[k + 1]] = c[k];
            ++out.pair_count;
        }
        if (c.size() % 2 == 1) out.unmatched.push_back(c.back());
    }
    std::sort(out.unmatched.begin(), out.unmatched.end());
    return out;
}

inline PartialMatching max_stable_matching(const PreferenceInstance& inst) {
    return max_stable_matching(solve_stable_partition(inst));
}

// Completes the maximum stable matching to a perfect one by pairing the
// leftover members in increasing order. Only defined for even n.
inline CyclicPartition complete_matching_heuristic(const SolveResult& solved) {
    if (solved.partition.n % 2 != 0)
        throw std::invalid_argument("complete_matching_heuristic: n must be even");
    PartialMatching base = max_stable_matching(solved);
    std::vector<int> succ(base.mate.begin(), base.mate.end());
    for (std::size_t k = 0; k + 1 < base.unmatched.size(); k += 2) {
        succ[base.unmatched[k]] = base.unmatched[k + 1];
        succ[base.unmatched[k + 1]] = base.unmatched[k];
    }
    return CyclicPartition::from_succ(std::move(succ));
}

inline CyclicPartition complete_matching_heuristic(const PreferenceInstance& inst) {
    return complete_matching_heuristic(solve_stable_partition(inst));
}

}  // namespace stablepart
