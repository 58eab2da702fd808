#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stablepart {

// Thrown when an operation would exceed an explicit expansion or enumeration cap.
// The CLI maps it to its own exit code so callers can tell "too big" from "bad input".
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic pairwise (tree) summation: the result depends only on the order
// of `v`, never on chunking or thread count.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

// Runs fn(i) for i in [0, count) on `workers` threads. Work is handed out in
// contiguous blocks via an atomic cursor; fn must write results only to slots
// indexed by i so the outcome is independent of the schedule.
template <typename Fn>
void parallel_for_index(std::uint64_t count, int workers, Fn&& fn, std::uint64_t block = 1024) {
    if (workers <= 1 || count < 2 * block) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> cursor{0};
    auto body = [&] {
        for (;;) {
            const std::uint64_t begin = cursor.fetch_add(block);
            if (begin >= count) return;
            const std::uint64_t end = std::min(begin + block, count);
            for (std::uint64_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
}

// Mean and standard error with deterministic aggregation. Values are reduced
// per fixed-size chunk, then chunks are combined with pairwise summation in
// index order.
struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MeanStdErr mean_std_error(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return {};
    if (n == 1) return {values[0], 0.0};
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> sums(chunks), sqsums(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        double s = 0.0, s2 = 0.0;
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            s += values[i];
            s2 += values[i] * values[i];
        }
        sums[c] = s;
        sqsums[c] = s2;
    }
    const double total = pairwise_sum(sums);
    const double total_sq = pairwise_sum(sqsums);
    const double mean = total / static_cast<double>(n);
    double var = (total_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    if (var < 0.0) var = 0.0;  // guard tiny negative from rounding
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace stablepart
