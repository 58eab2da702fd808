#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stablepart/rng.hpp"

namespace stablepart {

using Json = nlohmann::ordered_json;

// Latent preference scores: x(i, j) for ordered pairs i != j, each uniform on
// [0,1] under sampling; member i ranks the others by increasing x(i, .).
struct LatentMatrix {
    int n = 0;
    std::vector<double> x;  // row-major n*n, diagonal unused

    double at(int i, int j) const { return x[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return x[static_cast<std::size_t>(i) * n + j]; }

    static LatentMatrix sample(int n, SplitRng& rng) {
        LatentMatrix m;
        m.n = n;
        m.x.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) m.at(i, j) = rng.uniform01();
        return m;
    }
};

inline LatentMatrix sample_latent(int n, std::uint64_t seed) {
    SplitRng rng(seed);
    return LatentMatrix::sample(n, rng);
}

// A complete strict preference profile on n members (0-based internally,
// 1-based in every serialized form). pref row i lists the other n-1 members
// from most to least preferred; rank(i, j) is the 1-based position of j in
// row i, with the self-rank convention rank(i, i) = n.
class PreferenceInstance {
public:
    int n = 0;

    static PreferenceInstance from_pref(int n, const std::vector<std::vector<int>>& rows) {
        validate_n(n);
        if (static_cast<int>(rows.size()) != n)
            throw std::invalid_argument("instance: expected " + std::to_string(n) + " preference rows");
        PreferenceInstance inst;
        inst.n = n;
        inst.pref_.assign(static_cast<std::size_t>(n) * (n - 1), 0);
        inst.rank_.assign(static_cast<std::size_t>(n) * n, 0);
        std::vector<char> seen(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n - 1)
                throw std::invalid_argument("instance: row " + std::to_string(i + 1) + " must list the other n-1 members");
            std::fill(seen.begin(), seen.end(), 0);
            for (int r = 0; r < n - 1; ++r) {
                const int j = rows[i][r];
                if (j < 0 || j >= n || j == i || seen[j])
                    throw std::invalid_argument("instance: row " + std::to_string(i + 1) + " is not a permutation of the others");
                seen[j] = 1;
                inst.pref_mut(i, r) = j;
                inst.rank_mut(i, j) = r + 1;
            }
            inst.rank_mut(i, i) = n;
        }
        return inst;
    }

    // Member at 1-based rank r in i's list.
    int pref_at(int i, int r) const { return pref_[static_cast<std::size_t>(i) * (n - 1) + (r - 1)]; }
    // 1-based rank of j in i's list; rank(i, i) == n.
    int rank(int i, int j) const { return rank_[static_cast<std::size_t>(i) * n + j]; }
    const int* rank_row(int i) const { return rank_.data() + static_cast<std::size_t>(i) * n; }

    std::vector<int> pref_row(int i) const {
        std::vector<int> row(static_cast<std::size_t>(n - 1));
        for (int r = 1; r <= n - 1; ++r) row[r - 1] = pref_at(i, r);
        return row;
    }

    // Every row an independent uniform permutation; row i is drawn from its own
    // RNG stream so the result is independent of evaluation order.
    static PreferenceInstance generate_uniform(int n, std::uint64_t seed) {
        validate_n(n);
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::vector<int> row;
            row.reserve(static_cast<std::size_t>(n - 1));
            for (int j = 0; j < n; ++j)
                if (j != i) row.push_back(j);
            SplitRng rng(seed, static_cast<std::uint64_t>(i));
            rng.shuffle(row);
            rows[i] = std::move(row);
        }
        return from_pref(n, rows);
    }

    // Ranks others by increasing latent score. Ties are rejected, not broken:
    // with continuous scores they indicate a caller bug.
    static PreferenceInstance from_latent(const LatentMatrix& m) {
        validate_n(m.n);
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.n));
        for (int i = 0; i < m.n; ++i) {
            std::vector<int> row;
            row.reserve(static_cast<std::size_t>(m.n - 1));
            for (int j = 0; j < m.n; ++j)
                if (j != i) row.push_back(j);
            std::sort(row.begin(), row.end(), [&](int a, int b) { return m.at(i, a) < m.at(i, b); });
            for (std::size_t k = 1; k < row.size(); ++k)
                if (m.at(i, row[k - 1]) == m.at(i, row[k]))
                    throw std::invalid_argument("from_latent: tied scores in row " + std::to_string(i + 1));
            rows[i] = std::move(row);
        }
        return from_pref(m.n, rows);
    }

    // Text form: first line n, then n rows of 1-based preference lists.
    std::string to_text() const {
        std::ostringstream out;
        out << n << "\n";
        for (int i = 0; i < n; ++i) {
            for (int r = 1; r <= n - 1; ++r) out << (r > 1 ? " " : "") << pref_at(i, r) + 1;
            out << "\n";
        }
        return out.str();
    }

    static PreferenceInstance parse_text(std::string_view text) {
        std::istringstream in{std::string(text)};
        long long n = 0;
        if (!(in >> n)) throw std::invalid_argument("instance text: missing member count");
        if (n < 2 || n > 1000000) throw std::invalid_argument("instance text: bad member count");
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
        for (auto& row : rows) {
            row.resize(static_cast<std::size_t>(n - 1));
            for (auto& v : row) {
                long long raw = 0;
                if (!(in >> raw)) throw std::invalid_argument("instance text: truncated preference rows");
                if (raw < 1 || raw > n) throw std::invalid_argument("instance text: member id out of range");
                v = static_cast<int>(raw - 1);
            }
        }
        long long extra = 0;
        if (in >> extra) throw std::invalid_argument("instance text: trailing data");
        return from_pref(static_cast<int>(n), rows);
    }

    Json to_json() const {
        Json rows = Json::array();
        for (int i = 0; i < n; ++i) {
            Json row = Json::array();
            for (int r = 1; r <= n - 1; ++r) row.push_back(pref_at(i, r) + 1);
            rows.push_back(std::move(row));
        }
        return Json{{"n", n}, {"pref", std::move(rows)}};
    }

    static PreferenceInstance from_json(const Json& j) {
        if (!j.is_object() || !j.contains("n") || !j.contains("pref"))
            throw std::invalid_argument("instance json: need {n, pref}");
        const int n = j.at("n").get<int>();
        std::vector<std::vector<int>> rows;
        for (const auto& row : j.at("pref")) {
            std::vector<int> r;
            for (const auto& v : row) {
                const long long raw = v.get<long long>();
                if (raw < 1 || raw > n) throw std::invalid_argument("instance json: member id out of range");
                r.push_back(static_cast<int>(raw - 1));
            }
            rows.push_back(std::move(r));
        }
        return from_pref(n, rows);
    }

private:
    static void validate_n(int n) {
        if (n < 2) throw std::invalid_argument("instance: n must be at least 2");
    }
    int& pref_mut(int i, int r0) { return pref_[static_cast<std::size_t>(i) * (n - 1) + r0]; }
    int& rank_mut(int i, int j) { return rank_[static_cast<std::size_t>(i) * n + j]; }

    std::vector<int> pref_;  // n x (n-1), 0-based members
    std::vector<int> rank_;  // n x n, rank[i][i] = n
};

}  // namespace stablepart
