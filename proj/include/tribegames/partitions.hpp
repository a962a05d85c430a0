#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core.hpp"

namespace tribegames {

// Bell numbers via the triangle recurrence; saturates at 2^64-1.
inline std::uint64_t bell_number(int n) {
    std::vector<std::vector<unsigned __int128>> tri;
    tri.push_back({1});
    for (int i = 1; i <= n; ++i) {
        std::vector<unsigned __int128> row;
        row.push_back(tri.back().back());
        for (std::size_t j = 0; j < tri.back().size(); ++j) {
            unsigned __int128 v = row.back() + tri.back()[j];
            if (v > UINT64_MAX) v = UINT64_MAX;
            row.push_back(v);
        }
        tri.push_back(std::move(row));
    }
    return static_cast<std::uint64_t>(tri[static_cast<std::size_t>(n)][0]);
}

// Stirling numbers of the second kind, S(n, k), saturating.
inline std::uint64_t stirling2(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<std::vector<unsigned __int128>> s(static_cast<std::size_t>(n) + 1,
                                                  std::vector<unsigned __int128>(static_cast<std::size_t>(k) + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= std::min(i, k); ++j) {
            unsigned __int128 v = static_cast<unsigned>(j) * s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] +
                                  s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            if (v > UINT64_MAX) v = UINT64_MAX;
            s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        }
    return static_cast<std::uint64_t>(s[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
}

// All set partitions of `players` in canonical restricted-growth-string order.
// With tribe_count set, only partitions with exactly that many tribes.
inline std::vector<TribePartition> sweep_partitions(int players, std::optional<int> tribe_count = std::nullopt,
                                                    const Budgets& budgets = {}) {
    if (players < 1) throw validation_error("sweep_partitions: need at least one player");
    if (tribe_count && (*tribe_count < 1 || *tribe_count > players))
        return {};
    std::uint64_t count = tribe_count ? stirling2(players, *tribe_count) : bell_number(players);
    if (count > budgets.profile_budget)
        throw budget_error("partition sweep of " + std::to_string(count) + " partitions exceeds budget of " +
                           std::to_string(budgets.profile_budget));

    std::vector<TribePartition> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> rgs(static_cast<std::size_t>(players), 0);
    // rgs[i] <= 1 + max(rgs[0..i-1]); depth-first in lexicographic order
    auto rec = [&](auto&& self, int pos, int max_used) -> void {
        if (pos == players) {
            if (!tribe_count || max_used + 1 == *tribe_count) out.emplace_back(rgs);
            return;
        }
        int remaining = players - pos;
        for (int t = 0; t <= max_used + 1; ++t) {
            if (tribe_count) {
                int reached = std::max(max_used, t) + 1;
                if (reached > *tribe_count) break;
                if (reached + remaining - 1 < *tribe_count) continue;
            }
            rgs[static_cast<std::size_t>(pos)] = t;
            self(self, pos + 1, std::max(max_used, t));
        }
    };
    rgs[0] = 0;
    rec(rec, 1, 0);
    return out;
}

} // namespace tribegames
