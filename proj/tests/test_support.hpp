#pragma once

// Test-side helpers and independent oracles. The naive checkers below decide
// stability by direct payoff loops over substitute(), deliberately avoiding
// the scan machinery in equilibria.hpp.

#include <memory>
#include <vector>

#include <tribegames/core.hpp>
#include <tribegames/equilibria.hpp>
#include <tribegames/rng.hpp>

namespace testsupport {

using namespace tribegames;

inline Game make_table_game(std::vector<int> counts, Orientation orientation,
                            std::vector<std::vector<Rational>> table) {
    auto shared = std::make_shared<std::vector<std::vector<Rational>>>(std::move(table));
    auto space = std::make_shared<ProfileSpace>(counts);
    Game g;
    g.orientation = orientation;
    g.strategy_counts = std::move(counts);
    g.payoff = [shared, space](int i, const StrategyProfile& s) {
        return (*shared)[static_cast<std::size_t>(i)][static_cast<std::size_t>(space->index_of(s))];
    };
    return g;
}

inline Game random_table_game(Rng& rng, int max_players, int max_strategies, Orientation orientation) {
    int n = rng.between(2, max_players);
    std::vector<int> counts;
    for (int i = 0; i < n; ++i) counts.push_back(rng.between(1, max_strategies));
    ProfileSpace space(counts);
    std::uint64_t total = space.total();
    std::vector<std::vector<Rational>> table(static_cast<std::size_t>(n));
    for (auto& row : table) {
        row.reserve(static_cast<std::size_t>(total));
        for (std::uint64_t p = 0; p < total; ++p) row.emplace_back(rng.between(0, 6));
    }
    return make_table_game(counts, orientation, std::move(table));
}

inline Rational naive_tribe_payoff(const Game& g, const TribePartition& tau, int player, const StrategyProfile& s) {
    Rational total;
    for (int j = 0; j < g.player_count(); ++j)
        if (tau[j] == tau[player]) total += g.payoff(j, s);
    return total;
}

inline bool naive_unilateral(const Game& g, const TribePartition& tau, const StrategyProfile& s) {
    for (int i = 0; i < g.player_count(); ++i) {
        Rational cur = naive_tribe_payoff(g, tau, i, s);
        for (int t = 0; t < g.strategy_counts[static_cast<std::size_t>(i)]; ++t) {
            if (t == s[i]) continue;
            StrategyProfile dev = substitute(s, {{i, t}});
            if (improves(g.orientation, naive_tribe_payoff(g, tau, i, dev), cur)) return false;
        }
    }
    return true;
}

// one extra player, one strategy, identically zero payoff
inline Game pad_with_zero_player(const Game& base) {
    Game padded;
    padded.orientation = base.orientation;
    padded.strategy_counts = base.strategy_counts;
    padded.strategy_counts.push_back(1);
    int n = base.player_count();
    auto inner = base.payoff;
    padded.payoff = [inner, n](int i, const StrategyProfile& s) {
        if (i == n) return Rational(0);
        StrategyProfile projected(std::vector<int>(s.choice.begin(), s.choice.end() - 1));
        return inner(i, projected);
    };
    return padded;
}

} // namespace testsupport
