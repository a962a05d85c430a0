#pragma once

#include <memory>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace tribegames {

// Social grouping game: players are nodes of a weighted directed graph and
// declare membership in one of clique_count cliques. weight[i][j] is the
// benefit player j draws from sharing a clique with i; the matrix need not
// be symmetric, the diagonal must be zero.
struct GroupingSpec {
    int clique_count = 2;
    std::vector<std::vector<Rational>> weight;

    int player_count() const { return static_cast<int>(weight.size()); }

    void validate() const {
        if (clique_count < 2) throw validation_error("grouping: need at least two cliques");
        if (weight.empty()) throw validation_error("grouping: need at least one player");
        for (std::size_t i = 0; i < weight.size(); ++i) {
            if (weight[i].size() != weight.size()) throw validation_error("grouping: weight matrix not square");
            if (!weight[i][i].is_zero()) throw validation_error("grouping: nonzero diagonal weight");
            for (const Rational& w : weight[i])
                if (w.sign() < 0) throw validation_error("grouping: negative weight");
        }
    }

    // welfare of the all-in-one-clique optimum
    Rational total_weight() const {
        Rational total;
        for (const auto& row : weight)
            for (const Rational& w : row) total += w;
        return total;
    }
};

inline Game build_grouping_game(const GroupingSpec& spec) {
    spec.validate();
    auto shared = std::make_shared<GroupingSpec>(spec);
    Game g;
    g.orientation = Orientation::UtilityMax;
    g.strategy_counts.assign(static_cast<std::size_t>(spec.player_count()), spec.clique_count);
    g.payoff = [shared](int i, const StrategyProfile& s) {
        const auto& w = shared->weight;
        int clique = s.choice[static_cast<std::size_t>(i)];
        Rational u;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            if (s.choice[j] == clique) u += w[j][static_cast<std::size_t>(i)];
        }
        return u;
    };
    return g;
}

enum class GroupingVariant { Selfish, Tribal };

struct GroupingInstance {
    GroupingSpec spec;
    TribePartition partition;
    StrategyProfile profile;
};

// Four players a,b,c,d on a cycle, two cliques, witness split {a,d} / {b,c}.
// Selfish: all eight directed weights 1, singleton tribes. Tribal: weights 2
// on a<->b and c<->d, 1 on b<->c and d<->a, tribes {a,d} and {b,c}.
inline GroupingInstance gen_four_cycle(GroupingVariant variant) {
    const int a = 0, b = 1, c = 2, d = 3;
    GroupingSpec spec;
    spec.clique_count = 2;
    spec.weight.assign(4, std::vector<Rational>(4));
    Rational strong = variant == GroupingVariant::Tribal ? Rational(2) : Rational(1);
    Rational weak(1);
    spec.weight[a][b] = spec.weight[b][a] = strong;
    spec.weight[c][d] = spec.weight[d][c] = strong;
    spec.weight[b][c] = spec.weight[c][b] = weak;
    spec.weight[d][a] = spec.weight[a][d] = weak;
    TribePartition tau = variant == GroupingVariant::Tribal ? TribePartition({0, 1, 1, 0}) : singleton_partition(4);
    return {std::move(spec), std::move(tau), StrategyProfile({0, 1, 1, 0})};
}

// 2k players in pairs (a_i, b_i), k cliques. Pair members value each other 1;
// a-players (resp. b-players) of different pairs value each other `cross`
// (1 for the selfish variant, 2 for the tribal one, where each pair also
// forms a tribe). Witness profile: clique i = pair i.
inline GroupingInstance gen_pair_cliques(int k, GroupingVariant variant) {
    if (k < 2) throw validation_error("pair-clique family needs k >= 2");
    int n = 2 * k;
    GroupingSpec spec;
    spec.clique_count = k;
    spec.weight.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    Rational cross = variant == GroupingVariant::Tribal ? Rational(2) : Rational(1);
    auto A = [](int i) { return 2 * i; };
    auto B = [](int i) { return 2 * i + 1; };
    for (int i = 0; i < k; ++i) {
        spec.weight[static_cast<std::size_t>(A(i))][static_cast<std::size_t>(B(i))] = Rational(1);
        spec.weight[static_cast<std::size_t>(B(i))][static_cast<std::size_t>(A(i))] = Rational(1);
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            spec.weight[static_cast<std::size_t>(A(i))][static_cast<std::size_t>(A(j))] = cross;
            spec.weight[static_cast<std::size_t>(B(i))][static_cast<std::size_t>(B(j))] = cross;
        }
    }
    std::vector<int> tribe(static_cast<std::size_t>(n));
    std::vector<int> choice(static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i) {
        tribe[static_cast<std::size_t>(A(i))] = variant == GroupingVariant::Tribal ? i : A(i);
        tribe[static_cast<std::size_t>(B(i))] = variant == GroupingVariant::Tribal ? i : B(i);
        choice[static_cast<std::size_t>(A(i))] = i;
        choice[static_cast<std::size_t>(B(i))] = i;
    }
    return {std::move(spec), TribePartition(std::move(tribe)), StrategyProfile(std::move(choice))};
}

// Unit-weight 4-cycle with tribes crossing the cliques: tribes {a,c} and
// {b,d}, witness split {a,d} / {b,c}. Each tribe then has one member in each
// clique, which is what makes the profile stable against whole-tribe moves.
inline GroupingInstance gen_crossed_cycle() {
    GroupingInstance inst = gen_four_cycle(GroupingVariant::Selfish);
    inst.partition = TribePartition({0, 1, 0, 1});
    return inst;
}

inline GroupingSpec random_grouping_spec(Rng& rng, int max_players, int clique_count, int max_weight) {
    int n = rng.between(2, max_players);
    GroupingSpec spec;
    spec.clique_count = clique_count;
    spec.weight.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) spec.weight[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(rng.between(0, max_weight));
    return spec;
}

} // namespace tribegames
