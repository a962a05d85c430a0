#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace tribegames {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// dimension or index mismatches between related objects
class structural_error : public error {
public:
    using error::error;
};

// a spec whose data violates its own invariants
class validation_error : public error {
public:
    using error::error;
};

// missing or contradictory run configuration (e.g. pairwise without adjacency)
class config_error : public error {
public:
    using error::error;
};

// explicit refusal: the requested scan exceeds the configured budget
class budget_error : public error {
public:
    using error::error;
};

enum class Orientation { CostMin, UtilityMax };

// Enumeration guards. profile_budget caps full product-space scans,
// joint_move_budget caps one tribe's joint deviation scan.
struct Budgets {
    std::uint64_t profile_budget = 10'000'000;
    std::uint64_t joint_move_budget = 1'000'000;
};

struct StrategyProfile {
    std::vector<int> choice;

    StrategyProfile() = default;
    explicit StrategyProfile(std::vector<int> c) : choice(std::move(c)) {}

    int size() const { return static_cast<int>(choice.size()); }
    int operator[](int i) const { return choice[static_cast<std::size_t>(i)]; }

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

// The partition function tau. Tribe ids must be dense: {0, ..., tribe_count-1}
// all in use.
struct TribePartition {
    std::vector<int> tribe_of;
    int tribe_count = 0;

    TribePartition() = default;
    explicit TribePartition(std::vector<int> assignment) : tribe_of(std::move(assignment)) {
        if (tribe_of.empty()) throw validation_error("partition: no players");
        int max_id = -1;
        for (int t : tribe_of) {
            if (t < 0) throw validation_error("partition: negative tribe id");
            max_id = std::max(max_id, t);
        }
        tribe_count = max_id + 1;
        std::vector<char> used(static_cast<std::size_t>(tribe_count), 0);
        for (int t : tribe_of) used[static_cast<std::size_t>(t)] = 1;
        for (char u : used)
            if (!u) throw validation_error("partition: tribe ids not dense");
    }

    int player_count() const { return static_cast<int>(tribe_of.size()); }
    int operator[](int i) const { return tribe_of[static_cast<std::size_t>(i)]; }

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> m(static_cast<std::size_t>(tribe_count));
        for (int i = 0; i < player_count(); ++i) m[static_cast<std::size_t>(tribe_of[static_cast<std::size_t>(i)])].push_back(i);
        return m;
    }

    friend bool operator==(const TribePartition&, const TribePartition&) = default;
};

inline TribePartition singleton_partition(int players) {
    std::vector<int> t(static_cast<std::size_t>(players));
    for (int i = 0; i < players; ++i) t[static_cast<std::size_t>(i)] = i;
    return TribePartition(std::move(t));
}

inline TribePartition constant_partition(int players) {
    return TribePartition(std::vector<int>(static_cast<std::size_t>(players), 0));
}

// A finite strategic game. The payoff function must be total over the full
// product space; structured families keep their raw specs on the side and
// expose themselves through this one interface.
struct Game {
    Orientation orientation = Orientation::CostMin;
    std::vector<int> strategy_counts;
    std::function<Rational(int, const StrategyProfile&)> payoff;

    int player_count() const { return static_cast<int>(strategy_counts.size()); }

    void validate_profile(const StrategyProfile& s) const {
        if (s.size() != player_count()) throw structural_error("profile length does not match player count");
        for (int i = 0; i < player_count(); ++i)
            if (s[i] < 0 || s[i] >= strategy_counts[static_cast<std::size_t>(i)])
                throw structural_error("strategy index out of range for player " + std::to_string(i));
    }
};

// better(a, b): a strictly improves on b from the deviator's point of view
inline bool improves(Orientation o, const Rational& candidate, const Rational& incumbent) {
    return o == Orientation::CostMin ? candidate < incumbent : candidate > incumbent;
}

inline Rational social_welfare(const Game& game, const StrategyProfile& s) {
    game.validate_profile(s);
    Rational total;
    for (int i = 0; i < game.player_count(); ++i) total += game.payoff(i, s);
    return total;
}

// The tau-tribal extension: player i's payoff becomes the sum of base payoffs
// over i's tribe. The input game is left untouched.
inline Game tribal_extension(const Game& base, const TribePartition& tau) {
    if (tau.player_count() != base.player_count())
        throw structural_error("partition length does not match player count");
    auto members = std::make_shared<std::vector<std::vector<int>>>(tau.members());
    auto tribe_of = std::make_shared<std::vector<int>>(tau.tribe_of);
    auto base_payoff = base.payoff;
    Game ext;
    ext.orientation = base.orientation;
    ext.strategy_counts = base.strategy_counts;
    ext.payoff = [members, tribe_of, base_payoff](int i, const StrategyProfile& s) {
        Rational total;
        for (int j : (*members)[static_cast<std::size_t>((*tribe_of)[static_cast<std::size_t>(i)])])
            total += base_payoff(j, s);
        return total;
    };
    return ext;
}

inline StrategyProfile substitute(const StrategyProfile& s, std::span<const std::pair<int, int>> moves) {
    StrategyProfile out = s;
    std::vector<char> seen(s.choice.size(), 0);
    for (auto [player, strategy] : moves) {
        if (player < 0 || player >= s.size()) throw structural_error("substitute: player index out of range");
        if (seen[static_cast<std::size_t>(player)]) throw structural_error("substitute: duplicate player in moves");
        seen[static_cast<std::size_t>(player)] = 1;
        if (strategy < 0) throw structural_error("substitute: negative strategy index");
        out.choice[static_cast<std::size_t>(player)] = strategy;
    }
    return out;
}

inline StrategyProfile substitute(const StrategyProfile& s, std::initializer_list<std::pair<int, int>> moves) {
    return substitute(s, std::span<const std::pair<int, int>>(moves.begin(), moves.size()));
}

// Mixed-radix view of the product strategy space. Profiles are ordered
// lexicographically with player 0 most significant; linear indices follow
// the same order.
struct ProfileSpace {
    std::vector<int> counts;

    explicit ProfileSpace(std::vector<int> c) : counts(std::move(c)) {
        for (int n : counts)
            if (n < 1) throw validation_error("profile space: empty strategy set");
    }
    explicit ProfileSpace(const Game& g) : ProfileSpace(g.strategy_counts) {}

    // total profile count, saturating at 2^64-1
    std::uint64_t total() const {
        unsigned __int128 t = 1;
        for (int n : counts) {
            t *= static_cast<unsigned>(n);
            if (t > UINT64_MAX) return UINT64_MAX;
        }
        return static_cast<std::uint64_t>(t);
    }

    std::uint64_t size_checked(std::uint64_t budget) const {
        unsigned __int128 t = 1;
        for (int n : counts) {
            t *= static_cast<unsigned>(n);
            if (t > budget)
                throw budget_error("profile space of " + approx_size_string() + " profiles exceeds budget of " +
                                   std::to_string(budget));
        }
        return static_cast<std::uint64_t>(t);
    }

    StrategyProfile first() const { return StrategyProfile(std::vector<int>(counts.size(), 0)); }

    // odometer step in lex order; false once the space wraps around
    bool advance(StrategyProfile& s) const {
        for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
            auto idx = static_cast<std::size_t>(i);
            if (++s.choice[idx] < counts[idx]) return true;
            s.choice[idx] = 0;
        }
        return false;
    }

    StrategyProfile at(std::uint64_t index) const {
        StrategyProfile s = first();
        for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
            auto idx = static_cast<std::size_t>(i);
            s.choice[idx] = static_cast<int>(index % static_cast<std::uint64_t>(counts[idx]));
            index /= static_cast<std::uint64_t>(counts[idx]);
        }
        return s;
    }

    std::uint64_t index_of(const StrategyProfile& s) const {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) idx = idx * static_cast<std::uint64_t>(counts[i]) + static_cast<std::uint64_t>(s.choice[i]);
        return idx;
    }

private:
    std::string approx_size_string() const {
        long double t = 1;
        for (int n : counts) t *= n;
        return std::to_string(static_cast<unsigned long long>(std::min<long double>(t, 1e18L)));
    }
};

} // namespace tribegames
