#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace tribegames {

struct RewardTerm {
    Rational coeff;
    int x_degree = 0;
    int y_degree = 0;
};

// Symmetric reward polynomial with nonnegative coefficients and no constant
// term, so f(0,0) = 0 always holds. Symmetry means every (c, p, q) term with
// p != q has its mirror (c, q, p).
class RewardPolynomial {
public:
    explicit RewardPolynomial(std::vector<RewardTerm> terms) {
        std::map<std::pair<int, int>, Rational> merged;
        for (const RewardTerm& t : terms) {
            if (t.x_degree < 0 || t.y_degree < 0) throw validation_error("reward: negative degree");
            if (t.coeff.sign() < 0) throw validation_error("reward: negative coefficient");
            if (t.x_degree == 0 && t.y_degree == 0 && !t.coeff.is_zero())
                throw validation_error("reward: constant term breaks f(0,0)=0 normalisation");
            if (!t.coeff.is_zero()) merged[{t.x_degree, t.y_degree}] += t.coeff;
        }
        for (const auto& [deg, c] : merged) {
            auto mirror = merged.find({deg.second, deg.first});
            if (mirror == merged.end() || mirror->second != c)
                throw validation_error("reward: polynomial is not symmetric in (x, y)");
        }
        for (const auto& [deg, c] : merged) terms_.push_back({c, deg.first, deg.second});
    }

    static RewardPolynomial additive(const Rational& c) {
        return RewardPolynomial({{c, 1, 0}, {c, 0, 1}});
    }
    static RewardPolynomial scaled_product(const Rational& c) { return RewardPolynomial({{c, 1, 1}}); }

    const std::vector<RewardTerm>& terms() const { return terms_; }

    Rational eval(const Rational& x, const Rational& y) const {
        Rational total;
        for (const RewardTerm& t : terms_) {
            Rational v = t.coeff;
            for (int p = 0; p < t.x_degree; ++p) v *= x;
            for (int q = 0; q < t.y_degree; ++q) v *= y;
            total += v;
        }
        return total;
    }

    // c(x+y) form
    bool is_additive_class() const {
        for (const RewardTerm& t : terms_)
            if (t.x_degree + t.y_degree != 1) return false;
        return !terms_.empty();
    }

    // nondecreasing, coordinate-convex, and f(x,0) = 0: no boundary terms
    bool is_convex_class() const {
        for (const RewardTerm& t : terms_)
            if (t.x_degree == 0 || t.y_degree == 0) return false;
        return !terms_.empty();
    }

private:
    std::vector<RewardTerm> terms_;
};

struct ContributionEdge {
    int u = 0;
    int v = 0;
    RewardPolynomial reward;
};

// Network contribution game. Each player splits a budget across incident
// edges in multiples of 1/grid_denominator (undershooting allowed); both
// endpoints of an edge receive the same reward f_e(x, y).
struct ContributionSpec {
    int vertex_count = 0;
    std::vector<ContributionEdge> edges;
    std::vector<Rational> budgets;
    int grid_denominator = 1;

    void validate() const {
        if (vertex_count < 1) throw validation_error("contribution: need at least one vertex");
        if (static_cast<int>(budgets.size()) != vertex_count)
            throw validation_error("contribution: budget list length mismatch");
        if (grid_denominator < 1) throw validation_error("contribution: grid denominator must be positive");
        for (const Rational& b : budgets)
            if (b.sign() < 0) throw validation_error("contribution: negative budget");
        std::vector<std::pair<int, int>> seen;
        for (const ContributionEdge& e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count)
                throw validation_error("contribution: edge endpoint out of range");
            if (e.u == e.v) throw validation_error("contribution: self-loop");
            auto key = std::minmax(e.u, e.v);
            if (std::find(seen.begin(), seen.end(), std::pair<int, int>(key.first, key.second)) != seen.end())
                throw validation_error("contribution: duplicate edge");
            seen.emplace_back(key.first, key.second);
        }
    }

    // budget in grid units; throws when B_i d is not an integer
    int units(int player) const {
        Rational scaled = budgets[static_cast<std::size_t>(player)] * Rational(grid_denominator);
        if (!scaled.is_integer())
            throw validation_error("contribution: budget of player " + std::to_string(player) +
                                   " is not representable on the 1/" + std::to_string(grid_denominator) + " grid");
        return static_cast<int>(scaled.num());
    }
};

struct ContributionGame {
    Game game;
    ContributionSpec spec;
    std::vector<std::pair<int, int>> adjacency;        // the edge set, for pairwise checks
    std::vector<std::vector<int>> incident;            // vertex -> edge ids
    std::vector<std::vector<std::vector<int>>> allocations; // [player][strategy][slot] grid units

    // strategy index of a unit allocation, in the fixed enumeration order
    int strategy_of(int player, const std::vector<int>& alloc_units) const {
        const auto& all = allocations[static_cast<std::size_t>(player)];
        auto it = std::find(all.begin(), all.end(), alloc_units);
        if (it == all.end()) throw structural_error("allocation not on the strategy grid");
        return static_cast<int>(it - all.begin());
    }
};

namespace detail {

inline void enumerate_allocations(int slots, int remaining, std::vector<int>& cur,
                                  std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == slots) {
        out.push_back(cur);
        return;
    }
    for (int take = 0; take <= remaining; ++take) {
        cur.push_back(take);
        enumerate_allocations(slots, remaining - take, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

inline ContributionGame build_contribution_game(const ContributionSpec& spec) {
    spec.validate();
    ContributionGame cg;
    cg.spec = spec;
    int n = spec.vertex_count;
    cg.incident.assign(static_cast<std::size_t>(n), {});
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        cg.incident[static_cast<std::size_t>(spec.edges[e].u)].push_back(static_cast<int>(e));
        cg.incident[static_cast<std::size_t>(spec.edges[e].v)].push_back(static_cast<int>(e));
        cg.adjacency.emplace_back(spec.edges[e].u, spec.edges[e].v);
    }
    cg.allocations.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> cur;
        detail::enumerate_allocations(static_cast<int>(cg.incident[static_cast<std::size_t>(i)].size()), spec.units(i),
                                      cur, cg.allocations[static_cast<std::size_t>(i)]);
    }

    // edge -> slot position within each endpoint's incident list
    struct EdgeRef {
        int u, v, slot_u, slot_v;
    };
    auto refs = std::make_shared<std::vector<EdgeRef>>();
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        const auto& inc_u = cg.incident[static_cast<std::size_t>(spec.edges[e].u)];
        const auto& inc_v = cg.incident[static_cast<std::size_t>(spec.edges[e].v)];
        int su = static_cast<int>(std::find(inc_u.begin(), inc_u.end(), static_cast<int>(e)) - inc_u.begin());
        int sv = static_cast<int>(std::find(inc_v.begin(), inc_v.end(), static_cast<int>(e)) - inc_v.begin());
        refs->push_back({spec.edges[e].u, spec.edges[e].v, su, sv});
    }

    // grid fractions per (player, strategy, slot), so payoff evaluation never
    // rebuilds rationals from units
    auto frac = std::make_shared<std::vector<std::vector<std::vector<Rational>>>>();
    frac->resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& rows = (*frac)[static_cast<std::size_t>(i)];
        for (const auto& alloc : cg.allocations[static_cast<std::size_t>(i)]) {
            std::vector<Rational> row;
            row.reserve(alloc.size());
            for (int u : alloc) row.emplace_back(u, spec.grid_denominator);
            rows.push_back(std::move(row));
        }
    }

    auto shared_spec = std::make_shared<ContributionSpec>(spec);
    auto incident = std::make_shared<std::vector<std::vector<int>>>(cg.incident);
    cg.game.orientation = Orientation::UtilityMax;
    cg.game.strategy_counts.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        cg.game.strategy_counts[static_cast<std::size_t>(i)] =
            static_cast<int>(cg.allocations[static_cast<std::size_t>(i)].size());
    cg.game.payoff = [shared_spec, refs, frac, incident](int i, const StrategyProfile& s) {
        Rational u;
        const auto& mine = (*frac)[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.choice[static_cast<std::size_t>(i)])];
        const auto& inc = (*incident)[static_cast<std::size_t>(i)];
        for (std::size_t slot = 0; slot < inc.size(); ++slot) {
            const auto& ref = (*refs)[static_cast<std::size_t>(inc[slot])];
            int other = ref.u == i ? ref.v : ref.u;
            int other_slot = ref.u == i ? ref.slot_v : ref.slot_u;
            const Rational& x = mine[slot];
            const Rational& y = (*frac)[static_cast<std::size_t>(other)][static_cast<std::size_t>(
                s.choice[static_cast<std::size_t>(other)])][static_cast<std::size_t>(other_slot)];
            u += shared_spec->edges[static_cast<std::size_t>(inc[slot])].reward.eval(x, y);
        }
        return u;
    };
    return cg;
}

// A strategy is tight when every edge contribution is 0 or the full budget.
inline bool is_tight(const ContributionGame& cg, const StrategyProfile& s) {
    cg.game.validate_profile(s);
    for (int i = 0; i < cg.spec.vertex_count; ++i) {
        int full = cg.spec.units(i);
        for (int units : cg.allocations[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.choice[static_cast<std::size_t>(i)])])
            if (units != 0 && units != full) return false;
    }
    return true;
}

// Profile with each player's full budget on one chosen incident edge
// (-1 leaves the player idle).
inline StrategyProfile full_budget_profile(const ContributionGame& cg, const std::vector<int>& chosen_edge) {
    if (static_cast<int>(chosen_edge.size()) != cg.spec.vertex_count)
        throw structural_error("chosen-edge list length mismatch");
    std::vector<int> choice;
    for (int i = 0; i < cg.spec.vertex_count; ++i) {
        const auto& inc = cg.incident[static_cast<std::size_t>(i)];
        std::vector<int> alloc(inc.size(), 0);
        if (chosen_edge[static_cast<std::size_t>(i)] >= 0) {
            auto it = std::find(inc.begin(), inc.end(), chosen_edge[static_cast<std::size_t>(i)]);
            if (it == inc.end()) throw structural_error("chosen edge not incident to player");
            alloc[static_cast<std::size_t>(it - inc.begin())] = cg.spec.units(i);
        }
        choice.push_back(cg.strategy_of(i, alloc));
    }
    return StrategyProfile(std::move(choice));
}

struct ContributionInstance {
    ContributionSpec spec;
    TribePartition partition;
    std::vector<int> witness_edges; // per-player full-budget target for the witness profile
};

// Three-vertex chain; only the middle player has budget. The left edge pays
// twice the right one, but the middle player's tribe (middle + right) earns
// the same total either way, so parking the budget on the right edge sticks.
inline ContributionInstance gen_additive_chain(int grid = 1) {
    ContributionSpec spec;
    spec.vertex_count = 3;
    spec.edges.push_back({0, 1, RewardPolynomial::additive(Rational(2))});
    spec.edges.push_back({1, 2, RewardPolynomial::additive(Rational(1))});
    spec.budgets = {Rational(0), Rational(1), Rational(0)};
    spec.grid_denominator = grid;
    return {std::move(spec), TribePartition({0, 1, 1}), {-1, 1, -1}};
}

// Six players on a path with rewards eps*xy, xy, (1/2+eps)*xy, xy, eps*xy and
// tribes R,R,B,B,R,R. Witness: everyone invests in edges 0, 2, 4.
inline ContributionInstance gen_convex_path(const Rational& eps, int grid = 4) {
    if (eps.sign() <= 0 || eps >= Rational(1, 2)) throw validation_error("convex path: need 0 < eps < 1/2");
    ContributionSpec spec;
    spec.vertex_count = 6;
    spec.edges.push_back({0, 1, RewardPolynomial::scaled_product(eps)});
    spec.edges.push_back({1, 2, RewardPolynomial::scaled_product(Rational(1))});
    spec.edges.push_back({2, 3, RewardPolynomial::scaled_product(Rational(1, 2) + eps)});
    spec.edges.push_back({3, 4, RewardPolynomial::scaled_product(Rational(1))});
    spec.edges.push_back({4, 5, RewardPolynomial::scaled_product(eps)});
    spec.budgets.assign(6, Rational(1));
    spec.grid_denominator = grid;
    return {std::move(spec), TribePartition({0, 0, 1, 1, 0, 0}), {0, 0, 2, 2, 4, 4}};
}

// Four-cycle with opposite rewards (1-eps)*xy and (1/2)*xy under full
// altruism. Witness: everyone invests in their half-reward edge.
inline ContributionInstance gen_altruistic_square(const Rational& eps, int grid = 1) {
    if (eps.sign() <= 0 || eps >= Rational(1, 2)) throw validation_error("altruistic square: need 0 < eps < 1/2");
    ContributionSpec spec;
    spec.vertex_count = 4;
    spec.edges.push_back({0, 1, RewardPolynomial::scaled_product(Rational(1) - eps)});
    spec.edges.push_back({1, 2, RewardPolynomial::scaled_product(Rational(1, 2))});
    spec.edges.push_back({2, 3, RewardPolynomial::scaled_product(Rational(1) - eps)});
    spec.edges.push_back({3, 0, RewardPolynomial::scaled_product(Rational(1, 2))});
    spec.budgets.assign(4, Rational(1));
    spec.grid_denominator = grid;
    return {std::move(spec), constant_partition(4), {3, 1, 1, 3}};
}

enum class RewardClass { Additive, ScaledProduct };

inline ContributionSpec random_contribution_spec(Rng& rng, RewardClass cls, int max_vertices = 4) {
    int n = rng.between(3, max_vertices);
    int d = rng.between(1, 2);
    ContributionSpec spec;
    spec.vertex_count = n;
    spec.grid_denominator = d;
    std::vector<Rational> coeffs{Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!rng.chance(1, 2)) continue;
            Rational c = rng.pick(coeffs);
            spec.edges.push_back({u, v,
                                  cls == RewardClass::Additive ? RewardPolynomial::additive(c)
                                                               : RewardPolynomial::scaled_product(c)});
        }
    if (spec.edges.empty()) {
        Rational c = rng.pick(coeffs);
        spec.edges.push_back({0, 1,
                              cls == RewardClass::Additive ? RewardPolynomial::additive(c)
                                                           : RewardPolynomial::scaled_product(c)});
    }
    // budget 2 only on the unit grid, keeping allocation sets desk-sized
    for (int i = 0; i < n; ++i) {
        int max_budget = d == 1 ? 2 : 1;
        spec.budgets.push_back(Rational(rng.between(0, max_budget)));
    }
    return spec;
}

} // namespace tribegames
