#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace tribegames {

// Atomic linear congestion game over abstract resources: using resource e
// with load n costs alpha_e * n per user. Strategies are resource subsets.
struct CongestionSpec {
    int resource_count = 0;
    std::vector<Rational> alpha;
    std::vector<std::vector<std::vector<int>>> strategies; // [player][strategy] -> sorted resource ids

    int player_count() const { return static_cast<int>(strategies.size()); }

    void validate() const {
        if (resource_count < 1) throw validation_error("congestion: need at least one resource");
        if (static_cast<int>(alpha.size()) != resource_count)
            throw validation_error("congestion: alpha list length mismatch");
        for (const Rational& a : alpha)
            if (a.sign() <= 0) throw validation_error("congestion: delay factors must be positive");
        if (strategies.empty()) throw validation_error("congestion: need at least one player");
        for (const auto& per_player : strategies) {
            if (per_player.empty()) throw validation_error("congestion: player with empty strategy list");
            for (const auto& strat : per_player) {
                for (std::size_t i = 0; i < strat.size(); ++i) {
                    if (strat[i] < 0 || strat[i] >= resource_count)
                        throw validation_error("congestion: resource id out of range");
                    if (i > 0 && strat[i] <= strat[i - 1])
                        throw validation_error("congestion: strategy must be a sorted resource set");
                }
            }
        }
    }
};

inline std::vector<int> loads(const CongestionSpec& spec, const StrategyProfile& s) {
    std::vector<int> n(static_cast<std::size_t>(spec.resource_count), 0);
    for (int i = 0; i < spec.player_count(); ++i)
        for (int e : spec.strategies[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.choice[static_cast<std::size_t>(i)])])
            ++n[static_cast<std::size_t>(e)];
    return n;
}

inline std::vector<std::vector<int>> tribal_loads(const CongestionSpec& spec, const TribePartition& tau,
                                                  const StrategyProfile& s) {
    std::vector<std::vector<int>> n(static_cast<std::size_t>(tau.tribe_count),
                                    std::vector<int>(static_cast<std::size_t>(spec.resource_count), 0));
    for (int i = 0; i < spec.player_count(); ++i)
        for (int e : spec.strategies[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.choice[static_cast<std::size_t>(i)])])
            ++n[static_cast<std::size_t>(tau.tribe_of[static_cast<std::size_t>(i)])][static_cast<std::size_t>(e)];
    return n;
}

namespace detail {

// Shared payoff builder for resource-subset games; routing compiles to this
// with zero-delay private arcs, so alpha >= 0 here.
inline Game make_resource_game(std::shared_ptr<const CongestionSpec> spec) {
    Game g;
    g.orientation = Orientation::CostMin;
    g.strategy_counts.resize(static_cast<std::size_t>(spec->player_count()));
    for (int i = 0; i < spec->player_count(); ++i)
        g.strategy_counts[static_cast<std::size_t>(i)] =
            static_cast<int>(spec->strategies[static_cast<std::size_t>(i)].size());
    g.payoff = [spec](int i, const StrategyProfile& s) {
        const auto& mine =
            spec->strategies[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.choice[static_cast<std::size_t>(i)])];
        Rational cost;
        for (int e : mine) {
            int load = 0;
            for (int j = 0; j < spec->player_count(); ++j) {
                const auto& theirs = spec->strategies[static_cast<std::size_t>(j)]
                                                     [static_cast<std::size_t>(s.choice[static_cast<std::size_t>(j)])];
                if (std::binary_search(theirs.begin(), theirs.end(), e)) ++load;
            }
            cost += spec->alpha[static_cast<std::size_t>(e)] * Rational(load);
        }
        return cost;
    };
    return g;
}

} // namespace detail

inline Game build_congestion_game(const CongestionSpec& spec) {
    spec.validate();
    return detail::make_resource_game(std::make_shared<const CongestionSpec>(spec));
}

// Load-balancing family on a complete binary tree with `layers + 1` node
// levels. Players are the tree edges; each picks its upper or lower endpoint.
// Node delay factors halve per level, except the leaf level which doubles the
// preceding one. Left-child edges form tribe 0, right-child edges tribe 1.
struct TreeInstance {
    CongestionSpec spec;
    TribePartition partition;
    StrategyProfile upper_profile; // every edge on its upper node; the stable witness
    StrategyProfile lower_profile; // every edge on its lower node; near-optimal spread
    int layers = 0;

    bool profile_space_within(std::uint64_t budget) const {
        unsigned __int128 total = 1;
        for (std::size_t i = 0; i < spec.strategies.size(); ++i) {
            total *= 2u;
            if (total > budget) return false;
        }
        return true;
    }
};

inline TreeInstance gen_layered_tree(int k) {
    if (k < 1) throw validation_error("layered tree: need k >= 1");
    if (k > 30) throw validation_error("layered tree: k too large");
    int nodes = (2 << k) - 1; // 2^(k+1) - 1
    TreeInstance inst;
    inst.layers = k;
    inst.spec.resource_count = nodes;
    inst.spec.alpha.resize(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v) {
        int depth = 0;
        for (int w = v + 1; w > 1; w >>= 1) ++depth;
        // (1/2)^depth above the leaves, doubled on the leaf level
        Rational a = depth < k ? Rational(1, std::int64_t(1) << depth) : Rational(2, std::int64_t(1) << (k - 1));
        inst.spec.alpha[static_cast<std::size_t>(v)] = a;
    }
    int players = nodes - 1;
    std::vector<int> tribes(static_cast<std::size_t>(players));
    for (int child = 1; child <= players; ++child) {
        int parent = (child - 1) / 2;
        inst.spec.strategies.push_back({{parent}, {child}});
        tribes[static_cast<std::size_t>(child - 1)] = child % 2 == 1 ? 0 : 1; // left child edges in tribe 0
    }
    inst.partition = TribePartition(std::move(tribes));
    inst.upper_profile = StrategyProfile(std::vector<int>(static_cast<std::size_t>(players), 0));
    inst.lower_profile = StrategyProfile(std::vector<int>(static_cast<std::size_t>(players), 1));
    return inst;
}

struct RoutingArc {
    int from = 0;
    int to = 0;
    Rational alpha; // zero allowed: gadget entry/exit arcs are free
};

struct RoutingSpec {
    int vertex_count = 0;
    std::vector<RoutingArc> arcs;
    std::vector<std::pair<int, int>> terminals; // per player (source, sink)

    void validate() const {
        if (vertex_count < 1) throw validation_error("routing: need at least one vertex");
        for (const RoutingArc& a : arcs) {
            if (a.from < 0 || a.to < 0 || a.from >= vertex_count || a.to >= vertex_count)
                throw validation_error("routing: arc endpoint out of range");
            if (a.alpha.sign() < 0) throw validation_error("routing: negative delay factor");
        }
        for (auto [s, t] : terminals)
            if (s < 0 || t < 0 || s >= vertex_count || t >= vertex_count)
                throw validation_error("routing: terminal out of range");
    }
};

// Rebuild a two-choice load-balancing game as a routing game: every candidate
// resource of every player becomes a three-arc path with a free private
// entry, the resource's shared middle arc, and a free private exit.
inline RoutingSpec load_balancing_to_routing(const CongestionSpec& spec) {
    spec.validate();
    for (const auto& per_player : spec.strategies)
        for (const auto& strat : per_player)
            if (strat.size() != 1)
                throw validation_error("routing conversion: every strategy must be a single resource");
    RoutingSpec out;
    // shared middle arc (a_e -> b_e) per resource
    std::vector<int> a_node(static_cast<std::size_t>(spec.resource_count));
    std::vector<int> b_node(static_cast<std::size_t>(spec.resource_count));
    for (int e = 0; e < spec.resource_count; ++e) {
        a_node[static_cast<std::size_t>(e)] = out.vertex_count++;
        b_node[static_cast<std::size_t>(e)] = out.vertex_count++;
    }
    for (int e = 0; e < spec.resource_count; ++e)
        out.arcs.push_back({a_node[static_cast<std::size_t>(e)], b_node[static_cast<std::size_t>(e)],
                            spec.alpha[static_cast<std::size_t>(e)]});
    for (int i = 0; i < spec.player_count(); ++i) {
        int source = out.vertex_count++;
        int sink = out.vertex_count++;
        for (const auto& strat : spec.strategies[static_cast<std::size_t>(i)]) {
            int e = strat[0];
            out.arcs.push_back({source, a_node[static_cast<std::size_t>(e)], Rational(0)});
            out.arcs.push_back({b_node[static_cast<std::size_t>(e)], sink, Rational(0)});
        }
        out.terminals.emplace_back(source, sink);
    }
    return out;
}

struct RoutingGame {
    Game game;
    std::vector<std::vector<std::vector<int>>> paths; // [player][strategy] -> sorted arc ids
};

// Strategies are the simple source->sink paths, enumerated depth-first in
// arc input order.
inline RoutingGame build_routing_game(const RoutingSpec& spec, const Budgets& budgets = {}) {
    spec.validate();
    std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(spec.vertex_count));
    for (std::size_t a = 0; a < spec.arcs.size(); ++a)
        out_arcs[static_cast<std::size_t>(spec.arcs[a].from)].push_back(static_cast<int>(a));

    RoutingGame rg;
    CongestionSpec compiled;
    compiled.resource_count = static_cast<int>(spec.arcs.size());
    for (const RoutingArc& a : spec.arcs) compiled.alpha.push_back(a.alpha);

    for (auto [source, sink] : spec.terminals) {
        std::vector<std::vector<int>> player_paths;
        std::vector<int> stack;
        std::vector<char> visited(static_cast<std::size_t>(spec.vertex_count), 0);
        auto dfs = [&](auto&& self, int v) -> void {
            if (v == sink) {
                std::vector<int> path = stack;
                std::sort(path.begin(), path.end());
                player_paths.push_back(std::move(path));
                if (player_paths.size() > budgets.joint_move_budget)
                    throw budget_error("routing: path enumeration exceeds budget");
                return;
            }
            visited[static_cast<std::size_t>(v)] = 1;
            for (int a : out_arcs[static_cast<std::size_t>(v)]) {
                int next = spec.arcs[static_cast<std::size_t>(a)].to;
                if (visited[static_cast<std::size_t>(next)]) continue;
                stack.push_back(a);
                self(self, next);
                stack.pop_back();
            }
            visited[static_cast<std::size_t>(v)] = 0;
        };
        dfs(dfs, source);
        if (player_paths.empty()) throw validation_error("routing: a player has no source->sink path");
        compiled.strategies.push_back(player_paths);
        rg.paths.push_back(std::move(player_paths));
    }
    rg.game = detail::make_resource_game(std::make_shared<const CongestionSpec>(std::move(compiled)));
    return rg;
}

// Player-by-player cost equality between a two-choice load-balancing game and
// its routing-gadget conversion, over the full profile space.
inline bool gadget_cost_equality(const CongestionSpec& spec, const Budgets& budgets = {}) {
    Game lb = build_congestion_game(spec);
    RoutingGame routed = build_routing_game(load_balancing_to_routing(spec), budgets);
    if (routed.game.strategy_counts != lb.strategy_counts) return false;
    ProfileSpace space(lb);
    std::uint64_t total = space.size_checked(budgets.profile_budget);
    StrategyProfile s = space.first();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (int i = 0; i < lb.player_count(); ++i)
            if (lb.payoff(i, s) != routed.game.payoff(i, s)) return false;
        space.advance(s);
    }
    return true;
}

struct SmoothnessParams {
    Rational lambda;
    Rational mu;

    SmoothnessParams(Rational l, Rational m) : lambda(std::move(l)), mu(std::move(m)) {
        if (mu.sign() < 0 || mu >= Rational(1)) throw validation_error("smoothness: need 0 <= mu < 1");
    }
};

inline Rational smoothness_pot_bound(const SmoothnessParams& p) { return p.lambda / (Rational(1) - p.mu); }

struct SmoothnessMode {
    enum Kind { Exhaustive, Sampled } kind = Exhaustive;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    static SmoothnessMode exhaustive() { return {}; }
    static SmoothnessMode sampled(std::uint64_t count, std::uint64_t seed) { return {Sampled, count, seed}; }
};

struct SmoothnessReport {
    bool holds = true;
    Rational min_slack;
    std::optional<std::pair<StrategyProfile, StrategyProfile>> witness; // first pair attaining min_slack
    std::uint64_t pairs_checked = 0;
    std::optional<std::uint64_t> seed; // recorded in sampled mode
};

// Checks, for all (or sampled) ordered profile pairs (s, s'),
//   sum_i ( c_i^tau(s'_i; s_-i) - c_i^tau(s) + c_i(s) ) <= lambda C(s') + mu C(s)
// and reports the minimum slack; a negative slack is a counterexample.
inline SmoothnessReport check_smoothness(const Game& base, const TribePartition& tau, const SmoothnessParams& params,
                                         const SmoothnessMode& mode = {}, const Budgets& budgets = {}, int workers = 1) {
    if (tau.player_count() != base.player_count())
        throw structural_error("partition length does not match player count");
    ProfileSpace space(base);
    std::uint64_t total = space.total();
    auto members = tau.members();
    auto tribe_value = [&](int t, const StrategyProfile& s) {
        Rational v;
        for (int j : members[static_cast<std::size_t>(t)]) v += base.payoff(j, s);
        return v;
    };
    auto welfare_of = [&](const StrategyProfile& s) {
        Rational w;
        for (int i = 0; i < base.player_count(); ++i) w += base.payoff(i, s);
        return w;
    };
    // deviation sum with per-s values precomputed by the caller
    auto slack_of = [&](const StrategyProfile& s, const std::vector<Rational>& cur_tribe,
                        const std::vector<Rational>& own, const Rational& welfare_s, const StrategyProfile& target,
                        const Rational& welfare_target, StrategyProfile& scratch) {
        Rational lhs;
        for (int i = 0; i < base.player_count(); ++i) {
            int t = tau.tribe_of[static_cast<std::size_t>(i)];
            int original = scratch.choice[static_cast<std::size_t>(i)];
            scratch.choice[static_cast<std::size_t>(i)] = target.choice[static_cast<std::size_t>(i)];
            Rational dev = tribe_value(t, scratch);
            scratch.choice[static_cast<std::size_t>(i)] = original;
            lhs += dev - cur_tribe[static_cast<std::size_t>(t)] + own[static_cast<std::size_t>(i)];
        }
        (void)s;
        return params.lambda * welfare_target + params.mu * welfare_s - lhs;
    };
    auto per_profile = [&](const StrategyProfile& s, std::vector<Rational>& cur_tribe, std::vector<Rational>& own) {
        cur_tribe.resize(members.size());
        own.resize(static_cast<std::size_t>(base.player_count()));
        for (int t = 0; t < static_cast<int>(members.size()); ++t) cur_tribe[static_cast<std::size_t>(t)] = tribe_value(t, s);
        for (int i = 0; i < base.player_count(); ++i) own[static_cast<std::size_t>(i)] = base.payoff(i, s);
    };

    struct Worst {
        bool set = false;
        Rational slack;
        std::uint64_t order = 0;
        StrategyProfile s, target;
        std::uint64_t checked = 0;
    };
    auto consider = [](Worst& w, const Rational& slack, std::uint64_t order, const StrategyProfile& s,
                       const StrategyProfile& target) {
        if (!w.set || slack < w.slack || (slack == w.slack && order < w.order)) {
            w.set = true;
            w.slack = slack;
            w.order = order;
            w.s = s;
            w.target = target;
        }
    };

    std::vector<Worst> worsts;
    if (mode.kind == SmoothnessMode::Sampled) {
        Worst w;
        Rng rng(mode.seed);
        std::vector<Rational> cur_tribe, own;
        StrategyProfile scratch;
        for (std::uint64_t n = 0; n < mode.sample_count; ++n) {
            StrategyProfile s = space.at(rng.next() % total);
            StrategyProfile target = space.at(rng.next() % total);
            per_profile(s, cur_tribe, own);
            scratch = s;
            consider(w, slack_of(s, cur_tribe, own, welfare_of(s), target, welfare_of(target), scratch), n, s, target);
            ++w.checked;
        }
        worsts.push_back(std::move(w));
    } else {
        if ((unsigned __int128)total * total > budgets.profile_budget)
            throw budget_error("smoothness: exhaustive pair scan of " + std::to_string(total) + "^2 pairs exceeds budget of " +
                               std::to_string(budgets.profile_budget));
        // welfare cache: each profile is revisited `total` times as a target
        std::vector<Rational> welfare(static_cast<std::size_t>(total));
        {
            StrategyProfile s = space.first();
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                welfare[static_cast<std::size_t>(idx)] = welfare_of(s);
                space.advance(s);
            }
        }
        int nworkers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(total, 64))));
        worsts.resize(static_cast<std::size_t>(nworkers));
        auto run = [&](std::uint64_t lo, std::uint64_t hi, Worst& w) {
            StrategyProfile s = space.at(lo);
            std::vector<Rational> cur_tribe, own;
            for (std::uint64_t si = lo; si < hi; ++si) {
                per_profile(s, cur_tribe, own);
                StrategyProfile scratch = s;
                StrategyProfile target = space.first();
                for (std::uint64_t ti = 0; ti < total; ++ti) {
                    Rational slack = slack_of(s, cur_tribe, own, welfare[static_cast<std::size_t>(si)], target,
                                              welfare[static_cast<std::size_t>(ti)], scratch);
                    consider(w, slack, si * total + ti, s, target);
                    ++w.checked;
                    space.advance(target);
                }
                space.advance(s);
            }
        };
        if (nworkers == 1) {
            run(0, total, worsts[0]);
        } else {
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nworkers));
            std::vector<std::thread> threads;
            std::uint64_t chunk = (total + static_cast<std::uint64_t>(nworkers) - 1) / static_cast<std::uint64_t>(nworkers);
            for (int p = 0; p < nworkers; ++p) {
                std::uint64_t lo = static_cast<std::uint64_t>(p) * chunk, hi = std::min(total, lo + chunk);
                if (lo >= hi) break;
                threads.emplace_back([&, lo, hi, p] {
                    try {
                        run(lo, hi, worsts[static_cast<std::size_t>(p)]);
                    } catch (...) {
                        errors[static_cast<std::size_t>(p)] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
            for (const auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
    }

    SmoothnessReport report;
    Worst overall;
    for (Worst& w : worsts) {
        report.pairs_checked += w.checked;
        if (!w.set) continue;
        consider(overall, w.slack, w.order, w.s, w.target);
    }
    if (overall.set) {
        report.min_slack = overall.slack;
        report.holds = overall.slack.sign() >= 0;
        report.witness = std::make_pair(overall.s, overall.target);
    }
    if (mode.kind == SmoothnessMode::Sampled) report.seed = mode.seed;
    return report;
}

// margin of the load inequality x(y-x) + xy + x + y <= (8/3) y^2 + (1/3) x^2
inline Rational quad_margin(std::int64_t x, std::int64_t y) {
    Rational X(x), Y(y);
    Rational lhs = X * (Y - X) + X * Y + X + Y;
    Rational rhs = Rational(8, 3) * Y * Y + Rational(1, 3) * X * X;
    return rhs - lhs;
}

struct QuadScanResult {
    bool holds = true;
    Rational min_margin;
    std::pair<std::int64_t, std::int64_t> argmin{0, 0};
};

inline QuadScanResult quad_inequality_scan(int limit) {
    QuadScanResult r;
    bool first = true;
    for (std::int64_t x = 0; x <= limit; ++x)
        for (std::int64_t y = 0; y <= limit; ++y) {
            Rational m = quad_margin(x, y);
            if (first || m < r.min_margin) {
                first = false;
                r.min_margin = m;
                r.argmin = {x, y};
            }
        }
    r.holds = r.min_margin.sign() >= 0;
    return r;
}

inline CongestionSpec random_congestion_spec(Rng& rng, int max_players = 4, int max_resources = 4,
                                             int max_strategies = 3) {
    CongestionSpec spec;
    spec.resource_count = rng.between(1, max_resources);
    std::vector<Rational> pool{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
    for (int e = 0; e < spec.resource_count; ++e) spec.alpha.push_back(rng.pick(pool));
    int players = rng.between(2, max_players);
    for (int i = 0; i < players; ++i) {
        int count = rng.between(1, max_strategies);
        std::vector<std::vector<int>> strats;
        for (int c = 0; c < count; ++c) {
            std::vector<int> strat;
            for (int e = 0; e < spec.resource_count; ++e)
                if (rng.chance(1, 2)) strat.push_back(e);
            if (strat.empty()) strat.push_back(rng.below(spec.resource_count));
            if (std::find(strats.begin(), strats.end(), strat) == strats.end()) strats.push_back(std::move(strat));
        }
        spec.strategies.push_back(std::move(strats));
    }
    return spec;
}

} // namespace tribegames
