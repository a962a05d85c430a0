#pragma once

#include <map>
#include <optional>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "core.hpp"

namespace tribegames {

enum class ConceptKind { Unilateral, Pairwise, Coordinated, Oligopolistic };

// Pairwise blocking default: a joint move blocks only if it strictly improves
// both players' tribes. The one-strict/one-weak variant is exposed as a
// toggle for comparison runs.
enum class PairBlocking { BothStrict, OneStrictOneWeak };

struct DeviationConcept {
    ConceptKind kind = ConceptKind::Unilateral;
    std::optional<std::vector<std::pair<int, int>>> adjacency; // required for Pairwise
    PairBlocking blocking = PairBlocking::BothStrict;

    static DeviationConcept unilateral() { return {ConceptKind::Unilateral, std::nullopt, PairBlocking::BothStrict}; }
    static DeviationConcept pairwise(std::vector<std::pair<int, int>> adj,
                                     PairBlocking mode = PairBlocking::BothStrict) {
        return {ConceptKind::Pairwise, std::move(adj), mode};
    }
    static DeviationConcept coordinated() { return {ConceptKind::Coordinated, std::nullopt, PairBlocking::BothStrict}; }
    static DeviationConcept oligopolistic() {
        return {ConceptKind::Oligopolistic, std::nullopt, PairBlocking::BothStrict};
    }
};

inline const char* concept_name(ConceptKind k) {
    switch (k) {
    case ConceptKind::Unilateral: return "unilateral";
    case ConceptKind::Pairwise: return "pairwise";
    case ConceptKind::Coordinated: return "coordinated";
    case ConceptKind::Oligopolistic: return "oligopolistic";
    }
    return "?";
}

struct Witness {
    std::vector<std::pair<int, int>> moves;
};

struct CheckResult {
    bool stable = false;
    std::optional<Witness> witness;
};

namespace detail {

struct TribalEvaluator {
    const Game* game;
    std::vector<int> tribe_of;
    std::vector<std::vector<int>> members;

    TribalEvaluator(const Game& g, const TribePartition& tau)
        : game(&g), tribe_of(tau.tribe_of), members(tau.members()) {}

    Rational tribe_value(int tribe, const StrategyProfile& s) const {
        Rational total;
        for (int j : members[static_cast<std::size_t>(tribe)]) total += game->payoff(j, s);
        return total;
    }
};

inline std::optional<Witness> find_unilateral_block(const TribalEvaluator& ev, StrategyProfile& s) {
    const Game& g = *ev.game;
    std::vector<std::optional<Rational>> cur(ev.members.size());
    for (int i = 0; i < g.player_count(); ++i) {
        int t = ev.tribe_of[static_cast<std::size_t>(i)];
        auto& cached = cur[static_cast<std::size_t>(t)];
        if (!cached) cached = ev.tribe_value(t, s);
        int original = s.choice[static_cast<std::size_t>(i)];
        for (int alt = 0; alt < g.strategy_counts[static_cast<std::size_t>(i)]; ++alt) {
            if (alt == original) continue;
            s.choice[static_cast<std::size_t>(i)] = alt;
            Rational val = ev.tribe_value(t, s);
            s.choice[static_cast<std::size_t>(i)] = original;
            if (improves(g.orientation, val, *cached)) return Witness{{{i, alt}}};
        }
    }
    return std::nullopt;
}

// Joint deviations of one tribe over the product of its members' strategy
// sets; scanned in descending lexicographic order so full-effort moves come
// first. Blocks on a strict improvement of the tribe total.
inline std::optional<Witness> find_tribe_block(const TribalEvaluator& ev, StrategyProfile& s, const Budgets& budgets) {
    const Game& g = *ev.game;
    for (int t = 0; t < static_cast<int>(ev.members.size()); ++t) {
        const auto& mem = ev.members[static_cast<std::size_t>(t)];
        unsigned __int128 combos = 1;
        for (int j : mem) combos *= static_cast<unsigned>(g.strategy_counts[static_cast<std::size_t>(j)]);
        if (combos > budgets.joint_move_budget)
            throw budget_error("joint deviation scan for one tribe exceeds budget of " +
                               std::to_string(budgets.joint_move_budget));
        Rational cur = ev.tribe_value(t, s);
        std::vector<int> original(mem.size());
        for (std::size_t m = 0; m < mem.size(); ++m) original[m] = s.choice[static_cast<std::size_t>(mem[m])];
        std::vector<int> combo(mem.size());
        for (std::size_t m = 0; m < mem.size(); ++m)
            combo[m] = g.strategy_counts[static_cast<std::size_t>(mem[m])] - 1;
        auto restore = [&] {
            for (std::size_t m = 0; m < mem.size(); ++m) s.choice[static_cast<std::size_t>(mem[m])] = original[m];
        };
        while (true) {
            if (combo != original) {
                for (std::size_t m = 0; m < mem.size(); ++m) s.choice[static_cast<std::size_t>(mem[m])] = combo[m];
                Rational val = ev.tribe_value(t, s);
                if (improves(g.orientation, val, cur)) {
                    restore();
                    Witness w;
                    for (std::size_t m = 0; m < mem.size(); ++m)
                        if (combo[m] != original[m]) w.moves.emplace_back(mem[m], combo[m]);
                    return w;
                }
            }
            // descending odometer
            std::size_t pos = mem.size();
            while (pos > 0) {
                --pos;
                if (combo[pos] > 0) {
                    --combo[pos];
                    break;
                }
                combo[pos] = g.strategy_counts[static_cast<std::size_t>(mem[pos])] - 1;
                if (pos == 0) {
                    restore();
                    goto next_tribe;
                }
            }
            if (mem.empty()) break;
        }
    next_tribe:;
    }
    return std::nullopt;
}

inline std::optional<Witness> find_pair_block(const TribalEvaluator& ev, StrategyProfile& s,
                                              const std::vector<std::pair<int, int>>& adjacency, PairBlocking mode) {
    const Game& g = *ev.game;
    for (auto [i, j] : adjacency) {
        int ti = ev.tribe_of[static_cast<std::size_t>(i)];
        int tj = ev.tribe_of[static_cast<std::size_t>(j)];
        Rational cur_i = ev.tribe_value(ti, s);
        Rational cur_j = ti == tj ? cur_i : ev.tribe_value(tj, s);
        int oi = s.choice[static_cast<std::size_t>(i)], oj = s.choice[static_cast<std::size_t>(j)];
        for (int ai = g.strategy_counts[static_cast<std::size_t>(i)] - 1; ai >= 0; --ai) {
            for (int aj = g.strategy_counts[static_cast<std::size_t>(j)] - 1; aj >= 0; --aj) {
                if (ai == oi && aj == oj) continue;
                s.choice[static_cast<std::size_t>(i)] = ai;
                s.choice[static_cast<std::size_t>(j)] = aj;
                Rational vi = ev.tribe_value(ti, s);
                Rational vj = ti == tj ? vi : ev.tribe_value(tj, s);
                s.choice[static_cast<std::size_t>(i)] = oi;
                s.choice[static_cast<std::size_t>(j)] = oj;
                bool better_i = improves(g.orientation, vi, cur_i);
                bool better_j = improves(g.orientation, vj, cur_j);
                bool blocks;
                if (mode == PairBlocking::BothStrict) {
                    blocks = better_i && better_j;
                } else {
                    bool worse_i = improves(g.orientation, cur_i, vi);
                    bool worse_j = improves(g.orientation, cur_j, vj);
                    blocks = (better_i && !worse_j) || (better_j && !worse_i);
                }
                if (blocks) {
                    // the deviating set is the whole pair, even if one side
                    // keeps its strategy: the recheck must see both tribes
                    return Witness{{{i, ai}, {j, aj}}};
                }
            }
        }
    }
    return std::nullopt;
}

inline CheckResult check_stable(const TribalEvaluator& ev, StrategyProfile& scratch, const DeviationConcept& dc,
                                const Budgets& budgets) {
    std::optional<Witness> block;
    switch (dc.kind) {
    case ConceptKind::Unilateral:
        block = find_unilateral_block(ev, scratch);
        break;
    case ConceptKind::Pairwise:
        block = find_unilateral_block(ev, scratch);
        if (!block) block = find_pair_block(ev, scratch, *dc.adjacency, dc.blocking);
        break;
    case ConceptKind::Coordinated:
        block = find_unilateral_block(ev, scratch);
        if (!block) block = find_tribe_block(ev, scratch, budgets);
        break;
    case ConceptKind::Oligopolistic:
        // single-member joint moves make the unilateral condition redundant
        block = find_tribe_block(ev, scratch, budgets);
        break;
    }
    if (block) return {false, std::move(block)};
    return {true, std::nullopt};
}

inline void validate_concept(const Game& game, const DeviationConcept& dc) {
    if (dc.kind == ConceptKind::Pairwise) {
        if (!dc.adjacency) throw config_error("pairwise concept requires a pair adjacency relation");
        for (auto [i, j] : *dc.adjacency)
            if (i < 0 || j < 0 || i >= game.player_count() || j >= game.player_count() || i == j)
                throw structural_error("pairwise adjacency refers to invalid player pair");
    }
}

} // namespace detail

inline CheckResult is_equilibrium(const Game& base, const TribePartition& tau, const StrategyProfile& profile,
                                  const DeviationConcept& dc, const Budgets& budgets = {}) {
    if (tau.player_count() != base.player_count())
        throw structural_error("partition length does not match player count");
    base.validate_profile(profile);
    detail::validate_concept(base, dc);
    detail::TribalEvaluator ev(base, tau);
    StrategyProfile scratch = profile;
    return detail::check_stable(ev, scratch, dc, budgets);
}

// Re-verify a blocking witness by direct payoff evaluation.
inline bool recheck_witness(const Game& base, const TribePartition& tau, const StrategyProfile& profile,
                            const DeviationConcept& dc, const Witness& witness) {
    if (witness.moves.empty()) return false;
    detail::TribalEvaluator ev(base, tau);
    StrategyProfile deviated = substitute(profile, std::span<const std::pair<int, int>>(witness.moves));
    base.validate_profile(deviated);
    switch (dc.kind) {
    case ConceptKind::Unilateral: {
        if (witness.moves.size() != 1) return false;
        int i = witness.moves[0].first;
        int t = ev.tribe_of[static_cast<std::size_t>(i)];
        return improves(base.orientation, ev.tribe_value(t, deviated), ev.tribe_value(t, profile));
    }
    case ConceptKind::Pairwise: {
        // all movers' tribes must gain per the blocking mode; a unilateral
        // block is also a valid pairwise witness
        std::vector<int> tribes;
        for (auto [p, s] : witness.moves) {
            (void)s;
            int t = ev.tribe_of[static_cast<std::size_t>(p)];
            if (std::find(tribes.begin(), tribes.end(), t) == tribes.end()) tribes.push_back(t);
        }
        bool any_strict = false;
        for (int t : tribes) {
            Rational before = ev.tribe_value(t, profile);
            Rational after = ev.tribe_value(t, deviated);
            if (improves(base.orientation, after, before)) {
                any_strict = true;
            } else if (dc.blocking == PairBlocking::BothStrict || improves(base.orientation, before, after)) {
                return false;
            }
        }
        return any_strict;
    }
    case ConceptKind::Coordinated:
    case ConceptKind::Oligopolistic: {
        int t = ev.tribe_of[static_cast<std::size_t>(witness.moves[0].first)];
        for (auto [p, s] : witness.moves) {
            (void)s;
            if (ev.tribe_of[static_cast<std::size_t>(p)] != t) return false;
        }
        return improves(base.orientation, ev.tribe_value(t, deviated), ev.tribe_value(t, profile));
    }
    }
    return false;
}

struct EquilibriumReport {
    StrategyProfile profile;
    Rational welfare; // always measured in the base game
    std::map<ConceptKind, bool> survives;
    std::optional<Witness> blocking_witness;
};

// All equilibria of the tau-extension under the given deviation concept, in
// lexicographic profile order. Workers split the profile range; the merged
// output is identical for any worker count.
inline std::vector<EquilibriumReport> enumerate_equilibria(const Game& base, const TribePartition& tau,
                                                           const DeviationConcept& dc, const Budgets& budgets = {},
                                                           int workers = 1) {
    if (tau.player_count() != base.player_count())
        throw structural_error("partition length does not match player count");
    detail::validate_concept(base, dc);
    ProfileSpace space(base);
    std::uint64_t total = space.size_checked(budgets.profile_budget);

    auto scan = [&](std::uint64_t lo, std::uint64_t hi, std::vector<EquilibriumReport>& out) {
        detail::TribalEvaluator ev(base, tau);
        StrategyProfile s = space.at(lo);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            CheckResult r = detail::check_stable(ev, s, dc, budgets);
            if (r.stable) {
                Rational welfare;
                for (int i = 0; i < base.player_count(); ++i) welfare += base.payoff(i, s);
                EquilibriumReport rep;
                rep.profile = s;
                rep.welfare = welfare;
                rep.survives[dc.kind] = true;
                out.push_back(std::move(rep));
            }
            space.advance(s);
        }
    };

    if (workers < 2 || total < 2) {
        std::vector<EquilibriumReport> out;
        scan(0, total, out);
        return out;
    }
    std::uint64_t w = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), total);
    std::vector<std::vector<EquilibriumReport>> parts(w);
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    std::uint64_t chunk = (total + w - 1) / w;
    for (std::uint64_t p = 0; p < w; ++p) {
        std::uint64_t lo = p * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi, p] {
            try {
                scan(lo, hi, parts[p]);
            } catch (...) {
                errors[p] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<EquilibriumReport> out;
    for (auto& p : parts)
        for (auto& r : p) out.push_back(std::move(r));
    return out;
}

enum class DynamicsStatus { ConvergedToEquilibrium, CycleDetected, StepBudgetExhausted };

struct DynamicsResult {
    std::vector<StrategyProfile> trajectory;
    DynamicsStatus status = DynamicsStatus::ConvergedToEquilibrium;
    int moves = 0;
};

// Best-response dynamics on the tribal extension: scan players in ascending
// index; the first player with a strict improvement moves to their best
// improving strategy (lowest index on ties).
inline DynamicsResult best_response_dynamics(const Game& base, const TribePartition& tau, const StrategyProfile& start,
                                             int max_steps) {
    if (max_steps < 0) throw validation_error("best_response_dynamics: max_steps must be nonnegative");
    if (tau.player_count() != base.player_count())
        throw structural_error("partition length does not match player count");
    base.validate_profile(start);
    detail::TribalEvaluator ev(base, tau);
    ProfileSpace space(base);

    DynamicsResult result;
    result.trajectory.push_back(start);
    std::unordered_set<std::uint64_t> visited{space.index_of(start)};
    StrategyProfile s = start;
    while (true) {
        int mover = -1, target = -1;
        for (int i = 0; i < base.player_count() && mover < 0; ++i) {
            int t = ev.tribe_of[static_cast<std::size_t>(i)];
            Rational best = ev.tribe_value(t, s);
            int original = s.choice[static_cast<std::size_t>(i)];
            for (int alt = 0; alt < base.strategy_counts[static_cast<std::size_t>(i)]; ++alt) {
                if (alt == original) continue;
                s.choice[static_cast<std::size_t>(i)] = alt;
                Rational val = ev.tribe_value(t, s);
                s.choice[static_cast<std::size_t>(i)] = original;
                if (improves(base.orientation, val, best)) {
                    best = val;
                    mover = i;
                    target = alt;
                }
            }
        }
        if (mover < 0) {
            result.status = DynamicsStatus::ConvergedToEquilibrium;
            return result;
        }
        if (result.moves == max_steps) {
            result.status = DynamicsStatus::StepBudgetExhausted;
            return result;
        }
        s.choice[static_cast<std::size_t>(mover)] = target;
        ++result.moves;
        result.trajectory.push_back(s);
        std::uint64_t idx = space.index_of(s);
        if (!visited.insert(idx).second) {
            result.status = DynamicsStatus::CycleDetected;
            return result;
        }
    }
}

// Exhaustive welfare optimum; lexicographically first profile among ties.
inline std::pair<StrategyProfile, Rational> compute_optimum(const Game& base, const Budgets& budgets = {},
                                                            int workers = 1) {
    ProfileSpace space(base);
    std::uint64_t total = space.size_checked(budgets.profile_budget);

    struct Best {
        Rational welfare;
        std::uint64_t index = 0;
        StrategyProfile profile;
        bool set = false;
    };
    auto scan = [&](std::uint64_t lo, std::uint64_t hi, Best& best) {
        StrategyProfile s = space.at(lo);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            Rational welfare;
            for (int i = 0; i < base.player_count(); ++i) welfare += base.payoff(i, s);
            bool better = !best.set || (base.orientation == Orientation::CostMin ? welfare < best.welfare
                                                                                 : welfare > best.welfare);
            if (better) {
                best = {welfare, idx, s, true};
            }
            space.advance(s);
        }
    };

    std::uint64_t w = workers < 2 ? 1 : std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), total);
    std::vector<Best> bests(w);
    if (w == 1) {
        scan(0, total, bests[0]);
    } else {
        std::vector<std::exception_ptr> errors(w);
        std::vector<std::thread> threads;
        std::uint64_t chunk = (total + w - 1) / w;
        for (std::uint64_t p = 0; p < w; ++p) {
            std::uint64_t lo = p * chunk, hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back([&, lo, hi, p] {
                try {
                    scan(lo, hi, bests[p]);
                } catch (...) {
                    errors[p] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Best overall;
    for (const Best& b : bests) {
        if (!b.set) continue;
        bool better = !overall.set ||
                      (base.orientation == Orientation::CostMin ? b.welfare < overall.welfare
                                                                : b.welfare > overall.welfare) ||
                      (b.welfare == overall.welfare && b.index < overall.index);
        if (better) overall = b;
    }
    return {overall.profile, overall.welfare};
}

struct PotReport {
    Rational optimum_welfare;
    StrategyProfile optimum_profile;
    std::optional<Rational> worst_eq_welfare;
    std::optional<StrategyProfile> worst_eq_profile;
    std::optional<Rational> ratio; // nullopt marks "no equilibrium constraint binds"
    std::uint64_t equilibrium_count = 0;
};

// Inefficiency ratio over the union of equilibrium sets across the supplied
// partitions, measured against the exhaustive optimum of the base game.
inline PotReport compute_pot(const Game& base, std::span<const TribePartition> partitions,
                             const DeviationConcept& dc, const Budgets& budgets = {}, int workers = 1) {
    if (partitions.empty()) throw config_error("compute_pot: empty partition list");
    PotReport report;
    auto [opt_profile, opt_welfare] = compute_optimum(base, budgets, workers);
    report.optimum_profile = std::move(opt_profile);
    report.optimum_welfare = opt_welfare;

    ProfileSpace space(base);
    std::unordered_set<std::uint64_t> seen;
    bool have_worst = false;
    Rational worst_welfare;
    std::uint64_t worst_index = 0;
    StrategyProfile worst_profile;
    for (const TribePartition& tau : partitions) {
        for (const EquilibriumReport& eq : enumerate_equilibria(base, tau, dc, budgets, workers)) {
            std::uint64_t idx = space.index_of(eq.profile);
            if (!seen.insert(idx).second) continue;
            bool worse = !have_worst ||
                         (base.orientation == Orientation::CostMin ? eq.welfare > worst_welfare
                                                                   : eq.welfare < worst_welfare) ||
                         (eq.welfare == worst_welfare && idx < worst_index);
            if (worse) {
                have_worst = true;
                worst_welfare = eq.welfare;
                worst_index = idx;
                worst_profile = eq.profile;
            }
        }
    }
    report.equilibrium_count = seen.size();
    if (!have_worst) return report;
    report.worst_eq_welfare = worst_welfare;
    report.worst_eq_profile = worst_profile;

    Rational num = base.orientation == Orientation::CostMin ? worst_welfare : report.optimum_welfare;
    Rational den = base.orientation == Orientation::CostMin ? report.optimum_welfare : worst_welfare;
    if (den.is_zero()) {
        if (num.is_zero()) report.ratio = Rational(1); // degenerate zero-vs-zero instance
        // otherwise leave the unbounded marker
    } else {
        report.ratio = num / den;
    }
    return report;
}

} // namespace tribegames
