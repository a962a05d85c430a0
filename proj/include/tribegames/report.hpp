#pragma once

#include <atomic>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json_io.hpp"
#include "partitions.hpp"

namespace tribegames {

namespace detail {

template <typename F>
void parallel_for(int n, int workers, F&& body) {
    if (workers < 2 || n < 2) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    int nthreads = std::min(workers, n);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
    auto run = [&](int slot) {
        try {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(slot)] = std::current_exception();
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < nthreads; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

// A re-certifiable stability witness: the game, the partition, the profile
// and the concept it survives.
struct StoredWitness {
    Json game;
    TribePartition partition;
    StrategyProfile profile;
    ConceptKind concept_kind = ConceptKind::Unilateral;

    Json to_json() const {
        return Json{{"game", game},
                    {"partition", partition_to_json(partition)},
                    {"profile", profile_to_json(profile)},
                    {"concept", concept_name(concept_kind)}};
    }
};

// Per-category outcome of a randomised sweep: the worst ratio seen and the
// instance attaining it.
struct SweepCategory {
    std::optional<Rational> max_ratio;
    std::optional<StoredWitness> witness;
    int instances_with_equilibria = 0;
    bool unbounded_seen = false; // equilibria present but ratio unbounded: a bound violation

    void fold(const std::optional<Rational>& ratio, bool had_equilibria, const std::function<StoredWitness()>& mk) {
        if (!had_equilibria) return;
        ++instances_with_equilibria;
        if (!ratio) {
            unbounded_seen = true;
            return;
        }
        if (!max_ratio || *ratio > *max_ratio) {
            max_ratio = ratio;
            witness = mk();
        }
    }

    bool within(const Rational& bound) const {
        if (unbounded_seen) return false;
        return !max_ratio || *max_ratio <= bound;
    }
};

namespace detail {

// Ratio and worst profile of compute_pot, plus the partition (from the swept
// list) under which the worst profile is stable, for witness storage.
struct PotOutcome {
    std::optional<Rational> ratio;
    bool has_equilibria = false;
    StrategyProfile worst_profile;
    TribePartition worst_partition;
};

inline PotOutcome pot_outcome(const Game& game, std::span<const TribePartition> partitions, const DeviationConcept& dc,
                              const Budgets& budgets, int workers = 1) {
    PotReport r = compute_pot(game, partitions, dc, budgets, workers);
    PotOutcome out;
    out.has_equilibria = r.equilibrium_count > 0;
    out.ratio = r.ratio;
    if (r.worst_eq_profile) {
        out.worst_profile = *r.worst_eq_profile;
        for (const TribePartition& tau : partitions) {
            if (is_equilibrium(game, tau, out.worst_profile, dc, budgets).stable) {
                out.worst_partition = tau;
                break;
            }
        }
    }
    return out;
}

} // namespace detail

struct GroupingSweepResult {
    int instances = 0;
    SweepCategory all_partitions;   // unilateral, every partition
    SweepCategory singleton_only;   // selfish baseline
    SweepCategory constant_only;    // full altruism
    SweepCategory oligopolistic_all;
};

// Random social grouping instances: n <= max_players, integer weights in
// [0, max_weight], `cliques` cliques.
inline GroupingSweepResult run_grouping_sweep(int count, std::uint64_t seed, int max_players, int cliques,
                                              int max_weight, const Budgets& budgets = {}, int workers = 1,
                                              bool include_oligopolistic = true) {
    Rng rng(seed);
    std::vector<GroupingSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) specs.push_back(random_grouping_spec(rng, max_players, cliques, max_weight));

    struct PerInstance {
        detail::PotOutcome all, single, constant, olig;
    };
    std::vector<PerInstance> results(static_cast<std::size_t>(count));
    detail::parallel_for(count, workers, [&](int i) {
        const GroupingSpec& spec = specs[static_cast<std::size_t>(i)];
        Game game = build_grouping_game(spec);
        auto partitions = sweep_partitions(spec.player_count(), std::nullopt, budgets);
        std::vector<TribePartition> single{singleton_partition(spec.player_count())};
        std::vector<TribePartition> constant{constant_partition(spec.player_count())};
        auto& out = results[static_cast<std::size_t>(i)];
        out.all = detail::pot_outcome(game, partitions, DeviationConcept::unilateral(), budgets);
        out.single = detail::pot_outcome(game, single, DeviationConcept::unilateral(), budgets);
        out.constant = detail::pot_outcome(game, constant, DeviationConcept::unilateral(), budgets);
        if (include_oligopolistic)
            out.olig = detail::pot_outcome(game, partitions, DeviationConcept::oligopolistic(), budgets);
    });

    GroupingSweepResult sweep;
    sweep.instances = count;
    for (int i = 0; i < count; ++i) {
        auto mk = [&](const detail::PotOutcome& o, ConceptKind kind) {
            return [&, kind]() {
                GameDocument doc{specs[static_cast<std::size_t>(i)]};
                return StoredWitness{document_to_json(doc), o.worst_partition, o.worst_profile, kind};
            };
        };
        const PerInstance& r = results[static_cast<std::size_t>(i)];
        sweep.all_partitions.fold(r.all.ratio, r.all.has_equilibria, mk(r.all, ConceptKind::Unilateral));
        sweep.singleton_only.fold(r.single.ratio, r.single.has_equilibria, mk(r.single, ConceptKind::Unilateral));
        sweep.constant_only.fold(r.constant.ratio, r.constant.has_equilibria, mk(r.constant, ConceptKind::Unilateral));
        if (include_oligopolistic)
            sweep.oligopolistic_all.fold(r.olig.ratio, r.olig.has_equilibria, mk(r.olig, ConceptKind::Oligopolistic));
    }
    return sweep;
}

struct ContributionSweepResult {
    int instances = 0;
    SweepCategory all_partitions;
    SweepCategory constant_only;
};

// Random contribution instances. Additive rewards are checked against
// unilateral equilibria, product rewards against pairwise ones (single
// deviations cannot light up an xy edge, so the pure concept degenerates).
inline ContributionSweepResult run_contribution_sweep(RewardClass cls, int count, std::uint64_t seed,
                                                      const Budgets& budgets = {}, int workers = 1) {
    Rng rng(seed);
    std::vector<ContributionSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) specs.push_back(random_contribution_spec(rng, cls));

    struct PerInstance {
        detail::PotOutcome all, constant;
    };
    std::vector<PerInstance> results(static_cast<std::size_t>(count));
    detail::parallel_for(count, workers, [&](int i) {
        const ContributionSpec& spec = specs[static_cast<std::size_t>(i)];
        ContributionGame cg = build_contribution_game(spec);
        DeviationConcept dc = cls == RewardClass::Additive ? DeviationConcept::unilateral()
                                                           : DeviationConcept::pairwise(cg.adjacency);
        auto partitions = sweep_partitions(spec.vertex_count, std::nullopt, budgets);
        std::vector<TribePartition> constant{constant_partition(spec.vertex_count)};
        auto& out = results[static_cast<std::size_t>(i)];
        out.all = detail::pot_outcome(cg.game, partitions, dc, budgets);
        out.constant = detail::pot_outcome(cg.game, constant, dc, budgets);
    });

    ContributionSweepResult sweep;
    sweep.instances = count;
    ConceptKind kind = cls == RewardClass::Additive ? ConceptKind::Unilateral : ConceptKind::Pairwise;
    for (int i = 0; i < count; ++i) {
        auto mk = [&](const detail::PotOutcome& o) {
            return [&]() {
                GameDocument doc{specs[static_cast<std::size_t>(i)]};
                return StoredWitness{document_to_json(doc), o.worst_partition, o.worst_profile, kind};
            };
        };
        const PerInstance& r = results[static_cast<std::size_t>(i)];
        sweep.all_partitions.fold(r.all.ratio, r.all.has_equilibria, mk(r.all));
        sweep.constant_only.fold(r.constant.ratio, r.constant.has_equilibria, mk(r.constant));
    }
    return sweep;
}

struct CongestionSweepResult {
    int instances = 0;
    bool smoothness_holds = true; // (8/3, 1/3) over every partition of every instance
    std::optional<Rational> min_slack;
    SweepCategory all_partitions;
    SweepCategory singleton_only;
    SweepCategory constant_only;
    bool smooth_bound_respected = true; // every equilibrium within lambda/(1-mu) of optimum
};

inline CongestionSweepResult run_congestion_sweep(int count, std::uint64_t seed, const Budgets& budgets = {},
                                                  int workers = 1) {
    Rng rng(seed);
    std::vector<CongestionSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) specs.push_back(random_congestion_spec(rng));

    SmoothnessParams params(Rational(8, 3), Rational(1, 3));
    Rational bound = smoothness_pot_bound(params); // 4
    struct PerInstance {
        detail::PotOutcome all, single, constant;
        bool smooth = true;
        std::optional<Rational> min_slack;
        bool within_bound = true;
    };
    std::vector<PerInstance> results(static_cast<std::size_t>(count));
    detail::parallel_for(count, workers, [&](int i) {
        const CongestionSpec& spec = specs[static_cast<std::size_t>(i)];
        Game game = build_congestion_game(spec);
        auto partitions = sweep_partitions(spec.player_count(), std::nullopt, budgets);
        auto& out = results[static_cast<std::size_t>(i)];
        for (const TribePartition& tau : partitions) {
            SmoothnessReport rep = check_smoothness(game, tau, params, SmoothnessMode::exhaustive(), budgets);
            if (!out.min_slack || rep.min_slack < *out.min_slack) out.min_slack = rep.min_slack;
            if (!rep.holds) out.smooth = false;
        }
        std::vector<TribePartition> single{singleton_partition(spec.player_count())};
        std::vector<TribePartition> constant{constant_partition(spec.player_count())};
        out.all = detail::pot_outcome(game, partitions, DeviationConcept::unilateral(), budgets);
        out.single = detail::pot_outcome(game, single, DeviationConcept::unilateral(), budgets);
        out.constant = detail::pot_outcome(game, constant, DeviationConcept::unilateral(), budgets);
        if (out.all.has_equilibria && (!out.all.ratio || *out.all.ratio > bound)) out.within_bound = false;
    });

    CongestionSweepResult sweep;
    sweep.instances = count;
    for (int i = 0; i < count; ++i) {
        auto mk = [&](const detail::PotOutcome& o) {
            return [&]() {
                GameDocument doc{specs[static_cast<std::size_t>(i)]};
                return StoredWitness{document_to_json(doc), o.worst_partition, o.worst_profile, ConceptKind::Unilateral};
            };
        };
        const PerInstance& r = results[static_cast<std::size_t>(i)];
        if (!r.smooth) sweep.smoothness_holds = false;
        if (!r.within_bound) sweep.smooth_bound_respected = false;
        if (r.min_slack && (!sweep.min_slack || *r.min_slack < *sweep.min_slack)) sweep.min_slack = r.min_slack;
        sweep.all_partitions.fold(r.all.ratio, r.all.has_equilibria, mk(r.all));
        sweep.singleton_only.fold(r.single.ratio, r.single.has_equilibria, mk(r.single));
        sweep.constant_only.fold(r.constant.ratio, r.constant.has_equilibria, mk(r.constant));
    }
    return sweep;
}

// Certification record for one layered-tree instance.
struct TreeCheck {
    int k = 0;
    bool upper_is_equilibrium = false;
    Rational upper_cost;
    Rational lower_cost;
    std::optional<Rational> optimum; // enumerated for small k only
    std::optional<Rational> ratio_vs_optimum;
    Rational ratio_vs_lower; // upper cost over lower-profile cost (a lower bound on the true ratio)
};

inline TreeCheck check_tree_family(int k, bool enumerate_optimum, const Budgets& budgets = {}, int workers = 1) {
    TreeInstance inst = gen_layered_tree(k);
    Game game = build_congestion_game(inst.spec);
    TreeCheck out;
    out.k = k;
    out.upper_is_equilibrium =
        is_equilibrium(game, inst.partition, inst.upper_profile, DeviationConcept::unilateral(), budgets).stable;
    out.upper_cost = social_welfare(game, inst.upper_profile);
    out.lower_cost = social_welfare(game, inst.lower_profile);
    out.ratio_vs_lower = out.upper_cost / out.lower_cost;
    if (enumerate_optimum) {
        auto [profile, welfare] = compute_optimum(game, budgets, workers);
        (void)profile;
        out.optimum = welfare;
        out.ratio_vs_optimum = out.upper_cost / welfare;
    }
    return out;
}

struct ReportRow {
    std::string family;
    std::string measure;
    std::string target;
    std::optional<Rational> witness_ratio;
    std::optional<Rational> sweep_max;
    bool pass = false;
    std::string note;
    std::optional<StoredWitness> witness;
};

struct ReproduceOptions {
    bool fast = false;
    int workers = 2;
    std::uint64_t seed = 42;
    Budgets budgets;
};

struct ReproduceReport {
    std::vector<ReportRow> rows;
    bool all_pass = true;
    std::uint64_t seed = 0;
    bool fast = false;
};

namespace detail {

inline std::string ratio_text(const std::optional<Rational>& r) {
    if (!r) return "-";
    return r->str() + " (" + r->decimal(6) + ")";
}

} // namespace detail

inline ReproduceReport run_reproduce(const ReproduceOptions& opts = {}) {
    ReproduceReport report;
    report.seed = opts.seed;
    report.fast = opts.fast;
    const Budgets& budgets = opts.budgets;
    int workers = opts.workers;
    int g2_count = opts.fast ? 25 : 200;
    int g3_count = opts.fast ? 10 : 60;
    int add_count = opts.fast ? 12 : 80;
    int conv_count = opts.fast ? 10 : 60;
    int cong_count = opts.fast ? 15 : 100;

    auto add_row = [&](ReportRow row) {
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    };
    auto witness_of = [&](const FamilySpec& family, const TribePartition& tau, const StrategyProfile& profile,
                          ConceptKind kind) {
        GameDocument doc{family};
        return StoredWitness{document_to_json(doc), tau, profile, kind};
    };

    // --- social grouping, two cliques ---
    {
        GroupingSweepResult sweep =
            run_grouping_sweep(g2_count, opts.seed ^ 0x67726f32ULL, 5, 2, 3, budgets, workers, true);

        GroupingInstance selfish = gen_four_cycle(GroupingVariant::Selfish);
        Game game = build_grouping_game(selfish.spec);
        std::vector<TribePartition> single{singleton_partition(4)};
        std::vector<TribePartition> constant{constant_partition(4)};
        PotReport selfish_pot = compute_pot(game, single, DeviationConcept::unilateral(), budgets, workers);
        PotReport altruistic_pot = compute_pot(game, constant, DeviationConcept::unilateral(), budgets, workers);

        ReportRow poa;
        poa.family = "social grouping, 2 cliques";
        poa.measure = "selfish price";
        poa.target = "2";
        poa.witness_ratio = selfish_pot.ratio;
        poa.sweep_max = sweep.singleton_only.max_ratio;
        poa.pass = selfish_pot.ratio == Rational(2) && sweep.singleton_only.within(Rational(2));
        poa.witness = witness_of(selfish.spec, single[0], selfish.profile, ConceptKind::Unilateral);
        add_row(std::move(poa));

        ReportRow alt;
        alt.family = "social grouping, 2 cliques";
        alt.measure = "altruistic price";
        alt.target = "2";
        alt.witness_ratio = altruistic_pot.ratio;
        alt.sweep_max = sweep.constant_only.max_ratio;
        alt.pass = altruistic_pot.ratio == Rational(2) && sweep.constant_only.within(Rational(2));
        alt.witness = witness_of(selfish.spec, constant[0], selfish.profile, ConceptKind::Unilateral);
        add_row(std::move(alt));

        GroupingInstance tribal = gen_four_cycle(GroupingVariant::Tribal);
        Game tribal_game = build_grouping_game(tribal.spec);
        auto partitions = sweep_partitions(4, std::nullopt, budgets);
        PotReport tribal_pot = compute_pot(tribal_game, partitions, DeviationConcept::unilateral(), budgets, workers);
        ReportRow pot;
        pot.family = "social grouping, 2 cliques";
        pot.measure = "tribal price";
        pot.target = "3";
        pot.witness_ratio = tribal_pot.ratio;
        pot.sweep_max = sweep.all_partitions.max_ratio;
        pot.pass = tribal_pot.ratio == Rational(3) && sweep.all_partitions.within(Rational(3));
        pot.witness = witness_of(tribal.spec, tribal.partition, tribal.profile, ConceptKind::Unilateral);
        add_row(std::move(pot));

        GroupingInstance crossed = gen_crossed_cycle();
        Game crossed_game = build_grouping_game(crossed.spec);
        std::vector<TribePartition> crossed_tau{crossed.partition};
        PotReport crossed_pot =
            compute_pot(crossed_game, crossed_tau, DeviationConcept::oligopolistic(), budgets, workers);
        detail::TribalEvaluator ev(crossed_game, crossed.partition);
        ReportRow coord;
        coord.family = "social grouping, 2 cliques";
        coord.measure = "coordinated price";
        coord.target = "2";
        coord.witness_ratio = crossed_pot.ratio;
        coord.sweep_max = sweep.oligopolistic_all.max_ratio;
        coord.pass = crossed_pot.ratio == Rational(2) && sweep.oligopolistic_all.within(Rational(2));
        coord.note = "witness tribe utilities: " + ev.tribe_value(0, crossed.profile).str() + " and " +
                     ev.tribe_value(1, crossed.profile).str() + " (welfare " +
                     social_welfare(crossed_game, crossed.profile).str() + ", optimum " +
                     crossed_pot.optimum_welfare.str() + ")";
        coord.witness = witness_of(crossed.spec, crossed.partition, crossed.profile, ConceptKind::Oligopolistic);
        add_row(std::move(coord));
    }

    // --- social grouping, k cliques (k = 3) ---
    {
        const int k = 3;
        GroupingSweepResult sweep =
            run_grouping_sweep(g3_count, opts.seed ^ 0x67726f33ULL, 5, k, 3, budgets, workers, false);
        GroupingInstance selfish = gen_pair_cliques(k, GroupingVariant::Selfish);
        Game game = build_grouping_game(selfish.spec);
        std::vector<TribePartition> single{singleton_partition(2 * k)};
        std::vector<TribePartition> constant{constant_partition(2 * k)};
        PotReport poa_pot = compute_pot(game, single, DeviationConcept::unilateral(), budgets, workers);
        PotReport alt_pot = compute_pot(game, constant, DeviationConcept::unilateral(), budgets, workers);

        ReportRow poa;
        poa.family = "social grouping, 3 cliques";
        poa.measure = "selfish price";
        poa.target = "3";
        poa.witness_ratio = poa_pot.ratio;
        poa.pass = poa_pot.ratio == Rational(k);
        poa.witness = witness_of(selfish.spec, single[0], selfish.profile, ConceptKind::Unilateral);
        add_row(std::move(poa));

        ReportRow alt;
        alt.family = "social grouping, 3 cliques";
        alt.measure = "altruistic price";
        alt.target = "3";
        alt.witness_ratio = alt_pot.ratio;
        alt.pass = alt_pot.ratio == Rational(k);
        alt.witness = witness_of(selfish.spec, constant[0], selfish.profile, ConceptKind::Unilateral);
        add_row(std::move(alt));

        GroupingInstance tribal = gen_pair_cliques(k, GroupingVariant::Tribal);
        Game tribal_game = build_grouping_game(tribal.spec);
        std::vector<TribePartition> pair_tau{tribal.partition};
        PotReport tribal_pot = compute_pot(tribal_game, pair_tau, DeviationConcept::unilateral(), budgets, workers);
        ReportRow pot;
        pot.family = "social grouping, 3 cliques";
        pot.measure = "tribal price";
        pot.target = "5";
        pot.witness_ratio = tribal_pot.ratio;
        pot.sweep_max = sweep.all_partitions.max_ratio;
        pot.pass = tribal_pot.ratio == Rational(2 * k - 1) && sweep.all_partitions.within(Rational(2 * k - 1));
        pot.witness = witness_of(tribal.spec, tribal.partition, tribal.profile, ConceptKind::Unilateral);
        add_row(std::move(pot));
    }

    // --- network contribution, additive rewards ---
    {
        ContributionSweepResult sweep =
            run_contribution_sweep(RewardClass::Additive, add_count, opts.seed ^ 0x61646431ULL, budgets, workers);
        ContributionInstance chain = gen_additive_chain(1);
        ContributionGame cg = build_contribution_game(chain.spec);
        StrategyProfile right = full_budget_profile(cg, chain.witness_edges);
        std::vector<TribePartition> tau{chain.partition};
        std::vector<TribePartition> constant{constant_partition(3)};
        PotReport tribal_pot = compute_pot(cg.game, tau, DeviationConcept::unilateral(), budgets, workers);
        PotReport alt_pot = compute_pot(cg.game, constant, DeviationConcept::unilateral(), budgets, workers);

        ReportRow pot;
        pot.family = "network contribution, additive";
        pot.measure = "tribal price";
        pot.target = "2";
        pot.witness_ratio = tribal_pot.ratio;
        pot.sweep_max = sweep.all_partitions.max_ratio;
        pot.pass = tribal_pot.ratio == Rational(2) && sweep.all_partitions.within(Rational(2));
        pot.witness = witness_of(chain.spec, chain.partition, right, ConceptKind::Unilateral);
        add_row(std::move(pot));

        ReportRow alt;
        alt.family = "network contribution, additive";
        alt.measure = "altruistic price";
        alt.target = "1";
        alt.witness_ratio = alt_pot.ratio;
        alt.sweep_max = sweep.constant_only.max_ratio;
        alt.pass = alt_pot.ratio == Rational(1) && sweep.constant_only.within(Rational(1));
        if (alt_pot.worst_eq_profile)
            alt.witness = witness_of(chain.spec, constant[0], *alt_pot.worst_eq_profile, ConceptKind::Unilateral);
        add_row(std::move(alt));
    }

    // --- network contribution, convex rewards ---
    {
        ContributionSweepResult sweep =
            run_contribution_sweep(RewardClass::ScaledProduct, conv_count, opts.seed ^ 0x636f6e76ULL, budgets, workers);
        int grid = opts.fast ? 2 : 4;
        ContributionInstance path = gen_convex_path(Rational(1, 100), grid);
        ContributionGame cg = build_contribution_game(path.spec);
        StrategyProfile odd = full_budget_profile(cg, path.witness_edges);
        std::vector<TribePartition> tau{path.partition};
        PotReport pot_report =
            compute_pot(cg.game, tau, DeviationConcept::pairwise(cg.adjacency), budgets, workers);
        ReportRow pot;
        pot.family = "network contribution, convex";
        pot.measure = "tribal price";
        pot.target = "4 (approached)";
        pot.witness_ratio = pot_report.ratio;
        pot.sweep_max = sweep.all_partitions.max_ratio;
        pot.pass = pot_report.ratio == Rational(400, 106) && sweep.all_partitions.within(Rational(4));
        pot.note = "witness ratio 400/106 at eps=1/100, grid 1/" + std::to_string(grid);
        pot.witness = witness_of(path.spec, path.partition, odd, ConceptKind::Pairwise);
        add_row(std::move(pot));

        ContributionInstance square = gen_altruistic_square(Rational(1, 10), opts.fast ? 1 : 2);
        ContributionGame sq = build_contribution_game(square.spec);
        StrategyProfile half = full_budget_profile(sq, square.witness_edges);
        std::vector<TribePartition> constant{square.partition};
        PotReport alt_report =
            compute_pot(sq.game, constant, DeviationConcept::pairwise(sq.adjacency), budgets, workers);
        ReportRow alt;
        alt.family = "network contribution, convex";
        alt.measure = "altruistic price";
        alt.target = "2 (approached)";
        alt.witness_ratio = alt_report.ratio;
        alt.sweep_max = sweep.constant_only.max_ratio;
        alt.pass = alt_report.ratio == Rational(9, 5) && sweep.constant_only.within(Rational(2));
        alt.note = "witness ratio 9/5 at eps=1/10";
        alt.witness = witness_of(square.spec, square.partition, half, ConceptKind::Pairwise);
        add_row(std::move(alt));
    }

    // --- atomic linear congestion ---
    {
        CongestionSweepResult sweep = run_congestion_sweep(cong_count, opts.seed ^ 0x636f6e67ULL, budgets, workers);

        ReportRow poa;
        poa.family = "atomic linear congestion";
        poa.measure = "selfish price";
        poa.target = "<= 5/2";
        poa.sweep_max = sweep.singleton_only.max_ratio;
        poa.pass = sweep.singleton_only.within(Rational(5, 2));
        if (sweep.singleton_only.witness) poa.witness = sweep.singleton_only.witness;
        add_row(std::move(poa));

        ReportRow alt;
        alt.family = "atomic linear congestion";
        alt.measure = "altruistic price";
        alt.target = "<= 3";
        alt.sweep_max = sweep.constant_only.max_ratio;
        alt.pass = sweep.constant_only.within(Rational(3));
        if (sweep.constant_only.witness) alt.witness = sweep.constant_only.witness;
        add_row(std::move(alt));

        const int k = 8;
        TreeCheck tree = check_tree_family(k, false, budgets, workers);
        QuadScanResult quad = quad_inequality_scan(100);
        TreeInstance g2 = gen_layered_tree(2);
        Game g2_game = build_congestion_game(g2.spec);
        SmoothnessParams params(Rational(8, 3), Rational(1, 3));
        SmoothnessReport g2_smooth =
            check_smoothness(g2_game, g2.partition, params, SmoothnessMode::exhaustive(), budgets, workers);

        ReportRow pot;
        pot.family = "atomic linear congestion";
        pot.measure = "tribal price";
        pot.target = "4 (approached)";
        pot.witness_ratio = tree.ratio_vs_lower;
        pot.sweep_max = sweep.all_partitions.max_ratio;
        pot.pass = tree.upper_is_equilibrium && tree.upper_cost == Rational(4 * k) &&
                   tree.lower_cost == Rational(k + 3) && tree.ratio_vs_lower == Rational(32, 11) &&
                   quad.holds && quad_margin(1, 1).is_zero() && g2_smooth.holds && sweep.smoothness_holds &&
                   sweep.smooth_bound_respected && sweep.all_partitions.within(Rational(4));
        pot.note = "measured >= 32/11 at k=8; bound <= 4 via (8/3, 1/3) smoothness";
        {
            TreeInstance inst = gen_layered_tree(k);
            pot.witness = witness_of(inst.spec, inst.partition, inst.upper_profile, ConceptKind::Unilateral);
        }
        add_row(std::move(pot));

        ReportRow gadget;
        gadget.family = "atomic linear congestion";
        gadget.measure = "routing gadget";
        gadget.target = "cost-preserving";
        gadget.pass = gadget_cost_equality(gen_layered_tree(2).spec, budgets);
        gadget.note = "profile-by-profile cost equality on the 3-layer tree conversion";
        add_row(std::move(gadget));
    }

    return report;
}

inline Json report_to_json(const ReproduceReport& report) {
    Json rows = Json::array();
    for (const ReportRow& row : report.rows) {
        Json j{{"family", row.family}, {"measure", row.measure},  {"target", row.target},
               {"pass", row.pass},     {"note", row.note}};
        j["witness_ratio"] = row.witness_ratio ? Json(row.witness_ratio->str()) : Json(nullptr);
        j["sweep_max"] = row.sweep_max ? Json(row.sweep_max->str()) : Json(nullptr);
        j["witness"] = row.witness ? row.witness->to_json() : Json(nullptr);
        rows.push_back(std::move(j));
    }
    return Json{{"rows", rows}, {"all_pass", report.all_pass}, {"seed", report.seed}, {"fast", report.fast}};
}

inline std::string report_to_text(const ReproduceReport& report) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"family", "measure", "target", "witness ratio", "sweep max", "verdict"});
    for (const ReportRow& row : report.rows)
        cells.push_back({row.family, row.measure, row.target, detail::ratio_text(row.witness_ratio),
                         detail::ratio_text(row.sweep_max), row.pass ? "PASS" : "FAIL"});
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            out << cells[r][c] << std::string(width[c] - cells[r][c].size() + (c + 1 == cells[r].size() ? 0 : 2), ' ');
        }
        out << '\n';
        if (r == 0) {
            std::size_t line = 0;
            for (std::size_t c = 0; c < width.size(); ++c) line += width[c] + (c + 1 == width.size() ? 0 : 2);
            out << std::string(line, '-') << '\n';
        }
    }
    for (const ReportRow& row : report.rows)
        if (!row.note.empty()) out << "note (" << row.family << ", " << row.measure << "): " << row.note << '\n';
    out << (report.all_pass ? "ALL PASS" : "FAILURES PRESENT") << " [seed " << report.seed
        << (report.fast ? ", fast mode" : "") << "]\n";
    return out.str();
}

} // namespace tribegames
