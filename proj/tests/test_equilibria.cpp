#include <catch2/catch_amalgamated.hpp>

#include <tribegames/congestion.hpp>
#include <tribegames/contribution.hpp>
#include <tribegames/equilibria.hpp>
#include <tribegames/grouping.hpp>
#include <tribegames/json_io.hpp>
#include <tribegames/partitions.hpp>

#include "test_support.hpp"

using namespace tribegames;

namespace {

// cost-minimisation matching pennies: no pure equilibrium under selfish play
Game matching_pennies() {
    using R = Rational;
    // profiles in lex order: (0,0), (0,1), (1,0), (1,1)
    return testsupport::make_table_game({2, 2}, Orientation::CostMin,
                                        {{R(0), R(1), R(1), R(0)}, {R(1), R(0), R(0), R(1)}});
}

} // namespace

TEST_CASE("equilibrium membership on the named instances") {
    SECTION("tribal four-cycle split is unilaterally stable") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        CHECK(is_equilibrium(g, inst.partition, inst.profile, DeviationConcept::unilateral()).stable);
    }
    SECTION("layered tree all-upper profile is unilaterally stable") {
        TreeInstance inst = gen_layered_tree(3);
        Game g = build_congestion_game(inst.spec);
        CHECK(is_equilibrium(g, inst.partition, inst.upper_profile, DeviationConcept::unilateral()).stable);
    }
    SECTION("crossed cycle survives whole-tribe moves") {
        GroupingInstance inst = gen_crossed_cycle();
        Game g = build_grouping_game(inst.spec);
        CHECK(is_equilibrium(g, inst.partition, inst.profile, DeviationConcept::oligopolistic()).stable);
    }
    SECTION("a selfish player breaks the tribal witness, with a re-checkable move") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        TribePartition selfish = singleton_partition(4);
        CheckResult r = is_equilibrium(g, selfish, inst.profile, DeviationConcept::unilateral());
        REQUIRE_FALSE(r.stable);
        REQUIRE(r.witness);
        CHECK(recheck_witness(g, selfish, inst.profile, DeviationConcept::unilateral(), *r.witness));
        // the move strictly improves the mover's own utility
        auto [player, strategy] = r.witness->moves.at(0);
        StrategyProfile dev = substitute(inst.profile, {{player, strategy}});
        CHECK(improves(g.orientation, g.payoff(player, dev), g.payoff(player, inst.profile)));
    }
    SECTION("pairwise needs an adjacency relation") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Selfish);
        Game g = build_grouping_game(inst.spec);
        DeviationConcept dc;
        dc.kind = ConceptKind::Pairwise;
        CHECK_THROWS_AS(is_equilibrium(g, inst.partition, inst.profile, dc), config_error);
    }
}

TEST_CASE("enumeration matches a naive scan and stays in lexicographic order") {
    GroupingInstance inst = gen_four_cycle(GroupingVariant::Selfish);
    Game g = build_grouping_game(inst.spec);
    TribePartition selfish = singleton_partition(4);
    auto reports = enumerate_equilibria(g, selfish, DeviationConcept::unilateral());

    ProfileSpace space(g);
    std::vector<std::vector<int>> naive;
    StrategyProfile s = space.first();
    do {
        if (testsupport::naive_unilateral(g, selfish, s)) naive.push_back(s.choice);
    } while (space.advance(s));

    REQUIRE(reports.size() == naive.size());
    for (std::size_t i = 0; i < naive.size(); ++i) CHECK(reports[i].profile.choice == naive[i]);

    auto contains = [&](std::vector<int> p) {
        return std::any_of(reports.begin(), reports.end(),
                           [&](const EquilibriumReport& r) { return r.profile.choice == p; });
    };
    CHECK(contains({0, 1, 1, 0}));
    CHECK(contains({1, 0, 0, 1}));
    CHECK(contains({0, 0, 0, 0}));
    CHECK(contains({1, 1, 1, 1}));
    CHECK(reports.size() == 6);
    for (const auto& r : reports) CHECK_FALSE(r.blocking_witness.has_value());
}

TEST_CASE("one-player one-strategy game has exactly one equilibrium") {
    Game g = testsupport::make_table_game({1}, Orientation::CostMin, {{Rational(5)}});
    auto reports = enumerate_equilibria(g, singleton_partition(1), DeviationConcept::unilateral());
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].welfare == Rational(5));
}

TEST_CASE("additive chain keeps the all-budget-right profile") {
    ContributionInstance inst = gen_additive_chain(1);
    ContributionGame cg = build_contribution_game(inst.spec);
    StrategyProfile right = full_budget_profile(cg, inst.witness_edges);
    auto reports = enumerate_equilibria(cg.game, inst.partition, DeviationConcept::unilateral());
    CHECK(std::any_of(reports.begin(), reports.end(),
                      [&](const EquilibriumReport& r) { return r.profile == right; }));
}

TEST_CASE("enumeration refuses oversized spaces explicitly") {
    GroupingInstance inst = gen_four_cycle(GroupingVariant::Selfish);
    Game g = build_grouping_game(inst.spec);
    Budgets tiny;
    tiny.profile_budget = 15; // space is 16
    CHECK_THROWS_AS(enumerate_equilibria(g, inst.partition, DeviationConcept::unilateral(), tiny), budget_error);
}

TEST_CASE("best response dynamics") {
    SECTION("an equilibrium start converges in zero moves") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        DynamicsResult r = best_response_dynamics(g, inst.partition, inst.profile, 100);
        CHECK(r.status == DynamicsStatus::ConvergedToEquilibrium);
        CHECK(r.moves == 0);
        CHECK(r.trajectory.size() == 1);
    }
    SECTION("selfish play walks the tribal witness to a welfare-8 split") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        DynamicsResult r = best_response_dynamics(g, singleton_partition(4), inst.profile, 100);
        CHECK(r.status == DynamicsStatus::ConvergedToEquilibrium);
        REQUIRE(r.moves == 2);
        CHECK(r.trajectory[1].choice == std::vector<int>{1, 1, 1, 0});
        CHECK(r.trajectory[2].choice == std::vector<int>{1, 1, 0, 0});
        CHECK(social_welfare(g, r.trajectory.back()) == Rational(8));
    }
    SECTION("tree instances converge without cycling") {
        for (int k = 1; k <= 4; ++k) {
            TreeInstance inst = gen_layered_tree(k);
            Game g = build_congestion_game(inst.spec);
            DynamicsResult r = best_response_dynamics(g, inst.partition, inst.lower_profile, 100000);
            CHECK(r.status == DynamicsStatus::ConvergedToEquilibrium);
        }
    }
    SECTION("step budget exhaustion is reported") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        DynamicsResult r = best_response_dynamics(g, singleton_partition(4), inst.profile, 0);
        CHECK(r.status == DynamicsStatus::StepBudgetExhausted);
        CHECK(r.moves == 0);
    }
    SECTION("a profile revisit is flagged as a cycle") {
        Game g = matching_pennies();
        DynamicsResult r =
            best_response_dynamics(g, singleton_partition(2), StrategyProfile({0, 0}), 100);
        CHECK(r.status == DynamicsStatus::CycleDetected);
        CHECK(r.moves == 4); // (0,0) -> (0,1) -> (1,1) -> (1,0) -> (0,0)
        CHECK(r.trajectory.back().choice == std::vector<int>{0, 0});
    }
}

TEST_CASE("compute_optimum scans exhaustively, lex-first tie break") {
    SECTION("tribal four-cycle optimum is everyone together") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        auto [profile, welfare] = compute_optimum(g);
        CHECK(welfare == Rational(12));
        CHECK(profile.choice == std::vector<int>{0, 0, 0, 0}); // all-in-B ties, lex-first wins
    }
    SECTION("3-layer tree optimum spreads out") {
        TreeInstance inst = gen_layered_tree(3);
        Game g = build_congestion_game(inst.spec);
        auto [profile, welfare] = compute_optimum(g);
        (void)profile;
        CHECK(welfare == Rational(6));
    }
    SECTION("zero game") {
        Game zero = testsupport::make_table_game({2, 2}, Orientation::UtilityMax,
                                                 {{Rational(0), Rational(0), Rational(0), Rational(0)},
                                                  {Rational(0), Rational(0), Rational(0), Rational(0)}});
        auto [profile, welfare] = compute_optimum(zero);
        CHECK(welfare.is_zero());
        CHECK(profile.choice == std::vector<int>{0, 0});
    }
}

TEST_CASE("inefficiency ratios on the named instances") {
    SECTION("tribal four-cycle over all 15 partitions: exactly 3") {
        GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        auto partitions = sweep_partitions(4);
        REQUIRE(partitions.size() == 15);
        PotReport pot = compute_pot(g, partitions, DeviationConcept::unilateral());
        CHECK(pot.ratio == Rational(3));
        CHECK(pot.worst_eq_welfare == Rational(4));
        CHECK(pot.optimum_welfare == Rational(12));
    }
    SECTION("pair-clique family at k=3 with pair tribes: exactly 5") {
        GroupingInstance inst = gen_pair_cliques(3, GroupingVariant::Tribal);
        Game g = build_grouping_game(inst.spec);
        std::vector<TribePartition> pairs{inst.partition};
        PotReport pot = compute_pot(g, pairs, DeviationConcept::unilateral());
        CHECK(pot.ratio == Rational(5));
    }
    SECTION("crossed cycle, whole-tribe moves: exactly 2") {
        GroupingInstance inst = gen_crossed_cycle();
        Game g = build_grouping_game(inst.spec);
        std::vector<TribePartition> tau{inst.partition};
        PotReport pot = compute_pot(g, tau, DeviationConcept::oligopolistic());
        CHECK(pot.ratio == Rational(2));
        CHECK(pot.optimum_welfare == Rational(8));
        CHECK(pot.worst_eq_welfare == Rational(4));
    }
    SECTION("no equilibrium reports the unbounded marker") {
        Game g = matching_pennies();
        std::vector<TribePartition> tau{singleton_partition(2)};
        PotReport pot = compute_pot(g, tau, DeviationConcept::unilateral());
        CHECK_FALSE(pot.ratio.has_value());
        CHECK(pot.equilibrium_count == 0);
        CHECK_FALSE(pot.worst_eq_welfare.has_value());
    }
    SECTION("empty partition list is a configuration error") {
        Game g = matching_pennies();
        std::vector<TribePartition> none;
        CHECK_THROWS_AS(compute_pot(g, none, DeviationConcept::unilateral()), config_error);
    }
}

TEST_CASE("enumeration output is identical across worker counts") {
    GroupingInstance inst = gen_four_cycle(GroupingVariant::Selfish);
    Game g = build_grouping_game(inst.spec);
    for (const TribePartition& tau : sweep_partitions(4)) {
        auto one = enumerate_equilibria(g, tau, DeviationConcept::unilateral(), {}, 1);
        auto four = enumerate_equilibria(g, tau, DeviationConcept::unilateral(), {}, 4);
        Json a = Json::array(), b = Json::array();
        for (const auto& r : one) a.push_back(to_json(r));
        for (const auto& r : four) b.push_back(to_json(r));
        REQUIRE(a.dump() == b.dump());
    }
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Game g2 = testsupport::random_table_game(rng, 4, 3, Orientation::CostMin);
        auto one = enumerate_equilibria(g2, constant_partition(g2.player_count()), DeviationConcept::unilateral(), {}, 1);
        auto three = enumerate_equilibria(g2, constant_partition(g2.player_count()), DeviationConcept::unilateral(), {}, 3);
        REQUIRE(one.size() == three.size());
        for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].profile == three[i].profile);
    }
}

TEST_CASE("padding with a zero player changes nothing") {
    Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        GroupingSpec spec = random_grouping_spec(rng, 4, 2, 3);
        Game base = build_grouping_game(spec);
        Game padded = testsupport::pad_with_zero_player(base);
        int n = base.player_count();

        std::vector<int> assignment;
        int used = 0;
        for (int i = 0; i < n; ++i) {
            int t = rng.between(0, used);
            if (t == used) ++used;
            assignment.push_back(t);
        }
        TribePartition tau(assignment);
        std::vector<int> padded_assignment = assignment;
        padded_assignment.push_back(used); // its own new tribe
        TribePartition padded_tau(padded_assignment);

        auto base_eqs = enumerate_equilibria(base, tau, DeviationConcept::unilateral());
        auto padded_eqs = enumerate_equilibria(padded, padded_tau, DeviationConcept::unilateral());
        REQUIRE(base_eqs.size() == padded_eqs.size());
        for (std::size_t i = 0; i < base_eqs.size(); ++i) {
            std::vector<int> projected = padded_eqs[i].profile.choice;
            projected.pop_back();
            CHECK(projected == base_eqs[i].profile.choice);
            CHECK(padded_eqs[i].welfare == base_eqs[i].welfare);
        }

        std::vector<TribePartition> a{tau}, b{padded_tau};
        PotReport pot_base = compute_pot(base, a, DeviationConcept::unilateral());
        PotReport pot_padded = compute_pot(padded, b, DeviationConcept::unilateral());
        CHECK(pot_base.ratio == pot_padded.ratio);
    }
}

TEST_CASE("more partitions can only worsen the worst equilibrium") {
    Rng rng(37);
    for (int trial = 0; trial < 8; ++trial) {
        GroupingSpec spec = random_grouping_spec(rng, 4, 2, 3);
        Game g = build_grouping_game(spec);
        int n = g.player_count();
        auto all = sweep_partitions(n);
        std::vector<TribePartition> single{singleton_partition(n)};
        std::vector<TribePartition> constant{constant_partition(n)};
        PotReport pot_all = compute_pot(g, all, DeviationConcept::unilateral());
        PotReport pot_single = compute_pot(g, single, DeviationConcept::unilateral());
        PotReport pot_const = compute_pot(g, constant, DeviationConcept::unilateral());
        if (pot_single.ratio && pot_all.ratio) CHECK(*pot_all.ratio >= *pot_single.ratio);
        if (pot_const.ratio && pot_all.ratio) CHECK(*pot_all.ratio >= *pot_const.ratio);
    }
}

TEST_CASE("whole-tribe stability implies unilateral stability") {
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        GroupingSpec spec = random_grouping_spec(rng, 4, 2, 2);
        Game g = build_grouping_game(spec);
        int n = g.player_count();
        for (const TribePartition& tau : sweep_partitions(n)) {
            ProfileSpace space(g);
            StrategyProfile s = space.first();
            do {
                if (is_equilibrium(g, tau, s, DeviationConcept::oligopolistic()).stable)
                    CHECK(is_equilibrium(g, tau, s, DeviationConcept::unilateral()).stable);
            } while (space.advance(s));
        }
    }
}

TEST_CASE("every blocking witness re-checks by direct evaluation") {
    Rng rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        Game g = testsupport::random_table_game(rng, 3, 3, Orientation::UtilityMax);
        int n = g.player_count();
        for (const TribePartition& tau : sweep_partitions(n)) {
            for (ConceptKind kind : {ConceptKind::Unilateral, ConceptKind::Coordinated, ConceptKind::Oligopolistic}) {
                DeviationConcept dc;
                dc.kind = kind;
                ProfileSpace space(g);
                StrategyProfile s = space.first();
                do {
                    CheckResult r = is_equilibrium(g, tau, s, dc);
                    if (!r.stable) {
                        REQUIRE(r.witness);
                        CHECK(recheck_witness(g, tau, s, dc, *r.witness));
                    }
                } while (space.advance(s));
            }
        }
    }
}
