#include <catch2/catch_amalgamated.hpp>

#include <tribegames/core.hpp>
#include <tribegames/grouping.hpp>

#include "test_support.hpp"

using namespace tribegames;

TEST_CASE("substitute") {
    StrategyProfile s({0, 1, 2});
    SECTION("no moves is the identity") { CHECK(substitute(s, {}) == s); }
    SECTION("single move replaces one coordinate") {
        StrategyProfile t = substitute(s, {{1, 0}});
        CHECK(t == StrategyProfile({0, 0, 2}));
        CHECK(s == StrategyProfile({0, 1, 2})); // input untouched
    }
    SECTION("moves on distinct players commute") {
        CHECK(substitute(s, {{0, 1}, {2, 0}}) == substitute(s, {{2, 0}, {0, 1}}));
    }
    SECTION("duplicate player is rejected") {
        CHECK_THROWS_AS(substitute(s, {{1, 0}, {1, 2}}), structural_error);
    }
    SECTION("bad indices are rejected") {
        CHECK_THROWS_AS(substitute(s, {{5, 0}}), structural_error);
        CHECK_THROWS_AS(substitute(s, {{0, -1}}), structural_error);
    }
}

TEST_CASE("profile space iterates in lexicographic order") {
    ProfileSpace space(std::vector<int>{2, 3});
    CHECK(space.total() == 6);
    StrategyProfile s = space.first();
    std::vector<std::vector<int>> seen;
    std::uint64_t idx = 0;
    do {
        CHECK(space.index_of(s) == idx);
        CHECK(space.at(idx) == s);
        seen.push_back(s.choice);
        ++idx;
    } while (space.advance(s));
    std::vector<std::vector<int>> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
    CHECK(seen == expected);
    CHECK_THROWS_AS(space.size_checked(5), budget_error);
    CHECK(space.size_checked(6) == 6);
}

TEST_CASE("tribe partitions must be dense") {
    CHECK(TribePartition({0, 1, 0}).tribe_count == 2);
    CHECK(TribePartition({0, 0, 0}).tribe_count == 1);
    CHECK_THROWS_AS(TribePartition({0, 2}), validation_error);
    CHECK_THROWS_AS(TribePartition({1, 1}), validation_error);
    CHECK_THROWS_AS(TribePartition({-1, 0}), validation_error);
    CHECK(singleton_partition(3).tribe_count == 3);
    CHECK(constant_partition(3).tribe_count == 1);
    auto members = TribePartition({0, 1, 0, 1}).members();
    CHECK(members[0] == std::vector<int>{0, 2});
    CHECK(members[1] == std::vector<int>{1, 3});
}

TEST_CASE("social welfare sums the given game's payoffs") {
    GroupingInstance left = gen_four_cycle(GroupingVariant::Selfish);
    Game g = build_grouping_game(left.spec);
    CHECK(social_welfare(g, StrategyProfile({0, 0, 0, 0})) == Rational(8));
    CHECK(social_welfare(g, left.profile) == Rational(4));

    GroupingInstance right = gen_four_cycle(GroupingVariant::Tribal);
    Game h = build_grouping_game(right.spec);
    CHECK(social_welfare(h, StrategyProfile({1, 1, 1, 1})) == Rational(12));

    Game zero = testsupport::make_table_game({2, 2}, Orientation::UtilityMax,
                                             {{Rational(0), Rational(0), Rational(0), Rational(0)},
                                              {Rational(0), Rational(0), Rational(0), Rational(0)}});
    ProfileSpace space(zero);
    StrategyProfile s = space.first();
    do {
        CHECK(social_welfare(zero, s).is_zero());
    } while (space.advance(s));
}

TEST_CASE("tribal extension") {
    GroupingInstance right = gen_four_cycle(GroupingVariant::Tribal);
    Game base = build_grouping_game(right.spec);

    SECTION("red tribe of the split profile earns 2") {
        Game ext = tribal_extension(base, right.partition);
        CHECK(ext.payoff(0, right.profile) == Rational(2));
        CHECK(ext.payoff(3, right.profile) == Rational(2));
    }
    SECTION("singleton partition reproduces the base game") {
        Game ext = tribal_extension(base, singleton_partition(4));
        ProfileSpace space(base);
        StrategyProfile s = space.first();
        do {
            for (int i = 0; i < 4; ++i) CHECK(ext.payoff(i, s) == base.payoff(i, s));
        } while (space.advance(s));
    }
    SECTION("constant partition gives everyone the social welfare") {
        for (GroupingVariant variant : {GroupingVariant::Selfish, GroupingVariant::Tribal}) {
            Game g = build_grouping_game(gen_four_cycle(variant).spec);
            Game ext = tribal_extension(g, constant_partition(4));
            ProfileSpace space(g);
            StrategyProfile s = space.first();
            do {
                Rational w = social_welfare(g, s);
                for (int i = 0; i < 4; ++i) CHECK(ext.payoff(i, s) == w);
                // welfare of the extension itself: n copies of the base welfare
                CHECK(social_welfare(ext, s) == Rational(4) * w);
            } while (space.advance(s));
        }
    }
    SECTION("length mismatch is structural") {
        CHECK_THROWS_AS(tribal_extension(base, singleton_partition(5)), structural_error);
    }
}

TEST_CASE("tribal extension equals the by-hand same-tribe sum on random games") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        Game g = testsupport::random_table_game(rng, 4, 3, trial % 2 ? Orientation::CostMin : Orientation::UtilityMax);
        int n = g.player_count();
        std::vector<int> assignment;
        int used = 0;
        for (int i = 0; i < n; ++i) {
            int t = rng.between(0, used);
            if (t == used) ++used;
            assignment.push_back(t);
        }
        TribePartition tau(assignment);
        Game ext = tribal_extension(g, tau);
        ProfileSpace space(g);
        StrategyProfile s = space.first();
        do {
            for (int i = 0; i < n; ++i) CHECK(ext.payoff(i, s) == testsupport::naive_tribe_payoff(g, tau, i, s));
        } while (space.advance(s));
    }
}
