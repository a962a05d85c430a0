#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <tribegames/json_io.hpp>

using namespace tribegames;

TEST_CASE("game documents round-trip through JSON") {
    std::vector<GameDocument> docs;
    docs.push_back({gen_four_cycle(GroupingVariant::Tribal).spec});
    docs.push_back({gen_convex_path(Rational(1, 100), 2).spec});
    docs.push_back({gen_layered_tree(2).spec});
    docs.push_back({load_balancing_to_routing(gen_layered_tree(1).spec)});

    for (const GameDocument& doc : docs) {
        Json j = document_to_json(doc);
        GameDocument back = document_from_json(j);
        CHECK(document_to_json(back) == j);

        Game a = build_document(doc).game;
        Game b = build_document(back).game;
        REQUIRE(a.strategy_counts == b.strategy_counts);
        ProfileSpace space(a);
        StrategyProfile s = space.first();
        int checked = 0;
        do {
            for (int i = 0; i < a.player_count(); ++i) CHECK(a.payoff(i, s) == b.payoff(i, s));
        } while (space.advance(s) && ++checked < 50);
    }
}

TEST_CASE("the container records shape and orientation") {
    Json j = document_to_json({gen_four_cycle(GroupingVariant::Selfish).spec});
    CHECK(j["family"] == "grouping");
    CHECK(j["players"] == 4);
    CHECK(j["orientation"] == "utility");
    CHECK(j["strategy_counts"] == Json::array({2, 2, 2, 2}));
    CHECK(j["weights"][0][1] == "1");

    Json c = document_to_json({gen_layered_tree(1).spec});
    CHECK(c["family"] == "congestion");
    CHECK(c["orientation"] == "cost");
    CHECK(c["alpha"] == Json::array({"1", "2", "2"}));
}

TEST_CASE("malformed documents carry a located diagnostic") {
    Json j = document_to_json({gen_four_cycle(GroupingVariant::Selfish).spec});
    SECTION("missing family") {
        j.erase("family");
        CHECK_THROWS_WITH(document_from_json(j), Catch::Matchers::ContainsSubstring("family"));
    }
    SECTION("recorded player count must match") {
        j["players"] = 7;
        CHECK_THROWS_WITH(document_from_json(j), Catch::Matchers::ContainsSubstring("players"));
    }
    SECTION("bad rational") {
        j["weights"][0][1] = "x/y";
        CHECK_THROWS_WITH(document_from_json(j), Catch::Matchers::ContainsSubstring("weights[0][1]"));
    }
    SECTION("unknown family tag") {
        j["family"] = "poker";
        CHECK_THROWS_AS(document_from_json(j), json_error);
    }
    SECTION("orientation mismatch") {
        j["orientation"] = "cost";
        CHECK_THROWS_WITH(document_from_json(j), Catch::Matchers::ContainsSubstring("orientation"));
    }
}

TEST_CASE("parse errors point at the file") {
    std::string path = "bad_input_test.json";
    {
        std::ofstream out(path);
        out << "{ \"family\": ";
    }
    CHECK_THROWS_WITH(load_json_file(path), Catch::Matchers::ContainsSubstring("bad_input_test.json"));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file("does_not_exist.json"), json_error);
}

TEST_CASE("partition and profile files") {
    TribePartition tau({0, 1, 1, 0});
    CHECK(partition_from_json(partition_to_json(tau)) == tau);
    CHECK_THROWS_AS(partition_from_json(Json{{"tribe_of", Json::array({0, 2})}}), json_error);
    CHECK_THROWS_AS(partition_from_json(Json::object()), json_error);

    StrategyProfile s({1, 0, 2});
    CHECK(profile_from_json(profile_to_json(s)) == s);
}

TEST_CASE("report serialisation") {
    GroupingInstance inst = gen_four_cycle(GroupingVariant::Tribal);
    Game g = build_grouping_game(inst.spec);
    std::vector<TribePartition> tau{inst.partition};
    PotReport pot = compute_pot(g, tau, DeviationConcept::unilateral());
    Json j = to_json(pot);
    CHECK(j["optimum"]["welfare"] == "12");
    CHECK(j["ratio"] == "3");
    CHECK(j["equilibrium_count"].get<int>() > 0);

    // the unbounded marker
    PotReport empty;
    empty.optimum_welfare = Rational(3);
    empty.optimum_profile = StrategyProfile({0});
    CHECK(to_json(empty)["ratio"] == "inf");
    CHECK(to_json(empty)["worst_equilibrium"].is_null());

    CheckResult r = is_equilibrium(g, singleton_partition(4), inst.profile, DeviationConcept::unilateral());
    REQUIRE_FALSE(r.stable);
    EquilibriumReport rep;
    rep.profile = inst.profile;
    rep.welfare = social_welfare(g, inst.profile);
    rep.survives[ConceptKind::Unilateral] = false;
    rep.blocking_witness = r.witness;
    Json rj = to_json(rep);
    CHECK(rj["survives"]["unilateral"] == false);
    CHECK(rj["blocking_witness"]["moves"].size() == 1);
}
