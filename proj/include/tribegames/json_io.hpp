#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "congestion.hpp"
#include "contribution.hpp"
#include "core.hpp"
#include "equilibria.hpp"
#include "grouping.hpp"

namespace tribegames {

// malformed input files: carries a location-bearing message for the CLI
class json_error : public error {
public:
    using error::error;
};

using Json = nlohmann::json;

namespace jio {

inline const Json& require(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw json_error(where + ": missing field '" + key + "'");
    return *it;
}

inline int require_int(const Json& j, const char* key, const std::string& where) {
    const Json& v = require(j, key, where);
    if (!v.is_number_integer()) throw json_error(where + "." + key + ": expected an integer");
    return v.get<int>();
}

inline Rational rational_from_json(const Json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) throw json_error(where + ": expected a rational as \"p/q\" string");
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw json_error(where + ": " + e.what());
    }
}

} // namespace jio

inline Json to_json(const Rational& r) { return r.str(); }

inline Json to_json(const StrategyProfile& s) { return Json(s.choice); }

inline Json to_json(const Witness& w) {
    Json moves = Json::array();
    for (auto [p, t] : w.moves) moves.push_back(Json::array({p, t}));
    return Json{{"moves", moves}};
}

inline Json to_json(const EquilibriumReport& r) {
    Json survives = Json::object();
    for (auto [kind, ok] : r.survives) survives[concept_name(kind)] = ok;
    Json j{{"profile", to_json(r.profile)}, {"welfare", to_json(r.welfare)}, {"survives", survives}};
    j["blocking_witness"] = r.blocking_witness ? to_json(*r.blocking_witness) : Json(nullptr);
    return j;
}

inline Json to_json(const PotReport& r) {
    Json j;
    j["optimum"] = Json{{"welfare", to_json(r.optimum_welfare)}, {"profile", to_json(r.optimum_profile)}};
    if (r.worst_eq_welfare)
        j["worst_equilibrium"] = Json{{"welfare", to_json(*r.worst_eq_welfare)}, {"profile", to_json(*r.worst_eq_profile)}};
    else
        j["worst_equilibrium"] = nullptr;
    j["ratio"] = r.ratio ? Json(r.ratio->str()) : Json("inf");
    j["equilibrium_count"] = r.equilibrium_count;
    return j;
}

inline Json to_json(const SmoothnessReport& r) {
    Json j{{"holds", r.holds}, {"min_slack", to_json(r.min_slack)}, {"pairs_checked", r.pairs_checked}};
    if (r.witness)
        j["witness"] = Json{{"s", to_json(r.witness->first)}, {"target", to_json(r.witness->second)}};
    else
        j["witness"] = nullptr;
    j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
    return j;
}

inline Json partition_to_json(const TribePartition& tau) { return Json{{"tribe_of", tau.tribe_of}}; }

inline TribePartition partition_from_json(const Json& j) {
    const Json& v = jio::require(j, "tribe_of", "partition");
    if (!v.is_array()) throw json_error("partition.tribe_of: expected an array");
    try {
        return TribePartition(v.get<std::vector<int>>());
    } catch (const validation_error& e) {
        throw json_error(std::string("partition.tribe_of: ") + e.what());
    }
}

inline Json profile_to_json(const StrategyProfile& s) { return Json{{"choice", s.choice}}; }

inline StrategyProfile profile_from_json(const Json& j) {
    const Json& v = jio::require(j, "choice", "profile");
    if (!v.is_array()) throw json_error("profile.choice: expected an array");
    return StrategyProfile(v.get<std::vector<int>>());
}

using FamilySpec = std::variant<GroupingSpec, ContributionSpec, CongestionSpec, RoutingSpec>;

struct GameDocument {
    FamilySpec family;
};

struct BuiltGame {
    Game game;
    std::optional<std::vector<std::pair<int, int>>> adjacency; // present for contribution games
};

inline BuiltGame build_document(const GameDocument& doc) {
    BuiltGame out;
    if (const auto* g = std::get_if<GroupingSpec>(&doc.family)) {
        out.game = build_grouping_game(*g);
    } else if (const auto* c = std::get_if<ContributionSpec>(&doc.family)) {
        ContributionGame cg = build_contribution_game(*c);
        out.game = std::move(cg.game);
        out.adjacency = std::move(cg.adjacency);
    } else if (const auto* r = std::get_if<CongestionSpec>(&doc.family)) {
        out.game = build_congestion_game(*r);
    } else {
        out.game = build_routing_game(std::get<RoutingSpec>(doc.family)).game;
    }
    return out;
}

inline Json document_to_json(const GameDocument& doc) {
    Json j;
    if (const auto* g = std::get_if<GroupingSpec>(&doc.family)) {
        j["family"] = "grouping";
        j["k"] = g->clique_count;
        Json rows = Json::array();
        for (const auto& row : g->weight) {
            Json r = Json::array();
            for (const Rational& w : row) r.push_back(w.str());
            rows.push_back(r);
        }
        j["weights"] = rows;
        j["orientation"] = "utility";
    } else if (const auto* c = std::get_if<ContributionSpec>(&doc.family)) {
        j["family"] = "contribution";
        Json edges = Json::array();
        for (const ContributionEdge& e : c->edges) {
            Json terms = Json::array();
            for (const RewardTerm& t : e.reward.terms())
                terms.push_back(Json::array({t.coeff.str(), t.x_degree, t.y_degree}));
            edges.push_back(Json{{"u", e.u}, {"v", e.v}, {"terms", terms}});
        }
        j["edges"] = edges;
        Json budgets = Json::array();
        for (const Rational& b : c->budgets) budgets.push_back(b.str());
        j["budgets"] = budgets;
        j["grid"] = c->grid_denominator;
        j["orientation"] = "utility";
    } else if (const auto* r = std::get_if<CongestionSpec>(&doc.family)) {
        j["family"] = "congestion";
        Json alpha = Json::array();
        for (const Rational& a : r->alpha) alpha.push_back(a.str());
        j["alpha"] = alpha;
        j["strategies"] = r->strategies;
        j["orientation"] = "cost";
    } else {
        const auto& rt = std::get<RoutingSpec>(doc.family);
        j["family"] = "routing";
        Json arcs = Json::array();
        for (const RoutingArc& a : rt.arcs)
            arcs.push_back(Json{{"from", a.from}, {"to", a.to}, {"alpha", a.alpha.str()}});
        j["arcs"] = arcs;
        Json terminals = Json::array();
        for (auto [s, t] : rt.terminals) terminals.push_back(Json::array({s, t}));
        j["terminals"] = terminals;
        j["orientation"] = "cost";
    }
    BuiltGame built = build_document(doc);
    j["players"] = built.game.player_count();
    j["strategy_counts"] = built.game.strategy_counts;
    return j;
}

inline GameDocument document_from_json(const Json& j) {
    if (!j.is_object()) throw json_error("game: expected a JSON object");
    const Json& fam = jio::require(j, "family", "game");
    if (!fam.is_string()) throw json_error("game.family: expected a string tag");
    std::string tag = fam.get<std::string>();
    GameDocument doc;
    try {
        if (tag == "grouping") {
            GroupingSpec spec;
            spec.clique_count = jio::require_int(j, "k", "game");
            const Json& rows = jio::require(j, "weights", "game");
            if (!rows.is_array()) throw json_error("game.weights: expected an array of arrays");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                std::vector<Rational> row;
                for (std::size_t c = 0; c < rows[i].size(); ++c)
                    row.push_back(jio::rational_from_json(rows[i][c], "game.weights[" + std::to_string(i) + "][" +
                                                                          std::to_string(c) + "]"));
                spec.weight.push_back(std::move(row));
            }
            spec.validate();
            doc.family = std::move(spec);
        } else if (tag == "contribution") {
            ContributionSpec spec;
            const Json& edges = jio::require(j, "edges", "game");
            for (std::size_t e = 0; e < edges.size(); ++e) {
                std::string where = "game.edges[" + std::to_string(e) + "]";
                std::vector<RewardTerm> terms;
                const Json& jt = jio::require(edges[e], "terms", where);
                for (std::size_t t = 0; t < jt.size(); ++t) {
                    const Json& term = jt[t];
                    if (!term.is_array() || term.size() != 3)
                        throw json_error(where + ".terms[" + std::to_string(t) + "]: expected [coeff, xdeg, ydeg]");
                    terms.push_back({jio::rational_from_json(term[0], where + ".terms"), term[1].get<int>(),
                                     term[2].get<int>()});
                }
                spec.edges.push_back({jio::require_int(edges[e], "u", where), jio::require_int(edges[e], "v", where),
                                      RewardPolynomial(std::move(terms))});
            }
            const Json& budgets = jio::require(j, "budgets", "game");
            for (std::size_t b = 0; b < budgets.size(); ++b)
                spec.budgets.push_back(jio::rational_from_json(budgets[b], "game.budgets[" + std::to_string(b) + "]"));
            spec.vertex_count = static_cast<int>(spec.budgets.size());
            spec.grid_denominator = jio::require_int(j, "grid", "game");
            spec.validate();
            doc.family = std::move(spec);
        } else if (tag == "congestion") {
            CongestionSpec spec;
            const Json& alpha = jio::require(j, "alpha", "game");
            for (std::size_t a = 0; a < alpha.size(); ++a)
                spec.alpha.push_back(jio::rational_from_json(alpha[a], "game.alpha[" + std::to_string(a) + "]"));
            spec.resource_count = static_cast<int>(spec.alpha.size());
            const Json& strategies = jio::require(j, "strategies", "game");
            if (!strategies.is_array()) throw json_error("game.strategies: expected an array");
            spec.strategies = strategies.get<std::vector<std::vector<std::vector<int>>>>();
            spec.validate();
            doc.family = std::move(spec);
        } else if (tag == "routing") {
            RoutingSpec spec;
            const Json& arcs = jio::require(j, "arcs", "game");
            int max_vertex = -1;
            for (std::size_t a = 0; a < arcs.size(); ++a) {
                std::string where = "game.arcs[" + std::to_string(a) + "]";
                RoutingArc arc{jio::require_int(arcs[a], "from", where), jio::require_int(arcs[a], "to", where),
                               jio::rational_from_json(jio::require(arcs[a], "alpha", where), where + ".alpha")};
                max_vertex = std::max({max_vertex, arc.from, arc.to});
                spec.arcs.push_back(arc);
            }
            const Json& terminals = jio::require(j, "terminals", "game");
            for (std::size_t t = 0; t < terminals.size(); ++t) {
                if (!terminals[t].is_array() || terminals[t].size() != 2)
                    throw json_error("game.terminals[" + std::to_string(t) + "]: expected [source, sink]");
                int s = terminals[t][0].get<int>(), k = terminals[t][1].get<int>();
                max_vertex = std::max({max_vertex, s, k});
                spec.terminals.emplace_back(s, k);
            }
            spec.vertex_count = max_vertex + 1;
            spec.validate();
            doc.family = std::move(spec);
        } else {
            throw json_error("game.family: unknown family '" + tag + "'");
        }
    } catch (const json_error&) {
        throw;
    } catch (const std::exception& e) {
        throw json_error(std::string("game: ") + e.what());
    }

    // cross-check the recorded shape against the rebuilt game
    BuiltGame built = build_document(doc);
    if (auto it = j.find("players"); it != j.end() && it->get<int>() != built.game.player_count())
        throw json_error("game.players: recorded value " + it->dump() + " does not match the family payload");
    if (auto it = j.find("strategy_counts"); it != j.end()) {
        if (it->get<std::vector<int>>() != built.game.strategy_counts)
            throw json_error("game.strategy_counts: recorded values do not match the family payload");
    }
    if (auto it = j.find("orientation"); it != j.end()) {
        std::string o = it->get<std::string>();
        bool cost = built.game.orientation == Orientation::CostMin;
        if (o != (cost ? "cost" : "utility")) throw json_error("game.orientation: does not match the family payload");
    }
    return doc;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw json_error(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw json_error(path + ": " + e.what());
    }
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw error(path + ": cannot open file for writing");
    out << j.dump(2) << '\n';
}

} // namespace tribegames
