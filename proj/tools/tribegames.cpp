#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <tribegames/json_io.hpp>
#include <tribegames/report.hpp>

using namespace tribegames;

namespace {

Budgets budgets_from_env() {
    Budgets b;
    if (const char* env = std::getenv("TRIBEGAMES_PROFILE_BUDGET")) {
        try {
            b.profile_budget = std::stoull(env);
        } catch (const std::exception&) {
            throw config_error("TRIBEGAMES_PROFILE_BUDGET: not a number");
        }
    }
    return b;
}

struct LoadedGame {
    GameDocument doc;
    BuiltGame built;
};

LoadedGame load_game(const std::string& path) {
    LoadedGame g{document_from_json(load_json_file(path)), {}};
    g.built = build_document(g.doc);
    return g;
}

TribePartition parse_partition_spec(const std::string& spec, int players) {
    if (spec == "singleton") return singleton_partition(players);
    if (spec == "constant") return constant_partition(players);
    TribePartition tau = partition_from_json(load_json_file(spec));
    if (tau.player_count() != players)
        throw structural_error("partition file has " + std::to_string(tau.player_count()) + " players, game has " +
                               std::to_string(players));
    return tau;
}

std::vector<TribePartition> parse_partitions_spec(const std::string& spec, int players, const Budgets& budgets) {
    if (spec == "all") return sweep_partitions(players, std::nullopt, budgets);
    if (spec.rfind("k=", 0) == 0) return sweep_partitions(players, std::stoi(spec.substr(2)), budgets);
    return {parse_partition_spec(spec, players)};
}

DeviationConcept parse_concept(const std::string& name, const BuiltGame& game, const std::string& strictness) {
    PairBlocking mode = strictness == "one" ? PairBlocking::OneStrictOneWeak : PairBlocking::BothStrict;
    if (name == "unilateral") return DeviationConcept::unilateral();
    if (name == "pairwise") {
        if (!game.adjacency)
            throw config_error("pairwise concept needs a pair adjacency relation; only contribution games carry one");
        return DeviationConcept::pairwise(*game.adjacency, mode);
    }
    if (name == "coordinated") return DeviationConcept::coordinated();
    if (name == "oligopolistic") return DeviationConcept::oligopolistic();
    throw config_error("unknown concept '" + name + "'");
}

void write_optional_output(const std::optional<std::string>& path, const Json& j) {
    if (path) save_json_file(*path, j);
}

int cmd_gen(const std::string& family, int k, const std::string& epsilon, int grid, const std::string& variant,
            const std::string& out) {
    GameDocument doc;
    std::optional<TribePartition> partition;
    std::optional<StrategyProfile> profile;
    GroupingVariant gv = variant == "selfish" ? GroupingVariant::Selfish : GroupingVariant::Tribal;

    if (family == "fig1-selfish" || family == "fig1-tribal" || family == "figc-cycle") {
        GroupingInstance inst = family == "figc-cycle"
                                    ? gen_crossed_cycle()
                                    : gen_four_cycle(family == "fig1-tribal" ? GroupingVariant::Tribal
                                                                             : GroupingVariant::Selfish);
        doc.family = inst.spec;
        partition = inst.partition;
        profile = inst.profile;
    } else if (family == "grouping-k") {
        GroupingInstance inst = gen_pair_cliques(k, gv);
        doc.family = inst.spec;
        partition = inst.partition;
        profile = inst.profile;
    } else if (family == "additive-chain" || family == "convex-path" || family == "altruistic-square") {
        ContributionInstance inst;
        if (family == "additive-chain") {
            inst = gen_additive_chain(grid > 0 ? grid : 1);
        } else if (family == "convex-path") {
            inst = gen_convex_path(Rational::parse(epsilon.empty() ? "1/100" : epsilon), grid > 0 ? grid : 4);
        } else {
            inst = gen_altruistic_square(Rational::parse(epsilon.empty() ? "1/10" : epsilon), grid > 0 ? grid : 1);
        }
        ContributionGame cg = build_contribution_game(inst.spec);
        doc.family = inst.spec;
        partition = inst.partition;
        profile = full_budget_profile(cg, inst.witness_edges);
    } else if (family == "gk-tree") {
        TreeInstance inst = gen_layered_tree(k);
        doc.family = inst.spec;
        partition = inst.partition;
        profile = inst.upper_profile;
    } else {
        throw config_error("unknown family '" + family + "'");
    }

    save_json_file(out, document_to_json(doc));
    std::cout << "wrote " << out << "\n";
    if (partition) {
        save_json_file(out + ".partition.json", partition_to_json(*partition));
        std::cout << "wrote " << out << ".partition.json\n";
    }
    if (profile) {
        save_json_file(out + ".profile.json", profile_to_json(*profile));
        std::cout << "wrote " << out << ".profile.json\n";
    }
    return 0;
}

int cmd_solve(const std::string& game_path, const std::string& partition_spec, const std::string& concept_name_arg,
              const std::optional<std::string>& profile_path, const std::optional<std::string>& out, int workers,
              const std::string& strictness) {
    Budgets budgets = budgets_from_env();
    LoadedGame g = load_game(game_path);
    TribePartition tau = parse_partition_spec(partition_spec, g.built.game.player_count());
    DeviationConcept dc = parse_concept(concept_name_arg, g.built, strictness);

    if (profile_path) {
        StrategyProfile s = profile_from_json(load_json_file(*profile_path));
        CheckResult r = is_equilibrium(g.built.game, tau, s, dc, budgets);
        EquilibriumReport rep;
        rep.profile = s;
        rep.welfare = social_welfare(g.built.game, s);
        rep.survives[dc.kind] = r.stable;
        rep.blocking_witness = r.witness;
        Json j{{"concept", concept_name(dc.kind)},
               {"partition", partition_to_json(tau)},
               {"report", to_json(rep)}};
        write_optional_output(out, j);
        std::cout << "profile welfare " << rep.welfare.str() << ": "
                  << (r.stable ? "equilibrium" : "not an equilibrium") << "\n";
        if (r.witness) {
            std::cout << "blocking witness:";
            for (auto [p, t] : r.witness->moves) std::cout << " player " << p << " -> strategy " << t << ";";
            std::cout << " re-check " << (recheck_witness(g.built.game, tau, s, dc, *r.witness) ? "confirms" : "FAILS")
                      << "\n";
        }
        return r.stable ? 0 : 1;
    }

    auto reports = enumerate_equilibria(g.built.game, tau, dc, budgets, workers);
    Json eqs = Json::array();
    for (const EquilibriumReport& r : reports) eqs.push_back(to_json(r));
    Json j{{"concept", concept_name(dc.kind)},
           {"partition", partition_to_json(tau)},
           {"count", reports.size()},
           {"equilibria", eqs}};
    write_optional_output(out, j);
    std::cout << reports.size() << " equilibria\n";
    for (const EquilibriumReport& r : reports) {
        std::cout << "  [";
        for (int i = 0; i < r.profile.size(); ++i) std::cout << (i ? "," : "") << r.profile[i];
        std::cout << "] welfare " << r.welfare.str() << "\n";
    }
    return 0;
}

int cmd_pot(const std::string& game_path, const std::string& partitions_spec, const std::string& concept_name_arg,
            const std::optional<std::string>& out, int workers, const std::string& strictness) {
    Budgets budgets = budgets_from_env();
    LoadedGame g = load_game(game_path);
    auto partitions = parse_partitions_spec(partitions_spec, g.built.game.player_count(), budgets);
    DeviationConcept dc = parse_concept(concept_name_arg, g.built, strictness);
    PotReport report = compute_pot(g.built.game, partitions, dc, budgets, workers);
    Json j = to_json(report);
    j["concept"] = concept_name(dc.kind);
    j["partitions"] = partitions_spec;
    write_optional_output(out, j);
    std::cout << "optimum " << report.optimum_welfare.str() << ", worst equilibrium "
              << (report.worst_eq_welfare ? report.worst_eq_welfare->str() : std::string("-")) << ", ratio "
              << (report.ratio ? report.ratio->str() : std::string("inf")) << " over " << report.equilibrium_count
              << " equilibria\n";
    return 0;
}

int cmd_smoothness(const std::string& game_path, const std::string& partition_spec, const std::string& lambda,
                   const std::string& mu, std::uint64_t sample, std::uint64_t seed,
                   const std::optional<std::string>& out, int workers) {
    Budgets budgets = budgets_from_env();
    LoadedGame g = load_game(game_path);
    TribePartition tau = parse_partition_spec(partition_spec, g.built.game.player_count());
    SmoothnessParams params(Rational::parse(lambda), Rational::parse(mu));
    SmoothnessMode mode = sample > 0 ? SmoothnessMode::sampled(sample, seed) : SmoothnessMode::exhaustive();
    SmoothnessReport report = check_smoothness(g.built.game, tau, params, mode, budgets, workers);
    Json j = to_json(report);
    j["lambda"] = params.lambda.str();
    j["mu"] = params.mu.str();
    j["pot_bound"] = smoothness_pot_bound(params).str();
    write_optional_output(out, j);
    std::cout << (report.holds ? "holds" : "violated") << ", min slack " << report.min_slack.str() << " over "
              << report.pairs_checked << " pairs; implied inefficiency bound " << smoothness_pot_bound(params).str()
              << "\n";
    return report.holds ? 0 : 1;
}

int cmd_reproduce(bool fast, const std::string& out_dir, std::uint64_t seed, int workers) {
    ReproduceOptions opts;
    opts.fast = fast;
    opts.seed = seed;
    opts.workers = workers;
    opts.budgets = budgets_from_env();
    ReproduceReport report = run_reproduce(opts);
    save_json_file(out_dir + "/reproduce_report.json", report_to_json(report));
    std::string text = report_to_text(report);
    {
        std::ofstream txt(out_dir + "/reproduce_report.txt");
        txt << text;
    }
    std::cout << text;
    std::cout << "wrote " << out_dir << "/reproduce_report.json and .txt\n";
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct tribal extensions of finite games, enumerate pure equilibria, and measure exact inefficiency ratios"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a named game instance as JSON");
    std::string family, epsilon, variant = "tribal", out_file;
    int k = 3, grid = 0;
    gen->add_option("--family", family,
                    "fig1-selfish|fig1-tribal|grouping-k|additive-chain|convex-path|altruistic-square|gk-tree|figc-cycle")
        ->required();
    gen->add_option("--k", k, "size parameter for grouping-k and gk-tree");
    gen->add_option("--epsilon", epsilon, "rational epsilon, e.g. 1/100");
    gen->add_option("--grid", grid, "grid denominator for contribution games");
    gen->add_option("--variant", variant, "grouping-k variant: selfish|tribal");
    gen->add_option("-o,--out", out_file, "output file")->required();

    auto* solve = app.add_subcommand("solve", "check a profile or enumerate all equilibria");
    std::string game_path, partition_spec, concept_arg, strictness = "both";
    std::optional<std::string> profile_path, out_path;
    int workers = 2;
    solve->add_option("--game", game_path, "game JSON file")->required();
    solve->add_option("--partition", partition_spec, "singleton|constant|FILE")->required();
    solve->add_option("--concept", concept_arg, "unilateral|pairwise|coordinated|oligopolistic")->required();
    solve->add_option("--profile", profile_path, "profile JSON file to certify");
    solve->add_option("-o,--out", out_path, "write the report JSON here");
    solve->add_option("--workers", workers, "enumeration workers");
    solve->add_option("--strictness", strictness, "pairwise blocking: both|one");

    auto* pot = app.add_subcommand("pot", "worst-equilibrium inefficiency ratio over a set of partitions");
    std::string partitions_spec;
    pot->add_option("--game", game_path, "game JSON file")->required();
    pot->add_option("--partitions", partitions_spec, "all|k=N|singleton|constant|FILE")->required();
    pot->add_option("--concept", concept_arg, "unilateral|pairwise|coordinated|oligopolistic")->required();
    pot->add_option("-o,--out", out_path, "write the report JSON here");
    pot->add_option("--workers", workers, "enumeration workers");
    pot->add_option("--strictness", strictness, "pairwise blocking: both|one");

    auto* smooth = app.add_subcommand("smoothness", "check the deviation-sum inequality for given parameters");
    std::string lambda, mu;
    std::uint64_t sample = 0, seed = 0;
    smooth->add_option("--game", game_path, "game JSON file")->required();
    smooth->add_option("--partition", partition_spec, "singleton|constant|FILE")->required();
    smooth->add_option("--lambda", lambda, "rational lambda")->required();
    smooth->add_option("--mu", mu, "rational mu, 0 <= mu < 1")->required();
    smooth->add_option("--sample", sample, "sample this many profile pairs instead of the full scan");
    smooth->add_option("--seed", seed, "sampling seed");
    smooth->add_option("-o,--out", out_path, "write the report JSON here");
    smooth->add_option("--workers", workers, "scan workers");

    auto* repro = app.add_subcommand("reproduce", "run the desk-scale suite and emit the comparison table");
    bool fast = false;
    std::string out_dir = ".";
    std::uint64_t rseed = 42;
    repro->add_flag("--fast", fast, "smaller sweeps and grids");
    repro->add_option("--out-dir", out_dir, "directory for the report files");
    repro->add_option("--seed", rseed, "sweep seed");
    repro->add_option("--workers", workers, "parallel workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(family, k, epsilon, grid, variant, out_file);
        if (solve->parsed()) return cmd_solve(game_path, partition_spec, concept_arg, profile_path, out_path, workers, strictness);
        if (pot->parsed()) return cmd_pot(game_path, partitions_spec, concept_arg, out_path, workers, strictness);
        if (smooth->parsed())
            return cmd_smoothness(game_path, partition_spec, lambda, mu, sample, seed, out_path, workers);
        if (repro->parsed()) return cmd_reproduce(fast, out_dir, rseed, workers);
    } catch (const json_error& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
