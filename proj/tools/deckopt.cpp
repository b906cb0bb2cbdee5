// Command-line front end: every pipeline (pool generation, training,
// recommendation, the baselines, the benchmark harness) behind one binary,
// driven by JSON configs plus flag overrides and reproducible from --seed.
//
// Exit codes: 0 ok, 2 invalid arguments or config, 3 training diverged,
// 4 instance too large, 5 partial bench failure.

#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <deckopt/deckopt.hpp>

namespace {

using namespace deckopt;

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void require_known_keys(const json& j, const std::vector<std::string>& keys,
                        const std::string& where) {
    if (!j.is_object()) throw ConfigurationError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const std::string& k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigurationError("unknown key \"" + it.key() + "\" in " + where);
    }
}

CardPool load_pool(const std::string& path) {
    return pool_from_json(load_json_file(path));
}

DeckVector load_deck(const std::string& path) {
    return deck_from_json(load_json_file(path));
}

/// Overlays a partial JSON training config onto defaults; n/d stay subject
/// to later validation against the pool.
void overlay_train_config(TrainConfig& cfg, const json& j) {
    require_known_keys(j,
                       {"n", "d", "hidden", "learning_rate", "batch_size", "reward_b",
                        "num_matches", "epsilon", "replay", "max_episodes",
                        "wall_limit_seconds", "seed", "workers"},
                       "train config");
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("d")) cfg.d = j.at("d").get<int>();
    if (j.contains("hidden")) cfg.hidden = j.at("hidden").get<int>();
    if (j.contains("learning_rate")) cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("reward_b")) cfg.reward_b = j.at("reward_b").get<double>();
    if (j.contains("num_matches")) cfg.num_matches = j.at("num_matches").get<int>();
    if (j.contains("epsilon")) {
        const json& je = j.at("epsilon");
        require_known_keys(je, {"start", "decrement_per_episode", "floor"},
                           "train config epsilon");
        if (je.contains("start")) cfg.epsilon.start = je.at("start").get<double>();
        if (je.contains("decrement_per_episode"))
            cfg.epsilon.decrement_per_episode =
                je.at("decrement_per_episode").get<double>();
        if (je.contains("floor")) cfg.epsilon.floor = je.at("floor").get<double>();
    }
    if (j.contains("replay")) {
        const json& jr = j.at("replay");
        require_known_keys(jr,
                           {"capacity", "alpha", "beta_start", "beta_step",
                            "priority_eps"},
                           "train config replay");
        if (jr.contains("capacity")) cfg.replay.capacity = jr.at("capacity").get<std::size_t>();
        if (jr.contains("alpha")) cfg.replay.alpha = jr.at("alpha").get<double>();
        if (jr.contains("beta_start")) cfg.replay.beta_start = jr.at("beta_start").get<double>();
        if (jr.contains("beta_step")) cfg.replay.beta_step = jr.at("beta_step").get<double>();
        if (jr.contains("priority_eps"))
            cfg.replay.priority_eps = jr.at("priority_eps").get<double>();
    }
    if (j.contains("max_episodes")) cfg.max_episodes = j.at("max_episodes").get<std::int64_t>();
    if (j.contains("wall_limit_seconds"))
        cfg.wall_limit_seconds = j.at("wall_limit_seconds").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
}

void check_bench_config_keys(const json& j) {
    require_known_keys(j,
                       {"pool_seed", "n", "d", "num_instances", "warmup_rounds",
                        "runs", "num_matches", "workers", "seed", "roster"},
                       "bench config");
    if (!j.contains("roster")) throw ConfigurationError("bench config needs a roster");
    for (const json& ja : j.at("roster")) {
        require_known_keys(ja, {"name", "kind", "checkpoint", "predictor", "ga", "mc"},
                           "roster entry");
        if (ja.contains("ga"))
            require_known_keys(ja.at("ga"),
                               {"population_size", "p_mutation", "p_crossover",
                                "tournament_size", "budget_f_calls",
                                "budget_wall_seconds"},
                               "roster ga settings");
        if (ja.contains("mc"))
            require_known_keys(ja.at("mc"), {"x_samples"}, "roster mc settings");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deck-optimization workbench"};
    app.require_subcommand(1);
    std::function<int()> action;

    // --- genpool ---
    auto* genpool = app.add_subcommand("genpool", "generate a card pool file");
    struct {
        std::uint64_t seed = 7;
        int n = 40;
        std::string out;
    } gp;
    genpool->add_option("--seed", gp.seed, "pool seed");
    genpool->add_option("--n", gp.n, "pool size");
    genpool->add_option("--out", gp.out, "output path")->required();
    genpool->callback([&] {
        action = [&]() {
            CardPool pool = generate_card_pool(gp.seed, gp.n);
            save_json_file(pool_to_json(pool), gp.out);
            std::printf("wrote %d-card pool (seed %llu) to %s\n", pool.n_cards,
                        static_cast<unsigned long long>(pool.seed), gp.out.c_str());
            return 0;
        };
    });

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train a deck-search policy");
    struct {
        std::string pool;
        std::string config;
        std::string out;
        std::int64_t episodes = -2; // -2: not given on the command line
        double seconds = -1.0;
        std::uint64_t seed = 0;
        bool seed_given = false;
        int workers = 0;
    } tr;
    train_cmd->add_option("--pool", tr.pool, "pool file")->required();
    train_cmd->add_option("--config", tr.config, "training config JSON");
    train_cmd->add_option("--out", tr.out, "checkpoint output path")->required();
    train_cmd->add_option("--episodes", tr.episodes, "episode budget override");
    train_cmd->add_option("--seconds", tr.seconds, "wall-clock budget override");
    train_cmd->add_option("--seed", tr.seed, "seed override")
        ->each([&](const std::string&) { tr.seed_given = true; });
    train_cmd->add_option("--workers", tr.workers, "match worker threads");
    train_cmd->callback([&] {
        action = [&]() {
            CardPool pool = load_pool(tr.pool);
            TrainConfig cfg;
            cfg.n = pool.n_cards;
            cfg.workers = default_workers();
            if (!tr.config.empty()) overlay_train_config(cfg, load_json_file(tr.config));
            if (cfg.n != pool.n_cards)
                throw ConfigurationError("config n does not match the pool file");
            if (tr.episodes != -2) cfg.max_episodes = tr.episodes;
            if (tr.seconds >= 0.0) cfg.wall_limit_seconds = tr.seconds;
            if (tr.seed_given) cfg.seed = tr.seed;
            if (tr.workers > 0) cfg.workers = tr.workers;

            TrainObserver observer = [&](std::int64_t episode, const MlpParams& theta,
                                         const TrainLog&) {
                if ((episode + 1) % 50 == 0)
                    save_json_file(checkpoint_to_json(theta, cfg, episode + 1), tr.out);
            };
            TrainResult result = train(pool, cfg, observer);
            save_json_file(checkpoint_to_json(result.theta, cfg, result.log.episodes),
                           tr.out);
            save_json_file(train_log_to_json(result.log), tr.out + ".log.json");
            std::printf("trained %lld episodes (%llu f calls, %.1fs wall) -> %s\n",
                        static_cast<long long>(result.log.episodes),
                        static_cast<unsigned long long>(result.log.f_calls),
                        result.log.wall_seconds, tr.out.c_str());
            if (result.log.diverged) {
                std::fprintf(stderr, "training diverged; last finite checkpoint kept\n");
                return 3;
            }
            return 0;
        };
    });

    // --- solve ---
    auto* solve_cmd = app.add_subcommand("solve", "recommend a deck with a checkpoint");
    struct {
        std::string checkpoint;
        std::string opponent;
        std::string init;
        std::string out;
        std::uint64_t seed = 0;
    } so;
    solve_cmd->add_option("--checkpoint", so.checkpoint, "trained checkpoint")->required();
    solve_cmd->add_option("--opponent", so.opponent, "opponent deck file")->required();
    solve_cmd->add_option("--init", so.init, "starting deck file (default: random)");
    solve_cmd->add_option("--seed", so.seed, "seed for the random starting deck");
    solve_cmd->add_option("--out", so.out, "result output path");
    solve_cmd->callback([&] {
        action = [&]() {
            Checkpoint cp = checkpoint_from_json(load_json_file(so.checkpoint));
            DeckVector x_o = load_deck(so.opponent);
            SolveResult result;
            if (so.init.empty()) {
                result = solve_from_random(cp.theta, x_o, so.seed);
            } else {
                result = solve(cp.theta, x_o, load_deck(so.init));
            }
            std::string ids;
            for (int id : result.deck.card_ids())
                ids += (ids.empty() ? "" : " ") + std::to_string(id);
            std::printf("deck: %s\n", ids.c_str());
            std::printf("q_evals: %llu  f_calls: %llu\n",
                        static_cast<unsigned long long>(result.log.q_evals),
                        static_cast<unsigned long long>(result.log.f_calls));
            if (!so.out.empty()) {
                json actions = json::array();
                for (const SearchAction& a : result.log.actions)
                    actions.push_back(a.is_keep()
                                          ? json{{"keep", true}}
                                          : json{{"out", a.out_card}, {"in", a.in_card}});
                save_json_file(
                    json{{"config",
                          json{{"checkpoint", so.checkpoint},
                               {"opponent", so.opponent},
                               {"init", so.init},
                               {"seed", so.seed}}},
                         {"deck", result.deck.card_ids()},
                         {"log", json{{"q_evals", result.log.q_evals},
                                      {"f_calls", result.log.f_calls},
                                      {"actions", actions},
                                      {"wall_s", result.log.wall_seconds},
                                      {"cpu_s", result.log.cpu_seconds}}}},
                    so.out);
            }
            return 0;
        };
    });

    // --- ga ---
    auto* ga_cmd = app.add_subcommand("ga", "genetic-algorithm deck search");
    struct {
        std::string pool;
        std::string opponent;
        std::string out;
        GaConfig cfg;
        int num_matches = 100;
        int workers = 0;
    } ga;
    ga_cmd->add_option("--pool", ga.pool, "pool file")->required();
    ga_cmd->add_option("--opponent", ga.opponent, "opponent deck file")->required();
    ga_cmd->add_option("--budget-f-calls", ga.cfg.budget_f_calls, "evaluation budget");
    ga_cmd->add_option("--budget-seconds", ga.cfg.budget_wall_seconds, "wall budget");
    ga_cmd->add_option("--population", ga.cfg.population_size, "population size");
    ga_cmd->add_option("--p-mutation", ga.cfg.p_mutation, "mutation probability");
    ga_cmd->add_option("--p-crossover", ga.cfg.p_crossover, "crossover probability");
    ga_cmd->add_option("--tournament", ga.cfg.tournament_size, "tournament size");
    ga_cmd->add_option("--num-matches", ga.num_matches, "matches per fitness call");
    ga_cmd->add_option("--seed", ga.cfg.seed, "run seed");
    ga_cmd->add_option("--workers", ga.workers, "match worker threads");
    ga_cmd->add_option("--out", ga.out, "result output path");
    ga_cmd->callback([&] {
        action = [&]() {
            CardPool pool = load_pool(ga.pool);
            DeckVector x_o = load_deck(ga.opponent);
            if (ga.cfg.budget_f_calls < 0 && ga.cfg.budget_wall_seconds <= 0.0)
                ga.cfg.budget_f_calls = 200;
            int workers = ga.workers > 0 ? ga.workers : default_workers();
            Evaluator evaluate(pool, ProxyConfig{}, ProxyConfig{}, ga.num_matches,
                               workers);
            GaResult result = ga_search(evaluate, x_o, ga.cfg);
            std::string ids;
            for (int id : result.deck.card_ids())
                ids += (ids.empty() ? "" : " ") + std::to_string(id);
            std::printf("deck: %s\nbest f: %.4f  f_calls: %llu  generations: %lld\n",
                        ids.c_str(), result.log.best_f,
                        static_cast<unsigned long long>(result.log.f_calls),
                        static_cast<long long>(result.log.generations));
            if (!ga.out.empty())
                save_json_file(
                    json{{"config",
                          json{{"pool", ga.pool},
                               {"opponent", ga.opponent},
                               {"population_size", ga.cfg.population_size},
                               {"p_mutation", ga.cfg.p_mutation},
                               {"p_crossover", ga.cfg.p_crossover},
                               {"tournament_size", ga.cfg.tournament_size},
                               {"budget_f_calls", ga.cfg.budget_f_calls},
                               {"budget_wall_seconds", ga.cfg.budget_wall_seconds},
                               {"num_matches", ga.num_matches},
                               {"seed", ga.cfg.seed}}},
                         {"deck", result.deck.card_ids()},
                         {"log", json{{"best_f", result.log.best_f},
                                      {"generations", result.log.generations},
                                      {"f_calls", result.log.f_calls},
                                      {"cache_hits", result.log.cache_hits},
                                      {"best_per_generation", result.log.best_per_generation},
                                      {"mean_per_generation", result.log.mean_per_generation},
                                      {"wall_s", result.log.wall_seconds},
                                      {"cpu_s", result.log.cpu_seconds}}}},
                    ga.out);
            return 0;
        };
    });

    // --- predictor ---
    auto* pred_cmd = app.add_subcommand("predictor", "train the win-rate predictor");
    struct {
        std::string pool;
        std::string out;
        std::string dataset_out;
        std::string dataset_in;
        int d = 8;
        int size = 2000;
        int matches_per_label = 100;
        PredictorHyperparams hp;
        std::uint64_t data_seed = 0;
        int workers = 0;
    } pr;
    pred_cmd->add_option("--pool", pr.pool, "pool file")->required();
    pred_cmd->add_option("--d", pr.d, "deck size");
    pred_cmd->add_option("--size", pr.size, "dataset size (deck pairs)");
    pred_cmd->add_option("--matches-per-label", pr.matches_per_label,
                         "matches per label");
    pred_cmd->add_option("--hidden", pr.hp.hidden, "hidden units");
    pred_cmd->add_option("--epochs", pr.hp.epochs, "training epochs");
    pred_cmd->add_option("--learning-rate", pr.hp.learning_rate, "Adam step size");
    pred_cmd->add_option("--batch-size", pr.hp.batch_size, "minibatch size");
    pred_cmd->add_option("--seed", pr.data_seed, "seed for data and fitting");
    pred_cmd->add_option("--workers", pr.workers, "match worker threads");
    pred_cmd->add_option("--dataset-out", pr.dataset_out, "save the labeled dataset");
    pred_cmd->add_option("--dataset-in", pr.dataset_in, "reuse a saved dataset");
    pred_cmd->add_option("--out", pr.out, "predictor output path")->required();
    pred_cmd->callback([&] {
        action = [&]() {
            CardPool pool = load_pool(pr.pool);
            PredictorDataset ds;
            if (!pr.dataset_in.empty()) {
                ds = load_dataset_jsonl(pr.dataset_in);
                if (ds.n != pool.n_cards)
                    throw ConfigurationError("dataset n does not match the pool file");
            } else {
                int workers = pr.workers > 0 ? pr.workers : default_workers();
                Evaluator evaluate(pool, ProxyConfig{}, ProxyConfig{},
                                   pr.matches_per_label, workers);
                ds = build_predictor_dataset(evaluate, pr.d, pr.size,
                                             derive_seed(pr.data_seed, "dataset"));
            }
            if (pr.hp.seed == 0) pr.hp.seed = derive_seed(pr.data_seed, "fit");
            PredictorResult result = train_predictor(ds, pr.hp);
            json j = predictor_to_json(result.predictor);
            j["config"] = json{{"pool", pr.pool},
                               {"d", ds.d},
                               {"size", static_cast<int>(ds.pairs.size())},
                               {"matches_per_label", ds.matches_per_label},
                               {"hidden", pr.hp.hidden},
                               {"epochs", pr.hp.epochs},
                               {"learning_rate", pr.hp.learning_rate},
                               {"batch_size", pr.hp.batch_size},
                               {"seed", pr.data_seed}};
            j["metrics"] = json{{"cv_mse", result.metrics.cv_mse},
                                {"cv_r2", result.metrics.cv_r2},
                                {"train_mse", result.metrics.train_mse}};
            save_json_file(j, pr.out);
            if (!pr.dataset_out.empty()) save_dataset_jsonl(ds, pr.dataset_out);
            std::printf("predictor: cv_mse=%.5f cv_r2=%.3f -> %s\n",
                        result.metrics.cv_mse, result.metrics.cv_r2, pr.out.c_str());
            return 0;
        };
    });

    // --- mc ---
    auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo search over the predictor");
    struct {
        std::string predictor;
        std::string opponent;
        std::string out;
        McConfig cfg;
    } mc;
    mc_cmd->add_option("--predictor", mc.predictor, "predictor file")->required();
    mc_cmd->add_option("--opponent", mc.opponent, "opponent deck file")->required();
    mc_cmd->add_option("--x", mc.cfg.x_samples, "number of sampled decks");
    mc_cmd->add_option("--seed", mc.cfg.seed, "run seed");
    mc_cmd->add_option("--out", mc.out, "result output path");
    mc_cmd->callback([&] {
        action = [&]() {
            WinRatePredictor predictor =
                predictor_from_json(load_json_file(mc.predictor));
            DeckVector x_o = load_deck(mc.opponent);
            McResult result = mc_solve(predictor, x_o, mc.cfg);
            std::string ids;
            for (int id : result.deck.card_ids())
                ids += (ids.empty() ? "" : " ") + std::to_string(id);
            std::printf("deck: %s\npredicted f: %.4f  f_calls: %llu\n", ids.c_str(),
                        result.log.predicted_win_rate,
                        static_cast<unsigned long long>(result.log.f_calls));
            if (!mc.out.empty())
                save_json_file(
                    json{{"config", json{{"predictor", mc.predictor},
                                         {"opponent", mc.opponent},
                                         {"x_samples", mc.cfg.x_samples},
                                         {"seed", mc.cfg.seed}}},
                         {"deck", result.deck.card_ids()},
                         {"log", json{{"predicted_win_rate", result.log.predicted_win_rate},
                                      {"x_samples", result.log.x_samples},
                                      {"f_calls", result.log.f_calls},
                                      {"wall_s", result.log.wall_seconds},
                                      {"cpu_s", result.log.cpu_seconds}}}},
                    mc.out);
            return 0;
        };
    });

    // --- brute ---
    auto* brute_cmd = app.add_subcommand("brute", "exhaustive ranking (tiny pools)");
    struct {
        std::string pool;
        std::string opponent;
        std::string out;
        int num_matches = 100;
        std::uint64_t seed = 0;
        int workers = 0;
    } br;
    brute_cmd->add_option("--pool", br.pool, "pool file")->required();
    brute_cmd->add_option("--opponent", br.opponent, "opponent deck file")->required();
    brute_cmd->add_option("--num-matches", br.num_matches, "matches per deck");
    brute_cmd->add_option("--seed", br.seed, "run seed");
    brute_cmd->add_option("--workers", br.workers, "match worker threads");
    brute_cmd->add_option("--out", br.out, "ranking output path");
    brute_cmd->callback([&] {
        action = [&]() {
            CardPool pool = load_pool(br.pool);
            DeckVector x_o = load_deck(br.opponent);
            int workers = br.workers > 0 ? br.workers : default_workers();
            Evaluator evaluate(pool, ProxyConfig{}, ProxyConfig{}, br.num_matches,
                               workers);
            std::vector<RankedDeck> ranking = brute_force_solve(evaluate, x_o, br.seed);
            std::string ids;
            for (int id : ranking.front().deck.card_ids())
                ids += (ids.empty() ? "" : " ") + std::to_string(id);
            std::printf("ranked %zu decks; best: %s (f=%.4f)\n", ranking.size(),
                        ids.c_str(), ranking.front().f);
            if (!br.out.empty()) {
                json entries = json::array();
                for (const RankedDeck& rd : ranking)
                    entries.push_back(json{{"deck", rd.deck.card_ids()}, {"f", rd.f}});
                save_json_file(json{{"config", json{{"pool", br.pool},
                                                    {"opponent", br.opponent},
                                                    {"num_matches", br.num_matches},
                                                    {"seed", br.seed}}},
                                    {"ranking", entries}},
                               br.out);
            }
            return 0;
        };
    });

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "run the benchmark protocol");
    struct {
        std::string config;
        std::string out = "bench_report";
        std::uint64_t seed = 0;
        bool seed_given = false;
        int workers = 0;
    } be;
    bench_cmd->add_option("--config", be.config, "experiment config JSON")->required();
    bench_cmd->add_option("--out", be.out, "report path prefix");
    bench_cmd->add_option("--seed", be.seed, "master seed override")
        ->each([&](const std::string&) { be.seed_given = true; });
    bench_cmd->add_option("--workers", be.workers, "match worker threads");
    bench_cmd->callback([&] {
        action = [&]() {
            json j = load_json_file(be.config);
            check_bench_config_keys(j);
            ExperimentConfig cfg = experiment_config_from_json(j);
            if (be.seed_given) cfg.seed = be.seed;
            if (be.workers > 0) cfg.workers = be.workers;
            CardPool pool = generate_card_pool(cfg.pool_seed, cfg.n);
            ExperimentResult result;
            try {
                result = run_experiment(cfg, pool);
            } catch (const ConfigurationError& e) {
                std::fprintf(stderr, "bench failed: %s\n", e.what());
                return 5;
            }
            emit_report(result, be.out);
            std::printf("%s", render_report_table(result).c_str());
            std::printf("report written to %s.json / %s.txt\n", be.out.c_str(),
                        be.out.c_str());
            return result.partial ? 5 : 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action();
    } catch (const TrainingDiverged& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InstanceTooLarge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
