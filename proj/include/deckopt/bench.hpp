#pragma once
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deckopt/brute.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/ga.hpp"
#include "deckopt/instances.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/mc.hpp"
#include "deckopt/predictor.hpp"
#include "deckopt/qlearn.hpp"
#include "deckopt/stats.hpp"
#include "deckopt/timing.hpp"

// The experiment harness: builds a chain of competitive opponent decks, runs
// every roster algorithm on every instance several times, re-evaluates each
// output deck's true win rate with fresh seeds, and reports per-instance
// medians, per-algorithm means and pairwise significance tests.

namespace deckopt {

struct AlgorithmSpec {
    std::string name;
    std::string kind; // "qdeckrec", "ga" or "mc"
    std::string checkpoint_path; // qdeckrec
    std::string predictor_path;  // mc
    GaConfig ga;
    McConfig mc;
};

struct ExperimentConfig {
    std::uint64_t pool_seed = 7;
    int n = 40;
    int d = 8;
    int num_instances = 20;
    int warmup_rounds = 10;
    int runs = 10;
    int num_matches = 300; // per win-rate evaluation
    int workers = 1;
    std::uint64_t seed = 0;
    std::vector<AlgorithmSpec> roster;
};

struct ResultRow {
    std::string algo;
    int instance_id = 0;
    int run = 0;
    DeckVector deck;
    double win_rate = 0.0; // true f, re-evaluated after the search
    std::uint64_t f_calls = 0;
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

struct InstanceAggregate {
    std::string algo;
    int instance_id = 0;
    double median_win_rate = 0.0;
    double median_f_calls = 0.0;
    double median_wall_seconds = 0.0;
    double median_cpu_seconds = 0.0;
};

struct AlgorithmAggregate {
    std::string algo;
    double mean_win_rate = 0.0;
    double mean_f_calls = 0.0;
    double mean_wall_seconds = 0.0;
    double mean_cpu_seconds = 0.0;
};

struct PairStat {
    std::string algo_a;
    std::string algo_b;
    WelchResult welch;
};

struct ExperimentResult {
    ExperimentConfig config;
    InstanceSet instances;
    std::vector<ResultRow> rows;
    std::vector<InstanceAggregate> per_instance;
    std::vector<AlgorithmAggregate> per_algorithm;
    std::vector<PairStat> stats;
    bool partial = false;
    std::vector<std::string> errors;
};

// ---------------------------------------------------------------------------
// Config JSON

inline json algorithm_spec_to_json(const AlgorithmSpec& a) {
    json j{{"name", a.name}, {"kind", a.kind}};
    if (a.kind == "qdeckrec") j["checkpoint"] = a.checkpoint_path;
    if (a.kind == "ga")
        j["ga"] = json{{"population_size", a.ga.population_size},
                       {"p_mutation", a.ga.p_mutation},
                       {"p_crossover", a.ga.p_crossover},
                       {"tournament_size", a.ga.tournament_size},
                       {"budget_f_calls", a.ga.budget_f_calls},
                       {"budget_wall_seconds", a.ga.budget_wall_seconds}};
    if (a.kind == "mc") {
        j["predictor"] = a.predictor_path;
        j["mc"] = json{{"x_samples", a.mc.x_samples}};
    }
    return j;
}

inline AlgorithmSpec algorithm_spec_from_json(const json& j) {
    AlgorithmSpec a;
    a.name = j.at("name").get<std::string>();
    a.kind = j.at("kind").get<std::string>();
    if (a.kind == "qdeckrec") {
        a.checkpoint_path = j.at("checkpoint").get<std::string>();
    } else if (a.kind == "ga") {
        if (j.contains("ga")) {
            const json& g = j.at("ga");
            if (g.contains("population_size"))
                a.ga.population_size = g.at("population_size").get<int>();
            if (g.contains("p_mutation")) a.ga.p_mutation = g.at("p_mutation").get<double>();
            if (g.contains("p_crossover"))
                a.ga.p_crossover = g.at("p_crossover").get<double>();
            if (g.contains("tournament_size"))
                a.ga.tournament_size = g.at("tournament_size").get<int>();
            if (g.contains("budget_f_calls"))
                a.ga.budget_f_calls = g.at("budget_f_calls").get<std::int64_t>();
            if (g.contains("budget_wall_seconds"))
                a.ga.budget_wall_seconds = g.at("budget_wall_seconds").get<double>();
        }
    } else if (a.kind == "mc") {
        a.predictor_path = j.at("predictor").get<std::string>();
        a.mc.x_samples = j.at("mc").at("x_samples").get<std::int64_t>();
    } else {
        throw ConfigurationError("unknown algorithm kind: " + a.kind);
    }
    return a;
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
    json roster = json::array();
    for (const AlgorithmSpec& a : cfg.roster) roster.push_back(algorithm_spec_to_json(a));
    return json{{"pool_seed", cfg.pool_seed}, {"n", cfg.n}, {"d", cfg.d},
                {"num_instances", cfg.num_instances},
                {"warmup_rounds", cfg.warmup_rounds},
                {"runs", cfg.runs},
                {"num_matches", cfg.num_matches},
                {"workers", cfg.workers},
                {"seed", cfg.seed},
                {"roster", roster}};
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("pool_seed")) cfg.pool_seed = j.at("pool_seed").get<std::uint64_t>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("d")) cfg.d = j.at("d").get<int>();
    if (j.contains("num_instances")) cfg.num_instances = j.at("num_instances").get<int>();
    if (j.contains("warmup_rounds")) cfg.warmup_rounds = j.at("warmup_rounds").get<int>();
    if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
    if (j.contains("num_matches")) cfg.num_matches = j.at("num_matches").get<int>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    for (const json& ja : j.at("roster"))
        cfg.roster.push_back(algorithm_spec_from_json(ja));
    if (cfg.runs < 1) throw ConfigurationError("runs must be >= 1");
    if (cfg.roster.empty()) throw ConfigurationError("roster must not be empty");
    return cfg;
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

struct LoadedAlgorithm {
    AlgorithmSpec spec;
    std::optional<MlpParams> theta;
    std::optional<WinRatePredictor> predictor;
};

struct RunOutput {
    DeckVector deck;
    std::uint64_t f_calls = 0;
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

inline LoadedAlgorithm load_algorithm(const AlgorithmSpec& spec,
                                      const ExperimentConfig& cfg) {
    LoadedAlgorithm loaded{spec, {}, {}};
    if (spec.kind == "qdeckrec") {
        json j;
        try {
            j = load_json_file(spec.checkpoint_path);
        } catch (const IoError& e) {
            throw ConfigurationError(std::string("checkpoint unavailable: ") + e.what());
        }
        Checkpoint cp = checkpoint_from_json(j);
        if (cp.config.n != cfg.n || cp.config.d != cfg.d)
            throw ConfigurationError("checkpoint trained for a different pool shape");
        loaded.theta = std::move(cp.theta);
    } else if (spec.kind == "mc") {
        json j;
        try {
            j = load_json_file(spec.predictor_path);
        } catch (const IoError& e) {
            throw ConfigurationError(std::string("predictor unavailable: ") + e.what());
        }
        WinRatePredictor p = predictor_from_json(j);
        if (p.n != cfg.n)
            throw ConfigurationError("predictor trained for a different pool size");
        loaded.predictor = std::move(p);
    } else if (spec.kind != "ga") {
        throw ConfigurationError("unknown algorithm kind: " + spec.kind);
    }
    return loaded;
}

inline RunOutput run_algorithm(const LoadedAlgorithm& algo, const Evaluator& evaluate,
                               const DeckVector& x_o, std::uint64_t run_seed) {
    RunOutput out;
    if (algo.spec.kind == "qdeckrec") {
        SolveResult sr = solve_from_random(*algo.theta, x_o, run_seed);
        out = RunOutput{sr.deck, sr.log.f_calls, sr.log.wall_seconds,
                        sr.log.cpu_seconds};
    } else if (algo.spec.kind == "ga") {
        GaConfig ga = algo.spec.ga;
        ga.seed = run_seed;
        GaResult gr = ga_search(evaluate, x_o, ga);
        out = RunOutput{gr.deck, gr.log.f_calls, gr.log.wall_seconds,
                        gr.log.cpu_seconds};
    } else {
        McConfig mc = algo.spec.mc;
        mc.seed = run_seed;
        McResult mr = mc_solve(*algo.predictor, x_o, mc);
        out = RunOutput{mr.deck, mr.log.f_calls, mr.log.wall_seconds,
                        mr.log.cpu_seconds};
    }
    return out;
}

} // namespace detail

/// Runs the full protocol. Instance chains and measured runs share work:
/// each post-warmup round records the whole battery of runs and promotes
/// run 0's deck as that algorithm's chain candidate; warmup rounds run each
/// algorithm once, unrecorded. Algorithms that fail to load or run are
/// dropped with the result marked partial.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const CardPool& pool) {
    if (pool.n_cards != cfg.n || pool.seed != cfg.pool_seed)
        throw ConfigurationError("run_experiment: pool does not match config");
    ExperimentResult result;
    result.config = cfg;

    std::vector<detail::LoadedAlgorithm> roster;
    for (const AlgorithmSpec& spec : cfg.roster) {
        try {
            roster.push_back(detail::load_algorithm(spec, cfg));
        } catch (const std::exception& e) {
            result.partial = true;
            result.errors.push_back(spec.name + ": " + e.what());
        }
    }
    if (roster.empty())
        throw ConfigurationError("run_experiment: no loadable algorithms in roster");

    Evaluator search_eval(pool, ProxyConfig{}, ProxyConfig{}, cfg.num_matches,
                          cfg.workers);
    Evaluator true_eval(pool, ProxyConfig{}, ProxyConfig{}, cfg.num_matches,
                        cfg.workers);

    int chain_round = 0; // provider is called once per round, in order
    CandidateProvider provider = [&](const ProblemInstance& inst, bool warmup)
        -> std::vector<CandidateDeck> {
        std::uint64_t round_key = static_cast<std::uint64_t>(chain_round++);
        std::vector<CandidateDeck> candidates;
        for (const detail::LoadedAlgorithm& algo : roster) {
            try {
                if (warmup) {
                    std::uint64_t seed =
                        derive_seed(cfg.seed, "warmup_" + algo.spec.name, round_key);
                    detail::RunOutput out =
                        detail::run_algorithm(algo, search_eval, inst.x_o, seed);
                    double f = true_eval(out.deck, inst.x_o,
                                         derive_seed(cfg.seed,
                                                     "warmup_true_" + algo.spec.name,
                                                     round_key))
                                   .value;
                    candidates.push_back(CandidateDeck{algo.spec.name, out.deck, f});
                    continue;
                }
                CandidateDeck candidate;
                for (int run = 0; run < cfg.runs; ++run) {
                    std::uint64_t key =
                        static_cast<std::uint64_t>(inst.id) * 10000 + run;
                    std::uint64_t seed =
                        derive_seed(cfg.seed, "run_" + algo.spec.name, key);
                    detail::RunOutput out =
                        detail::run_algorithm(algo, search_eval, inst.x_o, seed);
                    double f = true_eval(out.deck, inst.x_o,
                                         derive_seed(cfg.seed, "true_" + algo.spec.name, key))
                                   .value;
                    result.rows.push_back(ResultRow{algo.spec.name, inst.id, run,
                                                    out.deck, f, out.f_calls,
                                                    out.wall_seconds,
                                                    out.cpu_seconds});
                    if (run == 0)
                        candidate = CandidateDeck{algo.spec.name, out.deck, f};
                }
                candidates.push_back(std::move(candidate));
            } catch (const std::exception& e) {
                result.partial = true;
                result.errors.push_back(algo.spec.name + ": " + e.what());
            }
        }
        return candidates;
    };

    result.instances = generate_instance_chain(pool, cfg.d, cfg.num_instances,
                                               cfg.warmup_rounds, cfg.seed, provider);

    // Aggregates: median over runs per instance, then mean over instances.
    for (const detail::LoadedAlgorithm& algo : roster) {
        std::vector<double> inst_medians;
        for (const ProblemInstance& inst : result.instances.instances) {
            std::vector<double> wr, fc, wall, cpu;
            for (const ResultRow& row : result.rows) {
                if (row.algo != algo.spec.name || row.instance_id != inst.id) continue;
                wr.push_back(row.win_rate);
                fc.push_back(static_cast<double>(row.f_calls));
                wall.push_back(row.wall_seconds);
                cpu.push_back(row.cpu_seconds);
            }
            if (wr.empty()) continue;
            InstanceAggregate agg;
            agg.algo = algo.spec.name;
            agg.instance_id = inst.id;
            agg.median_win_rate = median_of(wr);
            agg.median_f_calls = median_of(fc);
            agg.median_wall_seconds = median_of(wall);
            agg.median_cpu_seconds = median_of(cpu);
            result.per_instance.push_back(agg);
            inst_medians.push_back(agg.median_win_rate);
        }
        if (inst_medians.empty()) continue;
        AlgorithmAggregate agg;
        agg.algo = algo.spec.name;
        double swr = 0, sfc = 0, swall = 0, scpu = 0;
        int count = 0;
        for (const InstanceAggregate& ia : result.per_instance) {
            if (ia.algo != algo.spec.name) continue;
            swr += ia.median_win_rate;
            sfc += ia.median_f_calls;
            swall += ia.median_wall_seconds;
            scpu += ia.median_cpu_seconds;
            ++count;
        }
        agg.mean_win_rate = swr / count;
        agg.mean_f_calls = sfc / count;
        agg.mean_wall_seconds = swall / count;
        agg.mean_cpu_seconds = scpu / count;
        result.per_algorithm.push_back(agg);
    }

    // Pairwise significance over the per-instance median win-rate vectors.
    for (std::size_t i = 0; i < result.per_algorithm.size(); ++i) {
        for (std::size_t j = i + 1; j < result.per_algorithm.size(); ++j) {
            const std::string& a = result.per_algorithm[i].algo;
            const std::string& b = result.per_algorithm[j].algo;
            std::vector<double> va, vb;
            for (const InstanceAggregate& ia : result.per_instance) {
                if (ia.algo == a) va.push_back(ia.median_win_rate);
                if (ia.algo == b) vb.push_back(ia.median_win_rate);
            }
            if (va.size() != vb.size() || va.size() < 2) continue;
            result.stats.push_back(PairStat{a, b, welch_test(va, vb)});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Reports

inline json experiment_result_to_json(const ExperimentResult& result) {
    json rows = json::array();
    for (const ResultRow& row : result.rows)
        rows.push_back(json{{"algo", row.algo},
                            {"instance_id", row.instance_id},
                            {"run", row.run},
                            {"deck", row.deck.card_ids()},
                            {"win_rate", row.win_rate},
                            {"f_calls", row.f_calls},
                            {"wall_s", row.wall_seconds},
                            {"cpu_s", row.cpu_seconds}});
    json per_instance = json::array();
    for (const InstanceAggregate& ia : result.per_instance)
        per_instance.push_back(json{{"algo", ia.algo},
                                    {"instance_id", ia.instance_id},
                                    {"median_win_rate", ia.median_win_rate},
                                    {"median_f_calls", ia.median_f_calls},
                                    {"median_wall_s", ia.median_wall_seconds},
                                    {"median_cpu_s", ia.median_cpu_seconds}});
    json per_algorithm = json::array();
    for (const AlgorithmAggregate& aa : result.per_algorithm)
        per_algorithm.push_back(json{{"algo", aa.algo},
                                     {"mean_win_rate", aa.mean_win_rate},
                                     {"mean_f_calls", aa.mean_f_calls},
                                     {"mean_wall_s", aa.mean_wall_seconds},
                                     {"mean_cpu_s", aa.mean_cpu_seconds}});
    json stats = json::array();
    for (const PairStat& ps : result.stats)
        stats.push_back(json{{"algo_a", ps.algo_a},
                             {"algo_b", ps.algo_b},
                             {"t", ps.welch.t},
                             {"df", ps.welch.df},
                             {"p", ps.welch.p},
                             {"significant_at_0.01", ps.welch.significant},
                             {"degenerate", ps.welch.degenerate}});
    return json{{"config", experiment_config_to_json(result.config)},
                {"instances", instance_set_to_json(result.instances)},
                {"rows", rows},
                {"aggregates", json{{"per_instance", per_instance},
                                    {"per_algorithm", per_algorithm}}},
                {"stats", stats},
                {"partial", result.partial},
                {"errors", result.errors}};
}

/// Copy of a report with every timing field zeroed, for byte-level
/// reproducibility comparison.
inline json mask_report_timing(json report) {
    for (json& row : report.at("rows")) {
        row["wall_s"] = 0.0;
        row["cpu_s"] = 0.0;
    }
    for (json& ia : report.at("aggregates").at("per_instance")) {
        ia["median_wall_s"] = 0.0;
        ia["median_cpu_s"] = 0.0;
    }
    for (json& aa : report.at("aggregates").at("per_algorithm")) {
        aa["mean_wall_s"] = 0.0;
        aa["mean_cpu_s"] = 0.0;
    }
    return report;
}

/// Fixed-width text table mirroring the JSON per-algorithm aggregates.
inline std::string render_report_table(const ExperimentResult& result) {
    char line[256];
    std::string out;
    std::snprintf(line, sizeof line, "%-16s %12s %12s %12s %10s\n", "algorithm",
                  "wall_s", "cpu_s", "f_calls", "win_rate");
    out += line;
    out += std::string(66, '-') + "\n";
    for (const AlgorithmAggregate& aa : result.per_algorithm) {
        std::snprintf(line, sizeof line, "%-16s %12.4f %12.4f %12.1f %10.4f\n",
                      aa.algo.c_str(), aa.mean_wall_seconds, aa.mean_cpu_seconds,
                      aa.mean_f_calls, aa.mean_win_rate);
        out += line;
    }
    if (!result.stats.empty()) {
        out += "\npairwise Welch tests on per-instance median win rates (alpha 0.01):\n";
        for (const PairStat& ps : result.stats) {
            std::snprintf(line, sizeof line,
                          "  %s vs %s: t=%.4f df=%.2f p=%.4g%s%s\n", ps.algo_a.c_str(),
                          ps.algo_b.c_str(), ps.welch.t, ps.welch.df, ps.welch.p,
                          ps.welch.significant ? " significant" : "",
                          ps.welch.degenerate ? " degenerate" : "");
            out += line;
        }
    }
    out += "\ntiming and f_calls cover the search only; the true win-rate "
           "re-evaluation of each output deck is not billed to the algorithm.\n";
    if (result.partial) {
        out += "\npartial result; errors:\n";
        for (const std::string& e : result.errors) out += "  " + e + "\n";
    }
    return out;
}

/// Writes {path}.json and {path}.txt.
inline void emit_report(const ExperimentResult& result, const std::string& path) {
    save_json_file(experiment_result_to_json(result), path + ".json");
    std::ofstream out(path + ".txt");
    if (!out) throw IoError("cannot write " + path + ".txt");
    out << render_report_table(result);
}

} // namespace deckopt
