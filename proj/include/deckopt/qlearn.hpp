#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/mdp.hpp"
#include "deckopt/mlp.hpp"
#include "deckopt/replay.hpp"
#include "deckopt/timing.hpp"

// Q-learning over the deck-search process. The action value Q(s, a) is the
// network applied to the successor state's features, so one set of weights
// scores every action, and a trained network recommends a deck with plain
// greedy rollout and zero match simulations.

namespace deckopt {

using FeatureVector = std::vector<double>;

/// Features of a state as seen by the network: player deck bits, opponent
/// deck bits, then the step counter scaled to [0, 1].
inline FeatureVector state_features(const SearchState& s) {
    int n = s.x_p.size();
    int d = search_horizon(s);
    FeatureVector phi(2 * n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        if (s.x_p.test(i)) phi[i] = 1.0;
        if (s.x_o.test(i)) phi[n + i] = 1.0;
    }
    phi[2 * n] = static_cast<double>(s.t) / d;
    return phi;
}

/// F(s, a): the successor's features, so Q(s, a) = network(F(s, a)).
inline FeatureVector featurize(const SearchState& s, const SearchAction& a) {
    return state_features(apply_search_action(s, a));
}

struct EpsilonSchedule {
    double start = 1.0;
    double decrement_per_episode = 0.0005;
    double floor = 0.2;

    double value(std::int64_t episode) const {
        return std::max(floor, start - decrement_per_episode * episode);
    }
};

struct ScoredAction {
    SearchAction action;
    double value = 0.0;
    int index = 0; // position in enumerate_actions order
};

/// Evaluates every legal action and returns the best, breaking ties toward
/// the earliest action in enumeration order (Keep first). Each network
/// evaluation adds one to *evals when given.
///
/// Successive actions differ from the Keep successor by two input bits, so
/// hidden pre-activations are delta-updated instead of recomputed; a full
/// sweep costs O(hidden) per action after one forward pass.
inline ScoredAction best_action(const MlpParams& theta, const SearchState& s,
                                std::uint64_t* evals = nullptr) {
    int d = search_horizon(s);
    if (s.t >= d) throw HorizonExhausted("best_action: t == D");
    int n = s.x_p.size();
    if (theta.input != 2 * n + 1)
        throw InvalidArgument("best_action: network shape does not match pool size");
    int hidden = theta.hidden;
    FeatureVector phi = state_features(s);
    phi[2 * n] = static_cast<double>(s.t + 1) / d;

    std::vector<double> z_keep(hidden);
    for (int j = 0; j < hidden; ++j) {
        const double* row = theta.w1.data() + static_cast<std::size_t>(j) * theta.input;
        double z = theta.b1[j];
        for (int i = 0; i < theta.input; ++i) z += row[i] * phi[i];
        z_keep[j] = z;
    }
    double keep_q = theta.b2;
    for (int j = 0; j < hidden; ++j)
        if (z_keep[j] > 0.0) keep_q += theta.w2[j] * z_keep[j];

    // Columns of w1 for the player-deck bits, contiguous per card.
    std::vector<double> cols(static_cast<std::size_t>(n) * hidden);
    for (int j = 0; j < hidden; ++j) {
        const double* row = theta.w1.data() + static_cast<std::size_t>(j) * theta.input;
        for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i) * hidden + j] = row[i];
    }

    std::uint64_t count = 1;
    ScoredAction best{SearchAction::keep(), keep_q, 0};
    std::vector<int> in_deck = s.x_p.card_ids();
    std::vector<double> z_out(hidden);
    int index = 0;
    for (int out : in_deck) {
        const double* col_out = cols.data() + static_cast<std::size_t>(out) * hidden;
        for (int j = 0; j < hidden; ++j) z_out[j] = z_keep[j] - col_out[j];
        for (int in = 0; in < n; ++in) {
            if (s.x_p.test(in)) continue;
            const double* col_in = cols.data() + static_cast<std::size_t>(in) * hidden;
            double q = theta.b2;
            for (int j = 0; j < hidden; ++j) {
                double z = z_out[j] + col_in[j];
                if (z > 0.0) q += theta.w2[j] * z;
            }
            ++count;
            ++index;
            if (q > best.value)
                best = ScoredAction{SearchAction::replace(out, in), q, index};
        }
    }
    if (evals) *evals += count;
    return best;
}

/// Epsilon-greedy behaviour policy. The exploring branch costs no network
/// evaluations.
inline SearchAction select_action(const MlpParams& theta, const SearchState& s,
                                  double epsilon, Rng& rng,
                                  std::uint64_t* evals = nullptr) {
    if (s.t >= search_horizon(s)) throw HorizonExhausted("select_action: t == D");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw InvalidArgument("select_action: epsilon outside [0, 1]");
    if (rng.chance(epsilon)) {
        std::vector<SearchAction> actions = enumerate_actions(s);
        return actions[rng.below(actions.size())];
    }
    return best_action(theta, s, evals).action;
}

/// TD error r + max_a' Q(s', a') - Q(s, a), with the bootstrap term zero at
/// the horizon.
inline double td_error(const MlpParams& theta, const Transition& tr,
                       std::uint64_t* evals = nullptr) {
    FeatureVector phi = state_features(tr.s_next);
    double q_sa = q_forward(theta, phi);
    if (evals) *evals += 1;
    double bootstrap = 0.0;
    if (tr.s_next.t < search_horizon(tr.s_next))
        bootstrap = best_action(theta, tr.s_next, evals).value;
    return tr.r + bootstrap - q_sa;
}

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
    int n = 0;
    int d = 0;
    int hidden = 128;
    double learning_rate = 2e-5;
    int batch_size = 64;
    double reward_b = 10.0;
    int num_matches = 300; // per win-rate evaluation during training
    EpsilonSchedule epsilon{};
    ReplayConfig replay{};
    std::int64_t max_episodes = -1;  // -1: no episode cap
    double wall_limit_seconds = 0.0; // <= 0: no wall-clock cap
    std::uint64_t seed = 0;
    int workers = 1;
};

struct TrainLog {
    std::int64_t episodes = 0;
    std::uint64_t f_calls = 0;
    std::uint64_t keep_cache_hits = 0;
    std::uint64_t q_evals = 0;
    std::vector<double> mean_abs_td;    // per update, the batch's mean |TD error|
    std::vector<double> episode_return; // per episode, sum of step rewards
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
    bool diverged = false;
};

struct TrainResult {
    MlpParams theta;
    TrainLog log;
};

/// Called after each episode; useful for periodic checkpointing.
using TrainObserver = std::function<void(std::int64_t episode, const MlpParams&,
                                         const TrainLog&)>;

/// Runs episodes against freshly drawn random opponent decks until the
/// episode or wall-clock budget runs out. One batch update per episode once
/// the replay buffer can fill a batch. On divergence the last finite
/// parameters are returned with the log flagged.
inline TrainResult train(const CardPool& pool, const TrainConfig& cfg,
                         const TrainObserver& observer = nullptr) {
    if (cfg.n != pool.n_cards)
        throw InvalidArgument("train: config n does not match pool");
    if (cfg.d < 1 || cfg.d >= cfg.n) throw InvalidArgument("train: need 0 < d < n");
    if (cfg.max_episodes < 0 && cfg.wall_limit_seconds <= 0.0)
        throw InvalidArgument("train: need an episode or wall-clock budget");
    if (cfg.learning_rate <= 0.0) throw InvalidArgument("train: bad learning rate");
    if (cfg.batch_size < 1) throw InvalidArgument("train: bad batch size");

    StopWatch watch;
    TrainResult result;
    result.theta = init_mlp(2 * cfg.n + 1, cfg.hidden, derive_seed(cfg.seed, "init"));
    PrioritizedReplay replay(cfg.replay);
    Evaluator evaluate(pool, ProxyConfig{}, ProxyConfig{}, cfg.num_matches,
                       cfg.workers);
    TrainLog& log = result.log;

    for (std::int64_t episode = 0;; ++episode) {
        if (cfg.max_episodes >= 0 && episode >= cfg.max_episodes) break;
        if (cfg.wall_limit_seconds > 0.0 &&
            watch.elapsed().wall_seconds >= cfg.wall_limit_seconds)
            break;

        std::uint64_t ep_seed = derive_seed(cfg.seed, "episode", episode);
        Rng policy_rng(derive_seed(ep_seed, "policy"));
        DeckVector x_o = random_deck(cfg.n, cfg.d, derive_seed(ep_seed, "x_o"));
        DeckVector x_p0 = random_deck(cfg.n, cfg.d, derive_seed(ep_seed, "x_p0"));
        SearchState s = initial_state(x_p0, x_o);
        double epsilon = cfg.epsilon.value(episode);
        double cached_f = -1.0; // win rate of the current deck, if known
        double ep_return = 0.0;

        for (int t = 0; t < cfg.d; ++t) {
            SearchAction a = select_action(result.theta, s, epsilon, policy_rng,
                                           &log.q_evals);
            SearchState s_next = apply_search_action(s, a);
            double f;
            if (a.is_keep() && cached_f >= 0.0) {
                f = cached_f;
                ++log.keep_cache_hits;
            } else {
                f = evaluate(s_next.x_p, x_o, derive_seed(ep_seed, "reward", t)).value;
            }
            cached_f = f;
            double r = std::exp(cfg.reward_b * f);
            ep_return += r;
            replay.insert(Transition{s, a, r, s_next});
            s = s_next;
        }
        log.episode_return.push_back(ep_return);

        if (replay.size() >= static_cast<std::size_t>(cfg.batch_size)) {
            auto batch = replay.sample(cfg.batch_size, derive_seed(ep_seed, "batch"));
            MlpGrad step = zero_grad(result.theta);
            std::vector<double> abs_errors(batch.size());
            double mean_abs = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const Transition& tr = replay.entry(batch[i].slot);
                double delta = td_error(result.theta, tr, &log.q_evals);
                finite = finite && std::isfinite(delta);
                abs_errors[i] = std::abs(delta);
                mean_abs += abs_errors[i];
                FeatureVector phi = state_features(tr.s_next);
                accumulate_q_gradient(result.theta, phi.data(), phi.size(),
                                      batch[i].weight * delta, step);
            }
            MlpParams next = result.theta;
            add_scaled(next, step, cfg.learning_rate / batch.size());
            if (!finite || !all_finite(next)) {
                log.diverged = true;
                log.episodes = episode + 1;
                break;
            }
            result.theta = std::move(next);
            for (std::size_t i = 0; i < batch.size(); ++i)
                replay.update_priority(batch[i].slot, abs_errors[i]);
            log.mean_abs_td.push_back(mean_abs / batch.size());
        }

        log.episodes = episode + 1;
        if (observer) observer(episode, result.theta, log);
    }

    log.f_calls = evaluate.calls();
    TimeSample t = watch.elapsed();
    log.wall_seconds = t.wall_seconds;
    log.cpu_seconds = t.cpu_seconds;
    return result;
}

// ---------------------------------------------------------------------------
// Recommendation

struct SolveLog {
    std::uint64_t q_evals = 0;
    std::uint64_t f_calls = 0; // always zero: the rollout never simulates
    std::vector<SearchAction> actions;
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

struct SolveResult {
    DeckVector deck;
    SolveLog log;
};

/// Greedy rollout of the trained network for exactly D steps.
inline SolveResult solve(const MlpParams& theta, const DeckVector& x_o,
                         const DeckVector& x_p0) {
    StopWatch watch;
    SolveResult result;
    SearchState s = initial_state(x_p0, x_o);
    int d = search_horizon(s);
    if (theta.input != 2 * s.x_p.size() + 1)
        throw InvalidArgument("solve: network shape does not match pool size");
    for (int t = 0; t < d; ++t) {
        ScoredAction pick = best_action(theta, s, &result.log.q_evals);
        result.log.actions.push_back(pick.action);
        s = apply_search_action(s, pick.action);
    }
    result.deck = s.x_p;
    TimeSample elapsed = watch.elapsed();
    result.log.wall_seconds = elapsed.wall_seconds;
    result.log.cpu_seconds = elapsed.cpu_seconds;
    return result;
}

/// Convenience: a random starting deck drawn from the solve seed.
inline SolveResult solve_from_random(const MlpParams& theta, const DeckVector& x_o,
                                     std::uint64_t seed) {
    int n = x_o.size();
    DeckVector x_p0 = random_deck(n, x_o.popcount(), derive_seed(seed, "x_p0"));
    return solve(theta, x_o, x_p0);
}

// ---------------------------------------------------------------------------
// Tabular reference learner (for fixed-point checks on tiny processes)

struct TabularQ {
    std::unordered_map<std::string, double> values;

    static std::string key(const SearchState& s, const SearchAction& a) {
        std::string k = s.x_p.key();
        k += '/';
        k += s.x_o.key();
        k += '/';
        k += std::to_string(s.t);
        k += '/';
        k += std::to_string(a.out_card);
        k += ',';
        k += std::to_string(a.in_card);
        return k;
    }

    double get(const SearchState& s, const SearchAction& a) const {
        auto it = values.find(key(s, a));
        return it == values.end() ? 0.0 : it->second;
    }

    double best_next(const SearchState& s_next) const {
        if (s_next.t >= search_horizon(s_next)) return 0.0;
        double best = 0.0;
        bool first = true;
        for (const SearchAction& a : enumerate_actions(s_next)) {
            double q = get(s_next, a);
            if (first || q > best) best = q;
            first = false;
        }
        return best;
    }
};

/// Exact one-state update: Q <- (1 - lr) Q + lr (r + max_a' Q(s', a')).
inline void tabular_q_update(TabularQ& table, const SearchState& s,
                             const SearchAction& a, double r,
                             const SearchState& s_next, double learning_rate) {
    double target = r + table.best_next(s_next);
    double& q = table.values[TabularQ::key(s, a)];
    q = (1.0 - learning_rate) * q + learning_rate * target;
}

// ---------------------------------------------------------------------------
// Checkpoints

inline json train_config_to_json(const TrainConfig& cfg) {
    return json{{"n", cfg.n},
                {"d", cfg.d},
                {"hidden", cfg.hidden},
                {"learning_rate", cfg.learning_rate},
                {"batch_size", cfg.batch_size},
                {"reward_b", cfg.reward_b},
                {"num_matches", cfg.num_matches},
                {"epsilon", json{{"start", cfg.epsilon.start},
                                 {"decrement_per_episode", cfg.epsilon.decrement_per_episode},
                                 {"floor", cfg.epsilon.floor}}},
                {"replay", json{{"capacity", cfg.replay.capacity},
                                {"alpha", cfg.replay.alpha},
                                {"beta_start", cfg.replay.beta_start},
                                {"beta_step", cfg.replay.beta_step},
                                {"priority_eps", cfg.replay.priority_eps}}},
                {"max_episodes", cfg.max_episodes},
                {"wall_limit_seconds", cfg.wall_limit_seconds},
                {"seed", cfg.seed},
                {"workers", cfg.workers}};
}

inline TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.n = j.at("n").get<int>();
    cfg.d = j.at("d").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.reward_b = j.at("reward_b").get<double>();
    cfg.num_matches = j.at("num_matches").get<int>();
    const json& je = j.at("epsilon");
    cfg.epsilon.start = je.at("start").get<double>();
    cfg.epsilon.decrement_per_episode = je.at("decrement_per_episode").get<double>();
    cfg.epsilon.floor = je.at("floor").get<double>();
    const json& jr = j.at("replay");
    cfg.replay.capacity = jr.at("capacity").get<std::size_t>();
    cfg.replay.alpha = jr.at("alpha").get<double>();
    cfg.replay.beta_start = jr.at("beta_start").get<double>();
    cfg.replay.beta_step = jr.at("beta_step").get<double>();
    cfg.replay.priority_eps = jr.at("priority_eps").get<double>();
    cfg.max_episodes = j.at("max_episodes").get<std::int64_t>();
    cfg.wall_limit_seconds = j.at("wall_limit_seconds").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.workers = j.at("workers").get<int>();
    return cfg;
}

inline json train_log_to_json(const TrainLog& log) {
    return json{{"episodes", log.episodes},
                {"f_calls", log.f_calls},
                {"keep_cache_hits", log.keep_cache_hits},
                {"q_evals", log.q_evals},
                {"mean_abs_td", log.mean_abs_td},
                {"episode_return", log.episode_return},
                {"wall_seconds", log.wall_seconds},
                {"cpu_seconds", log.cpu_seconds},
                {"diverged", log.diverged}};
}

inline constexpr int kCheckpointFormatVersion = 1;

inline json checkpoint_to_json(const MlpParams& theta, const TrainConfig& cfg,
                               std::int64_t episode_count) {
    json j = mlp_to_json(theta);
    j["format_version"] = kCheckpointFormatVersion;
    j["n"] = cfg.n;
    j["d"] = cfg.d;
    j["train_config"] = train_config_to_json(cfg);
    j["episode_count"] = episode_count;
    j["rng_state"] = derive_seed(cfg.seed, "episode", episode_count);
    return j;
}

struct Checkpoint {
    MlpParams theta;
    TrainConfig config;
    std::int64_t episode_count = 0;
};

inline Checkpoint checkpoint_from_json(const json& j) {
    int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion)
        throw InvalidArgument("checkpoint: unsupported format version " +
                              std::to_string(version));
    Checkpoint cp;
    cp.theta = mlp_from_json(j);
    cp.config = train_config_from_json(j.at("train_config"));
    cp.episode_count = j.at("episode_count").get<std::int64_t>();
    if (cp.theta.input != 2 * j.at("n").get<int>() + 1)
        throw InvalidArgument("checkpoint: weight shape does not match n");
    return cp;
}

} // namespace deckopt
