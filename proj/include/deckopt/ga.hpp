#pragma once
#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/rng.hpp"
#include "deckopt/timing.hpp"

// Genetic-algorithm deck search: tournament selection, a crossover that
// exchanges only the cards the parents do not share, and a one-card-swap
// mutation. All operators keep the deck size at exactly D.

namespace deckopt {

struct GaConfig {
    int population_size = 10;
    double p_mutation = 0.2;
    double p_crossover = 0.2;
    int tournament_size = 3;
    std::int64_t budget_f_calls = -1;   // -1: no evaluation cap
    double budget_wall_seconds = 0.0;   // <= 0: no wall-clock cap
    std::uint64_t seed = 0;

    void validate() const {
        if (population_size < 2) throw InvalidArgument("ga: population must be >= 2");
        if (p_mutation < 0.0 || p_mutation > 1.0 || p_crossover < 0.0 ||
            p_crossover > 1.0)
            throw InvalidArgument("ga: probabilities must lie in [0, 1]");
        if (tournament_size < 1) throw InvalidArgument("ga: tournament size < 1");
    }
};

/// Swaps one random in-deck card with one random out-of-deck card.
inline DeckVector ga_mutate(const DeckVector& x, Rng& rng) {
    std::vector<int> in_deck = x.card_ids();
    std::vector<int> out_deck;
    out_deck.reserve(x.size() - in_deck.size());
    for (int i = 0; i < x.size(); ++i)
        if (!x.test(i)) out_deck.push_back(i);
    if (in_deck.empty() || out_deck.empty())
        throw InvalidArgument("ga_mutate: deck must be a proper subset of the pool");
    DeckVector y = x;
    y.clear(in_deck[rng.below(in_deck.size())]);
    y.set(out_deck[rng.below(out_deck.size())]);
    return y;
}

inline DeckVector ga_mutate(const DeckVector& x, std::uint64_t seed) {
    Rng rng(seed);
    return ga_mutate(x, rng);
}

/// Keeps the shared cards in both children and deals the non-shared cards
/// out randomly, half to each child, so both stay at popcount D.
inline std::pair<DeckVector, DeckVector> ga_crossover(const DeckVector& x1,
                                                      const DeckVector& x2,
                                                      Rng& rng) {
    if (x1.size() != x2.size() || x1.popcount() != x2.popcount())
        throw InvalidArgument("ga_crossover: parents must have equal shape");
    std::vector<int> only;
    DeckVector c1 = x1, c2 = x2;
    for (int i = 0; i < x1.size(); ++i) {
        if (x1.test(i) != x2.test(i)) {
            only.push_back(i);
            c1.clear(i);
            c2.clear(i);
        }
    }
    for (std::size_t i = only.size(); i > 1; --i)
        std::swap(only[i - 1], only[rng.below(i)]);
    for (std::size_t i = 0; i < only.size(); ++i)
        (i < only.size() / 2 ? c1 : c2).set(only[i]);
    return {c1, c2};
}

inline std::pair<DeckVector, DeckVector> ga_crossover(const DeckVector& x1,
                                                      const DeckVector& x2,
                                                      std::uint64_t seed) {
    Rng rng(seed);
    return ga_crossover(x1, x2, rng);
}

/// Best of k uniform draws (with replacement); earlier-drawn wins ties.
inline std::size_t tournament_select(const std::vector<double>& fitness, int k,
                                     Rng& rng) {
    if (fitness.size() < static_cast<std::size_t>(k))
        throw InvalidArgument("tournament_select: population smaller than k");
    std::size_t best = rng.below(fitness.size());
    for (int i = 1; i < k; ++i) {
        std::size_t challenger = rng.below(fitness.size());
        if (fitness[challenger] > fitness[best]) best = challenger;
    }
    return best;
}

struct GaLog {
    std::int64_t generations = 0;
    std::uint64_t f_calls = 0;
    std::uint64_t cache_hits = 0;
    std::vector<double> best_per_generation; // best-ever after each evaluation pass
    std::vector<double> mean_per_generation;
    double best_f = 0.0;
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

struct GaResult {
    DeckVector deck;
    GaLog log;
};

/// Generational GA against one opponent deck. Fitness of every individual is
/// resolved once per generation through a per-run cache; the budget is
/// checked between generations, so a zero budget still ranks the random
/// initial population.
inline GaResult ga_search(const Evaluator& evaluate, const DeckVector& x_o,
                          const GaConfig& cfg) {
    cfg.validate();
    StopWatch watch;
    int n = evaluate.pool().n_cards;
    int d = x_o.popcount();
    if (x_o.size() != n || d == 0 || d >= n)
        throw InvalidArgument("ga_search: opponent deck does not fit the pool");

    GaResult result;
    GaLog& log = result.log;
    std::uint64_t calls_before = evaluate.calls();
    Rng rng(derive_seed(cfg.seed, "ga"));
    std::unordered_map<std::string, double> cache;
    std::uint64_t eval_sequence = 0;

    std::vector<DeckVector> population;
    population.reserve(cfg.population_size);
    for (int i = 0; i < cfg.population_size; ++i)
        population.push_back(random_deck(n, d, rng));

    double best_f = -1.0;
    auto evaluate_population = [&](const std::vector<DeckVector>& pop) {
        std::vector<double> fitness(pop.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            auto it = cache.find(pop[i].key());
            if (it != cache.end()) {
                fitness[i] = it->second;
                ++log.cache_hits;
            } else {
                std::uint64_t s = derive_seed(cfg.seed, "fitness", eval_sequence++);
                fitness[i] = evaluate(pop[i], x_o, s).value;
                cache.emplace(pop[i].key(), fitness[i]);
            }
            sum += fitness[i];
            if (fitness[i] > best_f) {
                best_f = fitness[i];
                result.deck = pop[i];
            }
        }
        log.best_per_generation.push_back(best_f);
        log.mean_per_generation.push_back(sum / pop.size());
        return fitness;
    };

    std::vector<double> fitness = evaluate_population(population);
    while (true) {
        if (cfg.budget_f_calls >= 0 &&
            evaluate.calls() - calls_before >=
                static_cast<std::uint64_t>(cfg.budget_f_calls))
            break;
        if (cfg.budget_wall_seconds > 0.0 &&
            watch.elapsed().wall_seconds >= cfg.budget_wall_seconds)
            break;
        if (cfg.budget_f_calls < 0 && cfg.budget_wall_seconds <= 0.0)
            throw InvalidArgument("ga_search: need an f-call or wall-clock budget");

        std::vector<DeckVector> next;
        next.reserve(cfg.population_size);
        for (int i = 0; i < cfg.population_size; ++i)
            next.push_back(population[tournament_select(fitness, cfg.tournament_size, rng)]);
        for (int i = 0; i + 1 < cfg.population_size; i += 2) {
            if (rng.chance(cfg.p_crossover)) {
                auto [c1, c2] = ga_crossover(next[i], next[i + 1], rng);
                next[i] = c1;
                next[i + 1] = c2;
            }
        }
        for (DeckVector& x : next)
            if (rng.chance(cfg.p_mutation)) x = ga_mutate(x, rng);
        population = std::move(next);
        fitness = evaluate_population(population);
        ++log.generations;
    }

    log.f_calls = evaluate.calls() - calls_before;
    log.best_f = best_f;
    TimeSample t = watch.elapsed();
    log.wall_seconds = t.wall_seconds;
    log.cpu_seconds = t.cpu_seconds;
    return result;
}

} // namespace deckopt
