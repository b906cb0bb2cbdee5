#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "deckopt/cards.hpp"
#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/game.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/rng.hpp"

// Benchmark instances are opponent decks. To avoid benchmarking only against
// random decks, instances are produced by a self-play chain: each round the
// deck-building algorithms answer the current opponent, and one of their
// answers (chosen with probability proportional to its win rate) becomes the
// next opponent. Early rounds are warmup and produce no instances.

namespace deckopt {

struct ProblemInstance {
    int id = 0;
    DeckVector x_o;
};

struct CandidateDeck {
    std::string source; // label of the producing algorithm
    DeckVector deck;
    double win_rate = 0.0; // against the round's opponent
};

struct ChainRound {
    int round = 0;
    bool warmup = false;
    DeckVector x_o; // opponent the candidates answered
    std::vector<CandidateDeck> candidates;
    int picked = -1; // index of the candidate promoted to next opponent
};

struct InstanceSet {
    std::uint64_t pool_seed = 0;
    int n = 0;
    int d = 0;
    std::vector<ProblemInstance> instances;
    std::vector<ChainRound> provenance;
};

/// Picks an index with probability weights[i] / sum(weights); if every
/// weight is zero the draw is uniform.
inline std::size_t sample_weighted(const std::vector<double>& weights, Rng& rng) {
    if (weights.empty()) throw InvalidArgument("sample_weighted: no weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InvalidArgument("sample_weighted: negative weight");
        total += w;
    }
    if (total <= 0.0) return rng.below(weights.size());
    double u = rng.unit_real() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

/// Produces, for one round, the candidate decks the chain samples from.
using CandidateProvider =
    std::function<std::vector<CandidateDeck>(const ProblemInstance&, bool warmup)>;

/// Runs warmup + k chain rounds from a random starting opponent. Instance i
/// is the opponent faced in post-warmup round i.
inline InstanceSet generate_instance_chain(const CardPool& pool, int d, int k,
                                           int warmup, std::uint64_t seed,
                                           const CandidateProvider& provider) {
    if (k < 1) throw InvalidArgument("generate_instance_chain: k must be >= 1");
    if (warmup < 0) throw InvalidArgument("generate_instance_chain: warmup < 0");
    InstanceSet set;
    set.pool_seed = pool.seed;
    set.n = pool.n_cards;
    set.d = d;
    DeckVector x_o = random_deck(pool.n_cards, d, derive_seed(seed, "chain_init"));
    for (int round = 0; round < warmup + k; ++round) {
        bool is_warmup = round < warmup;
        ProblemInstance inst{is_warmup ? -1 : round - warmup, x_o};
        if (!is_warmup) set.instances.push_back(inst);
        std::vector<CandidateDeck> candidates = provider(inst, is_warmup);
        if (candidates.empty())
            throw GenerationFailure("generate_instance_chain: provider returned no decks");
        std::vector<double> weights;
        weights.reserve(candidates.size());
        for (const CandidateDeck& c : candidates) weights.push_back(c.win_rate);
        Rng rng(derive_seed(seed, "chain_pick", round));
        std::size_t picked = sample_weighted(weights, rng);
        set.provenance.push_back(
            ChainRound{round, is_warmup, x_o, candidates, static_cast<int>(picked)});
        x_o = candidates[picked].deck;
    }
    return set;
}

// ---------------------------------------------------------------------------
// JSON

inline json instance_set_to_json(const InstanceSet& set) {
    json instances = json::array();
    for (const ProblemInstance& inst : set.instances)
        instances.push_back(json{{"id", inst.id}, {"x_o", inst.x_o.card_ids()}});
    json provenance = json::array();
    for (const ChainRound& round : set.provenance) {
        json cands = json::array();
        for (const CandidateDeck& c : round.candidates)
            cands.push_back(json{{"source", c.source},
                                 {"deck", c.deck.card_ids()},
                                 {"win_rate", c.win_rate}});
        provenance.push_back(json{{"round", round.round},
                                  {"warmup", round.warmup},
                                  {"x_o", round.x_o.card_ids()},
                                  {"candidates", cands},
                                  {"picked", round.picked}});
    }
    return json{{"pool_seed", set.pool_seed}, {"n", set.n}, {"d", set.d},
                {"instances", instances}, {"provenance", provenance}};
}

inline InstanceSet instance_set_from_json(const json& j) {
    InstanceSet set;
    set.pool_seed = j.at("pool_seed").get<std::uint64_t>();
    set.n = j.at("n").get<int>();
    set.d = j.at("d").get<int>();
    if (set.n <= 0 || set.d <= 0 || set.d >= set.n)
        throw InvalidArgument("instance set: need 0 < d < n");
    for (const json& ji : j.at("instances")) {
        ProblemInstance inst;
        inst.id = ji.at("id").get<int>();
        inst.x_o = DeckVector::from_cards(set.n, ji.at("x_o").get<std::vector<int>>());
        if (inst.x_o.popcount() != set.d)
            throw InvalidArgument("instance set: deck size mismatch");
        set.instances.push_back(std::move(inst));
    }
    if (j.contains("provenance")) {
        for (const json& jr : j.at("provenance")) {
            ChainRound round;
            round.round = jr.at("round").get<int>();
            round.warmup = jr.at("warmup").get<bool>();
            round.x_o = DeckVector::from_cards(set.n, jr.at("x_o").get<std::vector<int>>());
            for (const json& jc : jr.at("candidates")) {
                CandidateDeck c;
                c.source = jc.at("source").get<std::string>();
                c.deck = DeckVector::from_cards(set.n, jc.at("deck").get<std::vector<int>>());
                c.win_rate = jc.at("win_rate").get<double>();
                round.candidates.push_back(std::move(c));
            }
            round.picked = jr.at("picked").get<int>();
            set.provenance.push_back(std::move(round));
        }
    }
    return set;
}

} // namespace deckopt
