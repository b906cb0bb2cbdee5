#pragma once
#include <cstdint>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/predictor.hpp"
#include "deckopt/rng.hpp"
#include "deckopt/timing.hpp"

// Monte-Carlo deck search over the learned predictor: draw X random decks,
// keep the one the predictor likes best. No matches are simulated. Sample i
// depends only on (seed, i), so runs with larger X extend smaller ones and
// the winning predicted value cannot decrease as X grows.

namespace deckopt {

struct McConfig {
    std::int64_t x_samples = 67;
    std::uint64_t seed = 0;
};

struct McLog {
    std::int64_t x_samples = 0;
    double predicted_win_rate = 0.0;
    std::uint64_t f_calls = 0; // always zero
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
};

struct McResult {
    DeckVector deck;
    McLog log;
};

inline McResult mc_solve(const WinRatePredictor& predictor, const DeckVector& x_o,
                         const McConfig& cfg) {
    if (cfg.x_samples < 1) throw InvalidArgument("mc_solve: X must be >= 1");
    if (x_o.size() != predictor.n)
        throw InvalidArgument("mc_solve: opponent deck does not match predictor");
    StopWatch watch;
    int n = predictor.n;
    int d = x_o.popcount();
    McResult result;
    result.log.x_samples = cfg.x_samples;
    double best = -1.0;
    for (std::int64_t i = 0; i < cfg.x_samples; ++i) {
        DeckVector x = random_deck(n, d, derive_seed(cfg.seed, "mc_sample", i));
        double predicted = predictor.predict(x, x_o);
        if (predicted > best) {
            best = predicted;
            result.deck = x;
        }
    }
    result.log.predicted_win_rate = best;
    TimeSample t = watch.elapsed();
    result.log.wall_seconds = t.wall_seconds;
    result.log.cpu_seconds = t.cpu_seconds;
    return result;
}

} // namespace deckopt
