#pragma once
#include <algorithm>
#include <cstdint>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/rng.hpp"

// Exhaustive ground truth for tiny pools: evaluate every C(N, D) deck and
// rank them. Exists to validate the learned policy, not to scale.

namespace deckopt {

inline constexpr std::int64_t kBruteForceLimit = 100000;

/// C(n, k), capped: returns a value > cap instead of overflowing.
inline std::int64_t binomial_capped(int n, int k, std::int64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

struct RankedDeck {
    DeckVector deck;
    double f = 0.0;
};

/// Every valid deck with its evaluated win rate, best first; ties broken by
/// lexicographic card order so the ranking is total.
inline std::vector<RankedDeck> brute_force_solve(const Evaluator& evaluate,
                                                 const DeckVector& x_o,
                                                 std::uint64_t seed) {
    int n = evaluate.pool().n_cards;
    int d = x_o.popcount();
    if (x_o.size() != n || d == 0 || d >= n)
        throw InvalidArgument("brute_force_solve: opponent deck does not fit the pool");
    if (binomial_capped(n, d, kBruteForceLimit) > kBruteForceLimit)
        throw InstanceTooLarge("brute_force_solve: C(N, D) exceeds " +
                               std::to_string(kBruteForceLimit));

    std::vector<RankedDeck> ranking;
    std::vector<int> pick(d);
    for (int i = 0; i < d; ++i) pick[i] = i;
    std::int64_t index = 0;
    while (true) {
        DeckVector deck = DeckVector::from_cards(n, pick);
        double f = evaluate(deck, x_o, derive_seed(seed, "brute", index++)).value;
        ranking.push_back(RankedDeck{std::move(deck), f});
        int i = d - 1;
        while (i >= 0 && pick[i] == n - d + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(ranking.begin(), ranking.end(),
              [](const RankedDeck& a, const RankedDeck& b) {
                  if (a.f != b.f) return a.f > b.f;
                  return a.deck < b.deck;
              });
    return ranking;
}

/// Position (0-based) of the deck in a ranking, or -1 when absent.
inline std::int64_t rank_of_deck(const std::vector<RankedDeck>& ranking,
                                 const DeckVector& deck) {
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (ranking[i].deck == deck) return static_cast<std::int64_t>(i);
    return -1;
}

} // namespace deckopt
