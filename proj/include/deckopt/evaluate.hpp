#pragma once
#include <atomic>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "deckopt/game.hpp"

namespace deckopt {

/// Run fn(i) for i in [0, n) on up to `workers` threads. Results must be
/// written to pre-sized slots so the outcome is scheduling-invariant.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto run = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    int nthreads = std::min(workers, n);
    std::vector<std::thread> threads;
    threads.reserve(nthreads - 1);
    for (int t = 1; t < nthreads; ++t) threads.emplace_back(run);
    run();
    for (std::thread& t : threads) t.join();
}

/// Estimated win probability of the player deck, draws counted as half wins.
struct WinRate {
    double value = 0.0;
    int num_matches = 0;
    int num_draws = 0;
};

/// Black-box objective: win rate of x_p against x_o over a batch of
/// independent matches. Per-match seeds are derived by hashing
/// (root_seed, match index) and the first player alternates, so the result
/// does not depend on execution order and a mirror match has expectation
/// exactly one half.
inline WinRate evaluate_win_rate(const CardPool& pool, const DeckVector& x_p,
                                 const DeckVector& x_o,
                                 const std::pair<ProxyConfig, ProxyConfig>& proxies,
                                 int num_matches, std::uint64_t root_seed,
                                 int workers = 1) {
    if (num_matches < 2 || num_matches % 2 != 0)
        throw InvalidArgument("evaluate_win_rate: num_matches must be even and >= 2");

    std::vector<MatchWinner> outcomes(num_matches);
    parallel_for(num_matches, workers, [&](int i) {
        std::uint64_t seed = derive_seed(root_seed, "match_seed", i);
        Player first = i % 2 == 0 ? Player::P0 : Player::P1;
        outcomes[i] = simulate_match(pool, x_p, x_o, proxies, seed, first).winner;
    });

    int wins = 0, draws = 0;
    for (MatchWinner w : outcomes) {
        if (w == MatchWinner::P0) ++wins;
        else if (w == MatchWinner::Draw) ++draws;
    }
    WinRate r;
    r.num_matches = num_matches;
    r.num_draws = draws;
    r.value = (wins + 0.5 * draws) / num_matches;
    return r;
}

/// Counting wrapper around evaluate_win_rate. Everything upstream (GA,
/// training rewards, the bench harness) calls f through one of these so
/// function-call accounting is exact.
class Evaluator {
public:
    Evaluator(const CardPool& pool, ProxyConfig proxy_p, ProxyConfig proxy_o,
              int num_matches, int workers = 1)
        : pool_(&pool), proxies_(proxy_p, proxy_o), num_matches_(num_matches),
          workers_(workers) {}

    WinRate operator()(const DeckVector& x_p, const DeckVector& x_o,
                       std::uint64_t root_seed) const {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return evaluate_win_rate(*pool_, x_p, x_o, proxies_, num_matches_,
                                 root_seed, workers_);
    }

    std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
    void reset_calls() { calls_.store(0, std::memory_order_relaxed); }

    const CardPool& pool() const { return *pool_; }
    const std::pair<ProxyConfig, ProxyConfig>& proxies() const { return proxies_; }
    int num_matches() const { return num_matches_; }
    int workers() const { return workers_; }

private:
    const CardPool* pool_;
    std::pair<ProxyConfig, ProxyConfig> proxies_;
    int num_matches_;
    int workers_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

} // namespace deckopt
