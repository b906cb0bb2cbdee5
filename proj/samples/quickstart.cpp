// End-to-end tour on a tiny pool: train a search policy for a minute, then
// recommend decks against fresh opponents and compare each recommendation
// with the exhaustive ranking.

#include <cstdio>
#include <deckopt/deckopt.hpp>

using namespace deckopt;

int main() {
    CardPool pool = generate_card_pool(7, 10);
    std::printf("pool: %d cards (seed %llu)\n", pool.n_cards,
                static_cast<unsigned long long>(pool.seed));

    TrainConfig cfg;
    cfg.n = 10;
    cfg.d = 3;
    cfg.hidden = 32;
    cfg.num_matches = 40;
    cfg.max_episodes = 400;
    cfg.seed = 1;
    TrainResult trained = train(pool, cfg);
    std::printf("trained %lld episodes, %llu win-rate calls, %.1fs\n",
                static_cast<long long>(trained.log.episodes),
                static_cast<unsigned long long>(trained.log.f_calls),
                trained.log.wall_seconds);

    Evaluator evaluate(pool, ProxyConfig{}, ProxyConfig{}, 100, 1);
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
        DeckVector x_o = random_deck(10, 3, derive_seed(42, "opponent", trial));
        SolveResult rec = solve_from_random(trained.theta, x_o, trial);
        auto ranking = brute_force_solve(evaluate, x_o, derive_seed(42, "rank", trial));
        std::int64_t rank = rank_of_deck(ranking, rec.deck);
        std::printf("opponent %llu: recommended rank %lld of %zu (%llu Q evals, "
                    "%llu f calls during solve)\n",
                    static_cast<unsigned long long>(trial),
                    static_cast<long long>(rank), ranking.size(),
                    static_cast<unsigned long long>(rec.log.q_evals),
                    static_cast<unsigned long long>(rec.log.f_calls));
    }
    return 0;
}
