#include <catch2/catch_amalgamated.hpp>

#include <deckopt/evaluate.hpp>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

using namespace deckopt;

namespace {

const CardPool& shared_pool() {
    static CardPool pool = generate_card_pool(7, 40);
    return pool;
}

} // namespace

TEST_CASE("parallel_for covers every index exactly once in any layout") {
    for (int workers : {1, 2, 3, 7}) {
        std::vector<std::atomic<int>> hits(23);
        for (auto& h : hits) h = 0;
        parallel_for(23, workers, [&](int i) { hits[i] += 1; });
        for (const auto& h : hits) CHECK(h == 1);
    }
    parallel_for(0, 3, [](int) { FAIL("no work expected"); });
}

TEST_CASE("win rate evaluation demands an even number of matches") {
    const CardPool& pool = shared_pool();
    DeckVector a = random_deck(40, 8, std::uint64_t{1});
    DeckVector b = random_deck(40, 8, std::uint64_t{2});
    CHECK_THROWS_AS(evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 0, 3),
                    InvalidArgument);
    CHECK_THROWS_AS(evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 7, 3),
                    InvalidArgument);
    WinRate w = evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 2, 3);
    CHECK(w.num_matches == 2);
}

TEST_CASE("win rates stay in the unit interval and count draws") {
    const CardPool& pool = shared_pool();
    DeckVector a = random_deck(40, 8, std::uint64_t{3});
    DeckVector b = random_deck(40, 8, std::uint64_t{4});
    WinRate w = evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 100, 11);
    CHECK(w.value >= 0.0);
    CHECK(w.value <= 1.0);
    CHECK(w.num_draws >= 0);
    CHECK(w.num_draws <= 100);
    double scaled = w.value * 100.0;
    double wins = scaled - 0.5 * w.num_draws;
    CHECK(wins == Catch::Approx(std::round(wins)).margin(1e-9));
}

TEST_CASE("evaluation is deterministic in the seed and varies across seeds") {
    const CardPool& pool = shared_pool();
    DeckVector a = random_deck(40, 8, std::uint64_t{5});
    DeckVector b = random_deck(40, 8, std::uint64_t{6});
    WinRate w1 = evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 60, 21);
    WinRate w2 = evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 60, 21);
    CHECK(w1.value == w2.value);
    CHECK(w1.num_draws == w2.num_draws);

    std::set<double> values;
    for (std::uint64_t seed = 0; seed < 6; ++seed)
        values.insert(
            evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 60, seed).value);
    CHECK(values.size() > 1);
}

TEST_CASE("worker count never changes the result") {
    const CardPool& pool = shared_pool();
    DeckVector a = random_deck(40, 8, std::uint64_t{8});
    DeckVector b = random_deck(40, 8, std::uint64_t{9});
    WinRate serial =
        evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 80, 31, 1);
    for (int workers : {2, 3, 5}) {
        WinRate parallel =
            evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 80, 31, workers);
        CHECK(parallel.value == serial.value);
        CHECK(parallel.num_draws == serial.num_draws);
    }
}

TEST_CASE("mirror matchups land near one half") {
    const CardPool& pool = shared_pool();
    DeckVector a = random_deck(40, 8, std::uint64_t{12});
    WinRate w = evaluate_win_rate(pool, a, a, {ProxyConfig{}, ProxyConfig{}}, 300, 41);
    CHECK(w.value >= 0.35);
    CHECK(w.value <= 0.65);
}

TEST_CASE("evaluator counts true-fitness calls and matches the free function") {
    const CardPool& pool = shared_pool();
    Evaluator f(pool, ProxyConfig{}, ProxyConfig{}, 40, 1);
    DeckVector a = random_deck(40, 8, std::uint64_t{14});
    DeckVector b = random_deck(40, 8, std::uint64_t{15});
    CHECK(f.calls() == 0);
    WinRate v1 = f(a, b, 99);
    CHECK(f.calls() == 1);
    WinRate v2 = f(a, b, 99);
    CHECK(f.calls() == 2);
    CHECK(v1.value == v2.value);
    CHECK(v1.value ==
          evaluate_win_rate(pool, a, b, {ProxyConfig{}, ProxyConfig{}}, 40, 99).value);
    f.reset_calls();
    CHECK(f.calls() == 0);
    CHECK(f.num_matches() == 40);
    CHECK(&f.pool() == &pool);
}
